#include "nms/ingest.hpp"

#include "nms/errors.hpp"
#include "nms/price.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace nms {

namespace {

constexpr std::size_t kFieldCount = 13;

enum Field : std::size_t {
  kObsTs, kFeed, kKind, kSymbol, kVenue, kBidPx, kBidSz, kAskPx, kAskSz, kTradePx, kTradeSz, kSideHint, kOriginTs
};

constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "obs_ts_us", "feed", "kind", "symbol", "venue", "bid_px_e4", "bid_sz",
    "ask_px_e4", "ask_sz", "trade_px_e4", "trade_sz", "side_hint", "origin_ts_us"};

[[noreturn]] void bad_field(std::size_t field, std::string_view value, std::size_t line_no) {
  throw ParseError("bad " + std::string(kFieldNames[field]) + " '" + std::string(value) + "'", line_no);
}

std::int64_t int_field(std::size_t field, std::string_view value, std::size_t line_no) {
  std::int64_t v = 0;
  if (!parse_int(value, v)) bad_field(field, value, line_no);
  return v;
}

std::int64_t non_negative(std::size_t field, std::int64_t v, std::size_t line_no) {
  if (v < 0) throw ValidationError(std::string(kFieldNames[field]) + " is negative", line_no);
  return v;
}

std::optional<Level> level_field(std::size_t px_field, std::string_view px, std::string_view sz, std::size_t line_no) {
  if (px.empty() && sz.empty()) return std::nullopt;
  if (sz.empty()) throw ParseError(std::string(kFieldNames[px_field]) + " without size", line_no);
  Level l;
  l.qty.value = non_negative(px_field + 1, int_field(px_field + 1, sz, line_no), line_no);
  if (px.empty()) {
    // Withdrawal marker: empty price, zero size.
    if (l.qty.value != 0) throw ParseError(std::string(kFieldNames[px_field + 1]) + " without price", line_no);
    return l;
  }
  l.px.value = non_negative(px_field, int_field(px_field, px, line_no), line_no);
  return l;
}

void check_semantics(ObserverEvent& ev, std::size_t line_no) {
  if (ev.kind == EventKind::Trade) {
    if (ev.bid || ev.offer) throw ValidationError("trade event carries quote fields", line_no);
    if (!ev.trade) throw ValidationError("trade event without trade price/size", line_no);
    if (ev.trade->qty.value <= 0) throw ValidationError("trade size must be positive", line_no);
  } else {
    if (ev.trade) throw ValidationError("quote event carries trade fields", line_no);
    if (!ev.bid && !ev.offer) throw ValidationError("quote event without bid or offer", line_no);
  }
}

SideHint side_hint_field(std::string_view v, std::size_t line_no) {
  if (v.empty() || v == "U") return SideHint::Unknown;
  if (v == "B") return SideHint::Buy;
  if (v == "S") return SideHint::Sell;
  bad_field(kSideHint, v, line_no);
}

char side_hint_char(SideHint h) {
  switch (h) {
    case SideHint::Buy: return 'B';
    case SideHint::Sell: return 'S';
    case SideHint::Unknown: break;
  }
  return 'U';
}

ObserverEvent from_fields(const std::array<std::string_view, kFieldCount>& f, std::size_t line_no) {
  ObserverEvent ev;
  ev.obs_ts.value = non_negative(kObsTs, int_field(kObsTs, f[kObsTs], line_no), line_no);
  try {
    ev.feed = FeedId::parse(f[kFeed]);
  } catch (const ParseError&) {
    bad_field(kFeed, f[kFeed], line_no);
  }
  if (f[kKind] == "Q") {
    ev.kind = EventKind::Quote;
  } else if (f[kKind] == "T") {
    ev.kind = EventKind::Trade;
  } else {
    bad_field(kKind, f[kKind], line_no);
  }
  if (!SymbolId::valid(f[kSymbol])) bad_field(kSymbol, f[kSymbol], line_no);
  ev.symbol = SymbolId::parse(f[kSymbol]);
  std::int64_t venue = int_field(kVenue, f[kVenue], line_no);
  if (venue < 0 || venue >= static_cast<std::int64_t>(kMaxVenues)) bad_field(kVenue, f[kVenue], line_no);
  ev.venue = static_cast<VenueId>(venue);
  ev.bid = level_field(kBidPx, f[kBidPx], f[kBidSz], line_no);
  ev.offer = level_field(kAskPx, f[kAskPx], f[kAskSz], line_no);
  ev.trade = level_field(kTradePx, f[kTradePx], f[kTradeSz], line_no);
  ev.side_hint = side_hint_field(f[kSideHint], line_no);
  if (!f[kOriginTs].empty())
    ev.origin_ts = TimeUs{non_negative(kOriginTs, int_field(kOriginTs, f[kOriginTs], line_no), line_no)};
  check_semantics(ev, line_no);
  return ev;
}

void append_int(std::string& out, std::int64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void append_level(std::string& out, const std::optional<Level>& l) {
  if (l) {
    if (!(l->qty.value == 0 && l->px.value == 0)) append_int(out, l->px.value);
    out.push_back(',');
    append_int(out, l->qty.value);
  } else {
    out.push_back(',');
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename F>
void for_each_line(std::string_view text, std::size_t first_line_no, F&& f) {
  std::size_t line_no = first_line_no;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    f(strip_cr(line), line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
    ++line_no;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

bool looks_like_ndjson(const std::filesystem::path& path, std::string_view text) {
  auto ext = path.extension().string();
  if (ext == ".ndjson" || ext == ".jsonl") return true;
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && text[pos] == '{';
}

std::uint64_t count_inversions(std::vector<std::int64_t>& v, std::vector<std::int64_t>& tmp, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t n = count_inversions(v, tmp, lo, mid) + count_inversions(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      n += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return n;
}

} // namespace

ObserverEvent parse_event(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, kFieldCount> fields;
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n == kFieldCount) throw ParseError("too many fields (expected 13)", line_no);
      fields[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != kFieldCount) throw ParseError("expected 13 fields, got " + std::to_string(n), line_no);
  return from_fields(fields, line_no);
}

ObserverEvent parse_event_json(std::string_view line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw ParseError("NDJSON record is not an object", line_no);
  std::array<std::string, kFieldCount> storage;
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    auto it = j.find(std::string(kFieldNames[i]));
    if (it == j.end() || it->is_null()) continue;
    if (it->is_string()) {
      storage[i] = it->get<std::string>();
    } else if (it->is_number_integer()) {
      storage[i] = std::to_string(it->get<std::int64_t>());
    } else {
      throw ParseError("field " + std::string(kFieldNames[i]) + " must be a string or integer", line_no);
    }
  }
  std::array<std::string_view, kFieldCount> fields;
  for (std::size_t i = 0; i < kFieldCount; ++i) fields[i] = storage[i];
  return from_fields(fields, line_no);
}

void append_event_csv(std::string& out, const ObserverEvent& ev) {
  append_int(out, ev.obs_ts.value);
  out.push_back(',');
  out += ev.feed.to_string();
  out.push_back(',');
  out.push_back(ev.kind == EventKind::Quote ? 'Q' : 'T');
  out.push_back(',');
  out += ev.symbol.view();
  out.push_back(',');
  append_int(out, ev.venue);
  out.push_back(',');
  append_level(out, ev.bid);
  out.push_back(',');
  append_level(out, ev.offer);
  out.push_back(',');
  append_level(out, ev.trade);
  out.push_back(',');
  out.push_back(side_hint_char(ev.side_hint));
  out.push_back(',');
  if (ev.origin_ts) append_int(out, ev.origin_ts->value);
}

std::string serialize_event(const ObserverEvent& ev) {
  std::string out;
  append_event_csv(out, ev);
  return out;
}

void parse_csv_text(std::string_view text, bool expect_header, const EventSink& sink, std::size_t first_line_no) {
  bool header_pending = expect_header;
  for_each_line(text, first_line_no, [&](std::string_view line, std::size_t line_no) {
    if (header_pending) {
      if (line != kEventCsvHeader) throw ParseError("missing or wrong CSV header", line_no);
      header_pending = false;
      return;
    }
    if (line.empty()) return;
    sink(parse_event(line, line_no));
  });
  if (header_pending) throw ParseError("missing CSV header", first_line_no);
}

void parse_ndjson_text(std::string_view text, const EventSink& sink, std::size_t first_line_no) {
  for_each_line(text, first_line_no, [&](std::string_view line, std::size_t line_no) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    sink(parse_event_json(line, line_no));
  });
}

void read_events(const std::filesystem::path& path, const EventSink& sink) {
  std::string text = read_file(path);
  try {
    if (looks_like_ndjson(path, text)) {
      parse_ndjson_text(text, sink);
    } else {
      parse_csv_text(text, true, sink);
    }
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<ObserverEvent> read_events(const std::filesystem::path& path) {
  std::vector<ObserverEvent> out;
  read_events(path, [&](const ObserverEvent& ev) { out.push_back(ev); });
  return out;
}

void write_events_csv(std::ostream& os, std::span<const ObserverEvent> events) {
  std::string buf;
  buf.reserve(64 * 1024);
  buf += kEventCsvHeader;
  buf.push_back('\n');
  for (const auto& ev : events) {
    append_event_csv(buf, ev);
    buf.push_back('\n');
    if (buf.size() > 60 * 1024) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
}

bool is_time_ordered(std::span<const ObserverEvent> events) {
  return std::is_sorted(events.begin(), events.end(),
                        [](const ObserverEvent& a, const ObserverEvent& b) { return a.obs_ts < b.obs_ts; });
}

ValidationReport validate_stream(std::span<const ObserverEvent> events) {
  ValidationReport r;
  r.events = events.size();

  std::vector<std::int64_t> ts;
  ts.reserve(events.size());
  for (const auto& ev : events) ts.push_back(ev.obs_ts.value);
  std::vector<std::int64_t> tmp(ts.size());
  r.regressions = count_inversions(ts, tmp, 0, ts.size());

  using QuoteKey = std::tuple<FeedId, SymbolId>;
  std::map<QuoteKey, std::pair<std::optional<Level>, std::optional<Level>>> last_quote;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (i > 0) {
      if (ev.obs_ts < events[i - 1].obs_ts) ++r.regression_sites;
      if (ev.obs_ts == events[i - 1].obs_ts) ++r.ties;
    }
    if (!ev.feed.is_sip() && ev.venue != ev.feed.venue()) ++r.venue_mismatches;
    if (ev.origin_ts && *ev.origin_ts > ev.obs_ts) ++r.clock_inversions;

    auto& cov = r.coverage[ev.symbol];
    if (ev.kind == EventKind::Trade) {
      ++cov.trades;
      continue;
    }
    if (ev.feed.is_sip()) {
      ++cov.sip_quotes;
    } else {
      ++cov.direct_quotes;
    }
    auto key = QuoteKey{ev.feed, ev.symbol};
    auto [it, inserted] = last_quote.try_emplace(key, ev.bid, ev.offer);
    if (!inserted) {
      if (it->second.first == ev.bid && it->second.second == ev.offer) ++r.duplicate_quotes;
      it->second = {ev.bid, ev.offer};
    }
  }
  return r;
}

} // namespace nms
