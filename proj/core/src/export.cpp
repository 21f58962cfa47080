#include "nms/export.hpp"

#include "nms/errors.hpp"
#include "nms/price.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nms::io {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string px_or_empty(const std::optional<Level>& l) { return l ? price_to_decimal(l->px) : std::string(); }

} // namespace

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void write_segments_csv(std::ostream& os, std::span<const disloc::DislocationSegment> segments) {
  std::string buf;
  buf += kSegmentHeader;
  buf += '\n';
  for (const auto& s : segments) {
    buf += s.symbol.view();
    buf += ',';
    buf += to_string(s.side);
    buf += ',' + std::to_string(s.start.value) + ',' + std::to_string(s.end.value) + ',' +
           std::to_string(s.duration_us()) + ',' + std::to_string(s.direction) + ',' + std::to_string(s.min_dp.value) +
           ',' + std::to_string(s.max_dp.value) + ',' + std::to_string(s.min_mag().value) + ',' +
           std::to_string(s.max_mag().value) + ',' + (s.flags.actionable ? "1" : "0") + ',' +
           (s.flags.large ? "1" : "0") + ',' + (s.truncated ? "1" : "0") + ',' + (s.flags.large_by_max ? "1" : "0") +
           '\n';
    if (buf.size() > 60000) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
}

std::vector<disloc::DislocationSegment> read_segments_csv(std::istream& is) {
  std::vector<disloc::DislocationSegment> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      if (line != kSegmentHeader) throw ParseError("missing or wrong segment CSV header", line_no);
      header = false;
      continue;
    }
    if (line.empty()) continue;
    auto f = split_commas(line);
    if (f.size() != 14) throw ParseError("expected 14 fields", line_no);
    auto num = [&](std::size_t i) {
      std::int64_t v = 0;
      if (!parse_int(f[i], v)) throw ParseError("bad number '" + std::string(f[i]) + "'", line_no);
      return v;
    };
    auto flag = [&](std::size_t i) {
      if (f[i] != "0" && f[i] != "1") throw ParseError("bad flag '" + std::string(f[i]) + "'", line_no);
      return f[i] == "1";
    };
    disloc::DislocationSegment s;
    if (!SymbolId::valid(f[0])) throw ParseError("bad symbol", line_no);
    s.symbol = SymbolId::parse(f[0]);
    if (f[1] == "bid") {
      s.side = Side::Bid;
    } else if (f[1] == "offer") {
      s.side = Side::Offer;
    } else {
      throw ParseError("bad side '" + std::string(f[1]) + "'", line_no);
    }
    s.start = TimeUs{num(2)};
    s.end = TimeUs{num(3)};
    s.direction = static_cast<int>(num(5));
    if (s.direction != 1 && s.direction != -1) throw ParseError("direction must be 1 or -1", line_no);
    s.min_dp = PriceE4{num(6)};
    s.max_dp = PriceE4{num(7)};
    if (s.end < s.start || s.min_dp > s.max_dp) throw ValidationError("inconsistent segment", line_no);
    s.flags.actionable = flag(10);
    s.flags.large = flag(11);
    s.truncated = flag(12);
    s.flags.large_by_max = flag(13);
    out.push_back(s);
  }
  if (header) throw ParseError("empty segment CSV");
  return out;
}

std::vector<disloc::DislocationSegment> read_segments_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_segments_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_histogram_csv(std::ostream& os, std::span<const stats::MinuteBin> bins) {
  os << kHistogramHeader << '\n';
  for (const auto& b : bins) os << b.minute << ',' << b.counts[0] << ',' << b.counts[1] << ',' << b.counts[2] << '\n';
}

void write_stats_csv(std::ostream& os, const stats::StatsTable& table) {
  os << kStatsHeader << '\n';
  const char* names[] = {"count", "mean", "std", "min", "25%", "50%", "75%", "max"};
  for (const auto& tier : table.tiers) {
    for (std::size_t r = 0; r < 8; ++r) {
      os << stats::tier_name(tier.tier) << ',' << names[r];
      for (std::size_t c = 0; c < stats::kColumns.size(); ++c) {
        const stats::Summary& s = tier.columns[c];
        const double scale = stats::column_scale(stats::kColumns[c]);
        os << ',';
        if (r == 0) {
          os << s.count;
          continue;
        }
        const std::optional<double>* fields[] = {nullptr, &s.mean, &s.std, &s.min, &s.q25, &s.q50, &s.q75, &s.max};
        if (*fields[r]) os << format_fixed(**fields[r] / scale, 6);
      }
      os << '\n';
    }
  }
}

void write_nodes_csv(std::ostream& os, std::span<const netviz::NodePlacement> nodes) {
  os << kNodesHeader << '\n';
  for (const auto& n : nodes)
    os << n.index << ',' << n.ts.value << ',' << n.starts << ',' << n.stops << ',' << n.ray << ',' << n.pos_in_ray
       << ',' << format_fixed(n.angle, 9) << '\n';
}

void write_edges_csv(std::ostream& os, std::span<const netviz::Edge> edges) {
  os << kEdgesHeader << '\n';
  for (const auto& e : edges) os << e.i << ',' << e.j << ',' << e.weight_e4 << ',' << e.count << '\n';
}

void write_components_csv(std::ostream& os, const netviz::OrderedNetwork& net,
                          std::span<const netviz::Component> components) {
  os << kComponentsHeader << '\n';
  for (const auto& c : components) {
    os << c.id << ',';
    for (std::size_t k = 0; k < c.nodes.size(); ++k) os << (k ? " " : "") << c.nodes[k];
    os << ',';
    const auto w = netviz::walk(net, c);
    for (std::size_t k = 0; k < w.steps.size(); ++k) os << (k ? " " : "") << w.steps[k];
    os << '\n';
  }
}

void write_trades_roc_csv(std::ostream& os, std::span<const roc::TradeOutcome> outcomes) {
  os << kTradesRocHeader << '\n';
  for (const auto& o : outcomes) {
    const auto& t = o.trade;
    auto prefix = [&](std::ostream& out) {
      out << t.obs_ts.value << ',' << t.symbol.view() << ',' << static_cast<unsigned>(t.venue) << ','
          << t.trade->px.value << ',' << t.trade->qty.value << ',';
    };
    if (o.records.empty()) {
      prefix(os);
      os << roc::to_string(o.inferred) << ',' << (o.differing ? 1 : 0) << ",0,None\n";
      continue;
    }
    for (const auto& r : o.records) {
      prefix(os);
      os << roc::to_string(r.side) << ',' << (o.differing ? 1 : 0) << ',' << r.roc_e4 << ','
         << roc::to_string(r.flavor) << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& os, const roc::RocAggregate& agg) {
  os << "date,symbol,venue,trades,differing_trades,traded_value,differing_traded_value,sip_roc,direct_roc,net_roc,"
        "total_roc,fraction_differing_trades,fraction_differing_notional,ratio\n";
  auto row = [&](std::string_view date, std::string_view symbol, std::string_view venue, const roc::RocTotals& t) {
    const double ft = t.trades ? static_cast<double>(t.differing_trades) / static_cast<double>(t.trades) : 0.0;
    const double fn = t.traded_value ? static_cast<double>(t.differing_traded_value) / static_cast<double>(t.traded_value)
                                     : 0.0;
    const double ratio = ft > 0 ? fn / ft : 0.0;
    os << date << ',' << symbol << ',' << venue << ',' << t.trades << ',' << t.differing_trades << ','
       << money_to_decimal(t.traded_value) << ',' << money_to_decimal(t.differing_traded_value) << ','
       << money_to_decimal(t.sip_roc) << ',' << money_to_decimal(t.direct_roc) << ',' << money_to_decimal(t.net_roc())
       << ',' << money_to_decimal(t.total_roc()) << ',' << format_fixed(ft, 4) << ',' << format_fixed(fn, 4) << ','
       << format_fixed(ratio, 4) << '\n';
  };
  for (const auto& [k, t] : agg.by_key()) row(k.date, k.symbol.view(), std::to_string(k.venue), t);
  row("ALL", "ALL", "ALL", agg.totals());
}

void write_table_one_csv(std::ostream& os, const roc::TableOne& t) {
  os << "row,statistic,value\n";
  os << "1,Total Opportunity Cost," << money_to_decimal(t.total_oc) << '\n';
  os << "2,SIP Opportunity Cost," << money_to_decimal(t.sip_oc) << '\n';
  os << "3,Direct Opportunity Cost," << money_to_decimal(t.direct_oc) << '\n';
  os << "4,Trades," << t.trades << '\n';
  os << "5,Differing Trades," << t.differing_trades << '\n';
  os << "6,Traded Value," << money_to_decimal(t.traded_value) << '\n';
  os << "7,Differing Traded Value," << money_to_decimal(t.differing_traded_value) << '\n';
  os << "8,Fraction of differing trades," << format_fixed(t.fraction_differing_trades, 4) << '\n';
  os << "9,Fraction of differing notional," << format_fixed(t.fraction_differing_notional, 4) << '\n';
  os << "10,Ratio of (9) over (8)," << format_fixed(t.notional_over_trades, 4) << '\n';
  os << "gross_sip,Gross SIP ROC," << money_to_decimal(t.gross_sip_roc) << '\n';
  os << "gross_direct,Gross Direct ROC," << money_to_decimal(t.gross_direct_roc) << '\n';
}

void write_snapshot_header(std::ostream& os) { os << kSnapshotHeader << '\n'; }

void write_snapshot_row(std::ostream& os, TimeUs ts, SymbolId symbol, const consolidate::Snapshot& snap) {
  os << ts.value << ',' << symbol.view() << ',' << px_or_empty(snap.sip.bid) << ',' << px_or_empty(snap.sip.offer)
     << ',' << px_or_empty(snap.dbbo.bid) << ',' << px_or_empty(snap.dbbo.offer) << '\n';
}

} // namespace nms::io
