#pragma once

#include "nms/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nms {

enum class EventKind : std::uint8_t { Quote, Trade };
enum class SideHint : std::uint8_t { Buy, Sell, Unknown };

// One quote or trade message as stamped by the single observer clock.
//
// Quote events carry at least one of bid/offer; a side that is absent is left
// unchanged by consumers, a side with qty 0 withdraws the quote on that side.
// Trade events carry `trade` and neither bid nor offer. origin_ts is the
// exchange/SIP timestamp when known and is never used for ordering.
struct ObserverEvent {
  TimeUs obs_ts{};
  FeedId feed{};
  EventKind kind{EventKind::Quote};
  SymbolId symbol{};
  VenueId venue{0};
  std::optional<Level> bid;
  std::optional<Level> offer;
  std::optional<Level> trade;
  SideHint side_hint{SideHint::Unknown};
  std::optional<TimeUs> origin_ts;

  [[nodiscard]] const std::optional<Level>& quote_side(Side s) const { return s == Side::Bid ? bid : offer; }

  bool operator==(const ObserverEvent&) const = default;
};

inline constexpr std::string_view kEventCsvHeader =
    "obs_ts_us,feed,kind,symbol,venue,bid_px_e4,bid_sz,ask_px_e4,ask_sz,trade_px_e4,trade_sz,side_hint,origin_ts_us";

// One CSV record (no trailing newline). Throws ParseError for malformed
// fields and ValidationError for negative prices/sizes or kind/field
// mismatches; both carry line_no.
ObserverEvent parse_event(std::string_view line, std::size_t line_no = 0);

// One NDJSON object with the CSV field names. Values may be JSON numbers or
// strings; null and "" mean absent.
ObserverEvent parse_event_json(std::string_view line, std::size_t line_no = 0);

std::string serialize_event(const ObserverEvent& ev);
void append_event_csv(std::string& out, const ObserverEvent& ev);

using EventSink = std::function<void(const ObserverEvent&)>;

// Parses a CSV document. When expect_header is set the first line must be
// kEventCsvHeader. Blank lines are skipped. first_line_no numbers the first
// line of `text` for diagnostics.
void parse_csv_text(std::string_view text, bool expect_header, const EventSink& sink, std::size_t first_line_no = 1);
void parse_ndjson_text(std::string_view text, const EventSink& sink, std::size_t first_line_no = 1);

// Reads a whole file; NDJSON when the extension is .ndjson/.jsonl or the
// first non-blank byte is '{', CSV otherwise.
std::vector<ObserverEvent> read_events(const std::filesystem::path& path);
void read_events(const std::filesystem::path& path, const EventSink& sink);

void write_events_csv(std::ostream& os, std::span<const ObserverEvent> events);

struct SymbolCoverage {
  std::size_t sip_quotes = 0;
  std::size_t direct_quotes = 0;
  std::size_t trades = 0;

  bool operator==(const SymbolCoverage&) const = default;
};

struct ValidationReport {
  std::size_t events = 0;
  // Pairs (i < j) with obs_ts[i] > obs_ts[j]. Must be 0 before analytics.
  std::uint64_t regressions = 0;
  // Positions where obs_ts drops relative to the previous event.
  std::size_t regression_sites = 0;
  // Adjacent events sharing an obs_ts; legal, file order breaks the tie.
  std::size_t ties = 0;
  // Direct-feed events whose venue column disagrees with the feed id.
  std::size_t venue_mismatches = 0;
  // A quote repeating the previous quote of the same feed and symbol verbatim.
  std::size_t duplicate_quotes = 0;
  // Events whose origin timestamp is later than the observer timestamp.
  std::size_t clock_inversions = 0;
  std::map<SymbolId, SymbolCoverage> coverage;

  [[nodiscard]] bool ok() const { return regressions == 0; }
};

ValidationReport validate_stream(std::span<const ObserverEvent> events);

// Stable ordering by obs_ts (ties keep input order).
bool is_time_ordered(std::span<const ObserverEvent> events);

} // namespace nms
