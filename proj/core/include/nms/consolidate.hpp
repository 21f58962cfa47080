#pragma once

#include "nms/bbo.hpp"
#include "nms/ingest.hpp"
#include "nms/types.hpp"

#include <array>
#include <bitset>
#include <optional>
#include <unordered_map>
#include <vector>

namespace nms::consolidate {

using VenueSet = std::bitset<kMaxVenues>;

inline VenueSet all_venues() { return VenueSet{}.set(); }

// A new value of Δp = SIP price − DBBO price on one side. An empty dp means
// the difference is undefined because one of the two views lacks that side.
struct DeltaSample {
  TimeUs ts{};
  SymbolId symbol{};
  Side side = Side::Bid;
  std::optional<PriceE4> dp;

  bool operator==(const DeltaSample&) const = default;
};

struct SymbolState {
  std::array<BboPair, kMaxVenues> venues{};
  // Venues with at least one side quoted, ascending.
  std::vector<VenueId> active;
  BboPair sip;
  BboPair dbbo;
  TimeUs last_change{};
  std::array<std::optional<PriceE4>, 2> dp{};
};

struct Snapshot {
  BboPair sip;
  BboPair dbbo;

  bool operator==(const Snapshot&) const = default;
};

// DBBO of a set of venue quotes: max bid and min offer, sizes from the
// extreme venue, ties going to the lowest venue id.
BboPair aggregate(const std::array<BboPair, kMaxVenues>& venues);

// Observer-side consolidation of the SIP and every direct feed.
class MarketView {
public:
  explicit MarketView(VenueSet venues = all_venues()) : venues_(venues) {}

  // Makes a symbol known before any of its quotes arrive.
  void track(SymbolId symbol);

  // Applies a quote event and appends one sample per side whose Δp changed.
  // Trade events leave the view unchanged. Throws ValidationError for a
  // venue outside the configured set.
  void apply(const ObserverEvent& ev, std::vector<DeltaSample>& out);
  std::vector<DeltaSample> apply_event(const ObserverEvent& ev);

  // Throws NotFound for a symbol that was never tracked or quoted.
  [[nodiscard]] Snapshot snapshot(SymbolId symbol) const;
  [[nodiscard]] const SymbolState* find(SymbolId symbol) const;

  [[nodiscard]] std::vector<SymbolId> symbols() const;

private:
  SymbolState& state_for(SymbolId symbol);

  VenueSet venues_;
  std::unordered_map<SymbolId, SymbolState, SymbolHash> states_;
  SymbolId last_symbol_{};
  SymbolState* last_state_ = nullptr;
};

// Δp on one side for a given pair of views.
std::optional<PriceE4> delta(const BboPair& sip, const BboPair& dbbo, Side side);

} // namespace nms::consolidate
