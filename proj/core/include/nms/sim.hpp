#pragma once

#include "nms/book.hpp"
#include "nms/disloc.hpp"
#include "nms/ingest.hpp"
#include "nms/topology.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nms::sim {

enum class Action : std::uint8_t { Submit, Cancel, Modify };

// One scripted instruction, stamped with matching-engine time.
struct ScenarioOrder {
  TimeUs t{};
  VenueId venue = 0;
  SymbolId symbol{};
  Action action = Action::Submit;
  book::Order order{};
  // Order addressed by Cancel and Modify.
  book::OrderId target = 0;
};

// Text form, one order per line:
//   t_us venue symbol side px_e4 qty flags
// side is B or S, px_e4 is "-" for market orders and flags is "-" or a
// comma list of hidden, ioc, market, peg, id=<n>, cancel=<n>, modify=<n>.
// Lines without an explicit id get their 1-based line ordinal.
struct Scenario {
  std::vector<ScenarioOrder> orders;
  std::int64_t horizon_us = 0;

  static Scenario parse(std::string_view text);
  [[nodiscard]] std::string serialize() const;
};

struct GenOptions {
  std::size_t orders = 1000;
  std::int64_t horizon_us = 1'000'000;
  std::vector<SymbolId> symbols;
  // Venues to use; all topology venues when empty.
  std::vector<VenueId> venues;
  PriceE4 start_px{991300};
  PriceE4 tick{100};
};

// Random but reproducible order flow; identical (topology, options, seed)
// give identical scenarios on every platform.
Scenario generate_scenario(const SimTopology& topology, const GenOptions& options, std::uint64_t seed);

// Exact Δp step function seen by the observer on one symbol side.
struct TruthStep {
  TimeUs ts{};
  std::optional<PriceE4> dp;

  bool operator==(const TruthStep&) const = default;
};

struct GroundTruth {
  std::map<std::pair<SymbolId, Side>, std::vector<TruthStep>> steps;
  // Sorted by (symbol, side, start, end).
  std::vector<disloc::DislocationSegment> segments;
  TimeUs last_ts{};
};

struct SimStats {
  std::size_t orders = 0;
  std::size_t fills = 0;
  std::size_t rejected = 0;
  std::size_t lbbo_changes = 0;
  std::size_t sip_quotes = 0;
};

struct SimResult {
  std::vector<ObserverEvent> events;
  GroundTruth truth;
  SimStats stats;
};

// Plays the scenario through one book per venue and symbol and delivers every
// LBBO change to the observer twice: directly, and via the symbol's SIP tape
// which republishes its NBBO when it changes. Simultaneous arrivals are
// ordered SIP first, then by venue id, then by emission order. Truth treats
// all arrivals in one microsecond as a single update.
SimResult run(const SimTopology& topology, const Scenario& scenario, disloc::Thresholds thresholds = {});

} // namespace nms::sim
