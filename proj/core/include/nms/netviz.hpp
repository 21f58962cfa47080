#pragma once

#include "nms/disloc.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nms::netviz {

// A distinct timestamp at which segments start and/or stop.
struct EventNode {
  std::size_t index = 0;
  TimeUs ts{};
  std::uint32_t starts = 0;
  std::uint32_t stops = 0;

  bool operator==(const EventNode&) const = default;
};

// Segments from node i to node j (i <= j; i == j for zero-duration ones).
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  // Σ max(|min_dp|, |max_dp|) over the edge's segments.
  std::int64_t weight_e4 = 0;
  std::uint64_t count = 0;

  bool operator==(const Edge&) const = default;
};

struct OrderedNetwork {
  std::vector<EventNode> nodes;
  // Sorted by (i, j).
  std::vector<Edge> edges;
};

// With modulo_day, timestamps are folded to time of day first so several
// sessions share one node set.
OrderedNetwork build(std::span<const disloc::DislocationSegment> segments, bool modulo_day = false);

struct Component {
  std::size_t id = 0;
  // Consecutive node indices.
  std::vector<std::size_t> nodes;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

// Splits the node sequence wherever the number of open segments returns to
// zero. Starts at a node count before its stops.
std::vector<Component> components(const OrderedNetwork& net);

struct TiedWalk {
  // Net starts minus stops per node.
  std::vector<std::int64_t> steps;
  // Partial sums, beginning at 0; one more entry than steps.
  std::vector<std::int64_t> values;

  [[nodiscard]] bool tied() const { return !values.empty() && values.front() == 0 && values.back() == 0; }
  [[nodiscard]] bool non_negative() const;
};

TiedWalk walk(const OrderedNetwork& net, const Component& component);

enum class Layout : std::uint8_t { RealTime, EventSpace };

inline constexpr std::size_t kNodesPerRay = 10;

struct NodePlacement {
  std::size_t index = 0;
  TimeUs ts{};
  std::uint32_t starts = 0;
  std::uint32_t stops = 0;
  std::size_t ray = 0;
  std::size_t pos_in_ray = 0;
  // Radians in [0, 2π).
  double angle = 0.0;
};

// Rays of ten consecutive nodes. EventSpace spreads the rays evenly around
// the circle; RealTime places each node at its time-of-day angle.
std::vector<NodePlacement> renormalize(const OrderedNetwork& net, Layout layout);

} // namespace nms::netviz
