#include "nms/netviz.hpp"

#include <algorithm>
#include <map>
#include <numbers>

namespace nms::netviz {

namespace {

std::int64_t time_of_day(std::int64_t ts) { return ((ts % kUsPerDay) + kUsPerDay) % kUsPerDay; }

} // namespace

OrderedNetwork build(std::span<const disloc::DislocationSegment> segments, bool modulo_day) {
  auto fold = [&](TimeUs t) { return modulo_day ? time_of_day(t.value) : t.value; };

  std::vector<std::int64_t> stamps;
  stamps.reserve(segments.size() * 2);
  for (const auto& s : segments) {
    stamps.push_back(fold(s.start));
    stamps.push_back(fold(s.end));
  }
  std::sort(stamps.begin(), stamps.end());
  stamps.erase(std::unique(stamps.begin(), stamps.end()), stamps.end());

  OrderedNetwork net;
  net.nodes.resize(stamps.size());
  for (std::size_t k = 0; k < stamps.size(); ++k) {
    net.nodes[k].index = k;
    net.nodes[k].ts = TimeUs{stamps[k]};
  }
  auto node_of = [&](std::int64_t t) {
    return static_cast<std::size_t>(std::lower_bound(stamps.begin(), stamps.end(), t) - stamps.begin());
  };

  std::map<std::pair<std::size_t, std::size_t>, Edge> edges;
  for (const auto& s : segments) {
    std::size_t i = node_of(fold(s.start));
    std::size_t j = node_of(fold(s.end));
    ++net.nodes[i].starts;
    ++net.nodes[j].stops;
    if (i > j) std::swap(i, j);
    Edge& e = edges[{i, j}];
    e.i = i;
    e.j = j;
    e.weight_e4 += s.max_mag().value;
    ++e.count;
  }
  net.edges.reserve(edges.size());
  for (auto& [k, e] : edges) net.edges.push_back(e);
  return net;
}

std::vector<Component> components(const OrderedNetwork& net) {
  std::vector<Component> out;
  std::int64_t open = 0;
  Component current;
  for (const auto& node : net.nodes) {
    current.nodes.push_back(node.index);
    open += static_cast<std::int64_t>(node.starts) - static_cast<std::int64_t>(node.stops);
    if (open <= 0) {
      current.id = out.size();
      out.push_back(std::move(current));
      current = Component{};
      open = 0;
    }
  }
  if (!current.nodes.empty()) {
    current.id = out.size();
    out.push_back(std::move(current));
  }
  return out;
}

bool TiedWalk::non_negative() const {
  return std::all_of(values.begin(), values.end(), [](std::int64_t v) { return v >= 0; });
}

TiedWalk walk(const OrderedNetwork& net, const Component& component) {
  TiedWalk w;
  w.values.push_back(0);
  for (std::size_t idx : component.nodes) {
    const EventNode& n = net.nodes.at(idx);
    const std::int64_t step = static_cast<std::int64_t>(n.starts) - static_cast<std::int64_t>(n.stops);
    w.steps.push_back(step);
    w.values.push_back(w.values.back() + step);
  }
  return w;
}

std::vector<NodePlacement> renormalize(const OrderedNetwork& net, Layout layout) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const std::size_t rays = (net.nodes.size() + kNodesPerRay - 1) / kNodesPerRay;
  std::vector<NodePlacement> out;
  out.reserve(net.nodes.size());
  for (const auto& n : net.nodes) {
    NodePlacement p;
    p.index = n.index;
    p.ts = n.ts;
    p.starts = n.starts;
    p.stops = n.stops;
    p.ray = n.index / kNodesPerRay;
    p.pos_in_ray = n.index % kNodesPerRay;
    if (layout == Layout::EventSpace) {
      p.angle = rays == 0 ? 0.0 : kTwoPi * static_cast<double>(p.ray) / static_cast<double>(rays);
    } else {
      p.angle = kTwoPi * static_cast<double>(time_of_day(n.ts.value)) / static_cast<double>(kUsPerDay);
    }
    out.push_back(p);
  }
  return out;
}

} // namespace nms::netviz
