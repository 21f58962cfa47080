#pragma once

#include "nms/consolidate.hpp"
#include "nms/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nms::disloc {

// How several Δp samples sharing one microsecond are read.
//   Retain   every sample is a state of its own, so runs that open and close
//            inside one microsecond become zero-duration segments.
//   Coalesce the value at microsecond t is the last sample stamped t.
enum class TiePolicy : std::uint8_t { Retain, Coalesce };

struct Thresholds {
  std::int64_t actionable_us = 545;
  std::int64_t large_min_mag_e4 = 100;
};

struct SegmentFlags {
  bool actionable = false;
  bool large = false;
  bool large_by_max = false;

  bool operator==(const SegmentFlags&) const = default;
};

struct DislocationSegment {
  SymbolId symbol{};
  Side side = Side::Bid;
  TimeUs start{};
  TimeUs end{};
  int direction = 0;
  PriceE4 min_dp{};
  PriceE4 max_dp{};
  // Closed by end of stream rather than by a change of Δp.
  bool truncated = false;
  // Opened by a sign flip of the run before it.
  bool continues = false;
  SegmentFlags flags{};

  [[nodiscard]] std::int64_t duration_us() const { return end - start; }
  [[nodiscard]] PriceE4 min_mag() const { return direction > 0 ? min_dp : -max_dp; }
  [[nodiscard]] PriceE4 max_mag() const { return direction > 0 ? max_dp : -min_dp; }
  // (min_mag + max_mag) in e4 units, i.e. twice the mean magnitude.
  [[nodiscard]] std::int64_t mean_mag_twice() const { return min_mag().value + max_mag().value; }

  bool operator==(const DislocationSegment&) const = default;
};

SegmentFlags classify(const DislocationSegment& seg, const Thresholds& thresholds = {});

// A maximal Δp ≠ 0 interval on one side, split into its sign runs.
struct Dislocation {
  SymbolId symbol{};
  Side side = Side::Bid;
  TimeUs start{};
  TimeUs end{};
  std::vector<DislocationSegment> segments;
};

// Groups segments sorted by (symbol, side, start) into dislocations.
std::vector<Dislocation> group_dislocations(std::span<const DislocationSegment> segments);

// Run detector for one symbol side.
class SideDetector {
public:
  SideDetector(SymbolId symbol, Side side, TiePolicy policy = TiePolicy::Retain, Thresholds thresholds = {})
      : symbol_(symbol), side_(side), policy_(policy), thresholds_(thresholds) {}

  void push(TimeUs ts, std::optional<PriceE4> dp, std::vector<DislocationSegment>& out);
  // Closes an open run at `last_ts` and marks it truncated.
  void finish(TimeUs last_ts, std::vector<DislocationSegment>& out);

  [[nodiscard]] bool open() const { return open_; }

private:
  void commit(TimeUs ts, std::optional<PriceE4> dp, std::vector<DislocationSegment>& out);
  void close(TimeUs ts, bool truncated, std::vector<DislocationSegment>& out);

  SymbolId symbol_;
  Side side_;
  TiePolicy policy_;
  Thresholds thresholds_;

  bool open_ = false;
  DislocationSegment current_{};

  bool pending_ = false;
  TimeUs pending_ts_{};
  std::optional<PriceE4> pending_dp_;
};

// Routes samples of every symbol and side to their detectors.
class Detector {
public:
  explicit Detector(TiePolicy policy = TiePolicy::Retain, Thresholds thresholds = {})
      : policy_(policy), thresholds_(thresholds) {}

  void push(const consolidate::DeltaSample& sample);
  void finish(TimeUs last_ts);

  // Segments closed so far, in closing order.
  [[nodiscard]] const std::vector<DislocationSegment>& segments() const { return out_; }
  std::vector<DislocationSegment> take() { return std::move(out_); }

private:
  TiePolicy policy_;
  Thresholds thresholds_;
  std::map<std::pair<SymbolId, Side>, SideDetector> detectors_;
  SideDetector* last_ = nullptr;
  std::pair<SymbolId, Side> last_key_{};
  std::vector<DislocationSegment> out_;
};

// Segments of one side from a time-ordered sample stream. Open runs close at
// `end_ts`, defaulting to the last sample time. Result is sorted by
// (symbol, side, start, end).
std::vector<DislocationSegment> detect(std::span<const consolidate::DeltaSample> deltas, Side side,
                                       TiePolicy policy = TiePolicy::Retain, Thresholds thresholds = {},
                                       std::optional<TimeUs> end_ts = std::nullopt);

void sort_segments(std::vector<DislocationSegment>& segments);

} // namespace nms::disloc
