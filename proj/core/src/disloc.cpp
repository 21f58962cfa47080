#include "nms/disloc.hpp"

#include <algorithm>
#include <tuple>

namespace nms::disloc {

SegmentFlags classify(const DislocationSegment& seg, const Thresholds& thresholds) {
  SegmentFlags f;
  f.actionable = seg.duration_us() > thresholds.actionable_us;
  f.large = seg.min_mag().value > thresholds.large_min_mag_e4;
  f.large_by_max = seg.max_mag().value > thresholds.large_min_mag_e4;
  return f;
}

std::vector<Dislocation> group_dislocations(std::span<const DislocationSegment> segments) {
  std::vector<Dislocation> out;
  for (const auto& seg : segments) {
    bool joins = !out.empty() && seg.continues && out.back().symbol == seg.symbol && out.back().side == seg.side &&
                 out.back().end == seg.start;
    if (!joins) {
      out.push_back(Dislocation{seg.symbol, seg.side, seg.start, seg.end, {}});
    }
    out.back().end = seg.end;
    out.back().segments.push_back(seg);
  }
  return out;
}

void SideDetector::push(TimeUs ts, std::optional<PriceE4> dp, std::vector<DislocationSegment>& out) {
  if (policy_ == TiePolicy::Retain) {
    commit(ts, dp, out);
    return;
  }
  if (pending_ && ts != pending_ts_) commit(pending_ts_, pending_dp_, out);
  pending_ = true;
  pending_ts_ = ts;
  pending_dp_ = dp;
}

void SideDetector::commit(TimeUs ts, std::optional<PriceE4> dp, std::vector<DislocationSegment>& out) {
  const int dir = dp ? sign(*dp) : 0;
  if (open_ && dir == current_.direction) {
    current_.min_dp = std::min(current_.min_dp, *dp);
    current_.max_dp = std::max(current_.max_dp, *dp);
    return;
  }
  const bool was_open = open_;
  if (open_) close(ts, false, out);
  if (dir != 0) {
    open_ = true;
    current_ = DislocationSegment{};
    current_.symbol = symbol_;
    current_.side = side_;
    current_.start = ts;
    current_.direction = dir;
    current_.min_dp = *dp;
    current_.max_dp = *dp;
    current_.continues = was_open;
  }
}

void SideDetector::close(TimeUs ts, bool truncated, std::vector<DislocationSegment>& out) {
  current_.end = ts;
  current_.truncated = truncated;
  current_.flags = classify(current_, thresholds_);
  out.push_back(current_);
  open_ = false;
}

void SideDetector::finish(TimeUs last_ts, std::vector<DislocationSegment>& out) {
  if (pending_) {
    commit(pending_ts_, pending_dp_, out);
    pending_ = false;
  }
  if (open_) close(std::max(last_ts, current_.start), true, out);
}

void Detector::push(const consolidate::DeltaSample& sample) {
  std::pair<SymbolId, Side> key{sample.symbol, sample.side};
  if (!last_ || key != last_key_) {
    auto it = detectors_.try_emplace(key, sample.symbol, sample.side, policy_, thresholds_).first;
    last_ = &it->second;
    last_key_ = key;
  }
  last_->push(sample.ts, sample.dp, out_);
}

void Detector::finish(TimeUs last_ts) {
  for (auto& [key, det] : detectors_) det.finish(last_ts, out_);
}

void sort_segments(std::vector<DislocationSegment>& segments) {
  std::stable_sort(segments.begin(), segments.end(), [](const DislocationSegment& a, const DislocationSegment& b) {
    return std::tie(a.symbol, a.side, a.start, a.end) < std::tie(b.symbol, b.side, b.start, b.end);
  });
}

std::vector<DislocationSegment> detect(std::span<const consolidate::DeltaSample> deltas, Side side, TiePolicy policy,
                                       Thresholds thresholds, std::optional<TimeUs> end_ts) {
  Detector det(policy, thresholds);
  TimeUs last{};
  for (const auto& s : deltas) {
    if (s.side != side) continue;
    det.push(s);
    last = std::max(last, s.ts);
  }
  det.finish(end_ts.value_or(last));
  auto out = det.take();
  sort_segments(out);
  return out;
}

} // namespace nms::disloc
