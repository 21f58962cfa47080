#include "nms/stats.hpp"

#include "nms/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nms::stats {

__extension__ typedef __int128 i128;

double quantile_sorted(std::span<const std::int64_t> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return static_cast<double>(sorted[lo]);
  const double frac = h - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) + frac * static_cast<double>(sorted[lo + 1] - sorted[lo]);
}

namespace {

// Quantile using selection only; `values` is partially reordered.
double select_quantile(std::vector<std::int64_t>& values, double p) {
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(lo);
  std::nth_element(values.begin(), nth, values.end());
  const std::int64_t a = *nth;
  if (lo + 1 >= values.size()) return static_cast<double>(a);
  const std::int64_t b = *std::min_element(nth + 1, values.end());
  return static_cast<double>(a) + (h - static_cast<double>(lo)) * static_cast<double>(b - a);
}

} // namespace

Summary summarize_values(std::vector<std::int64_t>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;

  i128 sum = 0;
  i128 sum_sq = 0;
  std::int64_t lo = values.front();
  std::int64_t hi = values.front();
  for (std::int64_t v : values) {
    sum += v;
    sum_sq += static_cast<i128>(v) * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto n = static_cast<i128>(values.size());
  s.mean = static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(n));
  if (values.size() > 1) {
    // n * Σx² − (Σx)² is exact; only the final division rounds.
    const i128 num = n * sum_sq - sum * sum;
    const long double var = static_cast<long double>(num) / static_cast<long double>(n * (n - 1));
    s.std = static_cast<double>(std::sqrt(var));
  }
  s.min = static_cast<double>(lo);
  s.max = static_cast<double>(hi);
  s.q25 = select_quantile(values, 0.25);
  s.q50 = select_quantile(values, 0.50);
  s.q75 = select_quantile(values, 0.75);
  return s;
}

std::string_view column_name(Column c) {
  switch (c) {
    case Column::Duration: return "duration_s";
    case Column::MinValue: return "min_value";
    case Column::MaxValue: return "max_value";
    case Column::MinMag: return "min_mag";
    case Column::MeanMag: return "mean_mag";
    case Column::MaxMag: return "max_mag";
  }
  return "";
}

double column_scale(Column c) {
  switch (c) {
    case Column::Duration: return static_cast<double>(kUsPerSecond);
    case Column::MeanMag: return 2.0 * kPriceScale;
    default: return static_cast<double>(kPriceScale);
  }
}

std::int64_t column_value(const disloc::DislocationSegment& seg, Column c) {
  switch (c) {
    case Column::Duration: return seg.duration_us();
    case Column::MinValue: return seg.min_dp.value;
    case Column::MaxValue: return seg.max_dp.value;
    case Column::MinMag: return seg.min_mag().value;
    case Column::MeanMag: return seg.mean_mag_twice();
    case Column::MaxMag: return seg.max_mag().value;
  }
  return 0;
}

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::All: return "all";
    case Tier::Actionable: return "actionable";
    case Tier::ActionableLarge: return "actionable_large";
  }
  return "";
}

bool in_tier(const disloc::DislocationSegment& seg, Tier t) {
  switch (t) {
    case Tier::All: return true;
    case Tier::Actionable: return seg.flags.actionable;
    case Tier::ActionableLarge: return seg.flags.actionable && seg.flags.large;
  }
  return false;
}

StatsTable summarize(std::span<const disloc::DislocationSegment> segments) {
  StatsTable table;
  std::vector<std::int64_t> values;
  values.reserve(segments.size());
  for (std::size_t t = 0; t < kTiers.size(); ++t) {
    TierStats& ts = table.tiers[t];
    ts.tier = kTiers[t];
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      values.clear();
      for (const auto& seg : segments)
        if (in_tier(seg, ts.tier)) values.push_back(column_value(seg, kColumns[c]));
      ts.count = values.size();
      ts.columns[c] = summarize_values(values);
    }
  }
  return table;
}

double per_second_rate(std::uint64_t count, std::uint64_t trading_days) {
  if (trading_days == 0) throw DomainError("trading_days must be positive");
  return static_cast<double>(count) / (static_cast<double>(trading_days) * 6.5 * 3600.0);
}

std::vector<MinuteBin> start_histogram(std::span<const disloc::DislocationSegment> segments) {
  std::map<std::int64_t, MinuteBin> bins;
  for (const auto& seg : segments) {
    const std::int64_t tod = ((seg.start.value % kUsPerDay) + kUsPerDay) % kUsPerDay;
    const std::int64_t minute = tod / kUsPerMinute;
    MinuteBin& bin = bins[minute];
    bin.minute = minute;
    for (std::size_t t = 0; t < kTiers.size(); ++t)
      if (in_tier(seg, kTiers[t])) ++bin.counts[t];
  }
  std::vector<MinuteBin> out;
  out.reserve(bins.size());
  for (auto& [m, b] : bins) out.push_back(b);
  return out;
}

} // namespace nms::stats
