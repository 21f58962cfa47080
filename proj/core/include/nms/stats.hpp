#pragma once

#include "nms/disloc.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nms::stats {

// Descriptive statistics of one integer-valued column. Values are in the
// column's raw unit; divide by the column scale for reporting.
struct Summary {
  std::size_t count = 0;
  std::optional<double> mean;
  // Sample standard deviation (n - 1 denominator); absent below two values.
  std::optional<double> std;
  std::optional<double> min;
  std::optional<double> q25;
  std::optional<double> q50;
  std::optional<double> q75;
  std::optional<double> max;
};

// Linear-interpolation quantile of a sorted sample, p in [0, 1].
double quantile_sorted(std::span<const std::int64_t> sorted, double p);

// Summary of an arbitrary sample; reorders `values`.
Summary summarize_values(std::vector<std::int64_t>& values);

enum class Column : std::uint8_t { Duration, MinValue, MaxValue, MinMag, MeanMag, MaxMag };
inline constexpr std::array<Column, 6> kColumns = {Column::Duration, Column::MinValue, Column::MaxValue,
                                                   Column::MinMag,   Column::MeanMag,  Column::MaxMag};

std::string_view column_name(Column c);
// Raw units per reported unit: μs per second, e4 per dollar, half-e4 per
// dollar for the mean magnitude.
double column_scale(Column c);
std::int64_t column_value(const disloc::DislocationSegment& seg, Column c);

enum class Tier : std::uint8_t { All, Actionable, ActionableLarge };
inline constexpr std::array<Tier, 3> kTiers = {Tier::All, Tier::Actionable, Tier::ActionableLarge};

std::string_view tier_name(Tier t);
bool in_tier(const disloc::DislocationSegment& seg, Tier t);

struct TierStats {
  Tier tier = Tier::All;
  std::size_t count = 0;
  std::array<Summary, 6> columns{};
};

struct StatsTable {
  std::array<TierStats, 3> tiers{};
};

// Segment flags decide tier membership.
StatsTable summarize(std::span<const disloc::DislocationSegment> segments);

// Segments per second of regular trading (6.5 h per day).
double per_second_rate(std::uint64_t count, std::uint64_t trading_days);

// Counts of segment starts per minute of the day for each tier.
struct MinuteBin {
  std::int64_t minute = 0;
  std::array<std::uint64_t, 3> counts{};
};
std::vector<MinuteBin> start_histogram(std::span<const disloc::DislocationSegment> segments);

} // namespace nms::stats
