#pragma once

#include "nms/consolidate.hpp"
#include "nms/disloc.hpp"
#include "nms/netviz.hpp"
#include "nms/roc.hpp"
#include "nms/stats.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nms::io {

inline constexpr std::string_view kSegmentHeader =
    "symbol,side,start_us,end_us,duration_us,direction,min_dp_e4,max_dp_e4,min_mag_e4,max_mag_e4,actionable,large,"
    "truncated,large_by_max";
inline constexpr std::string_view kHistogramHeader = "minute_of_day,count,count_actionable,count_actionable_large";
inline constexpr std::string_view kNodesHeader = "index,ts_us,starts,stops,ray,pos_in_ray,angle";
inline constexpr std::string_view kEdgesHeader = "i,j,weight_e4,count";
inline constexpr std::string_view kComponentsHeader = "component_id,node_indices,walk_steps";
inline constexpr std::string_view kTradesRocHeader = "ts_us,symbol,venue,exec_px_e4,shares,side,differing,roc_e4,flavor";
inline constexpr std::string_view kSnapshotHeader = "ts_us,symbol,sip_bid,sip_ask,dbb,dbo";
inline constexpr std::string_view kStatsHeader = "tier,statistic,duration_s,min_value,max_value,min_mag,mean_mag,max_mag";

void write_segments_csv(std::ostream& os, std::span<const disloc::DislocationSegment> segments);
// Throws ParseError with line numbers on malformed rows.
std::vector<disloc::DislocationSegment> read_segments_csv(std::istream& is);
std::vector<disloc::DislocationSegment> read_segments_csv(const std::filesystem::path& path);

void write_histogram_csv(std::ostream& os, std::span<const stats::MinuteBin> bins);

// One row per tier and statistic, values in seconds and dollars. Absent statistics are empty cells.
void write_stats_csv(std::ostream& os, const stats::StatsTable& table);

void write_nodes_csv(std::ostream& os, std::span<const netviz::NodePlacement> nodes);
void write_edges_csv(std::ostream& os, std::span<const netviz::Edge> edges);
void write_components_csv(std::ostream& os, const netviz::OrderedNetwork& net,
                          std::span<const netviz::Component> components);

// One row per ROC entry; trades without one get a single zero row.
void write_trades_roc_csv(std::ostream& os, std::span<const roc::TradeOutcome> outcomes);
// Per (date, symbol, venue) rows followed by an ALL row with the ratios.
void write_aggregate_csv(std::ostream& os, const roc::RocAggregate& agg);
// Headline rows as (row, name, value).
void write_table_one_csv(std::ostream& os, const roc::TableOne& t);

void write_snapshot_header(std::ostream& os);
void write_snapshot_row(std::ostream& os, TimeUs ts, SymbolId symbol, const consolidate::Snapshot& snap);

// Fixed-point rendering without exponent.
std::string format_fixed(double v, int decimals);

} // namespace nms::io
