#pragma once

#include "nms/disloc.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> segment_files;
  std::vector<std::string> symbols;
  std::int64_t actionable_threshold_us = 545;
  std::int64_t large_min_mag_e4 = 100;
  std::filesystem::path out_dir = ".";
  unsigned threads = 0;
  std::string ties = "retain";
  std::optional<std::string> date;

  // detect
  bool snapshots = false;
  // circle
  std::string filter = "none";
  std::string layout = "event";
  bool modulo_day = false;
  // stats
  std::uint64_t days = 0;
  // simulate
  std::optional<std::filesystem::path> topology;
  std::optional<std::filesystem::path> scenario;
  std::uint64_t seed = 1;
  std::size_t orders = 10'000;
  std::int64_t horizon_us = 60'000'000;
  std::optional<std::int64_t> sip_processing_us;
};

// Parses argv and runs one subcommand. Returns the process exit code:
// 0 on success, 1 for data errors, 2 for usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_detect(const RunConfig& cfg, std::ostream& out);
int cmd_roc(const RunConfig& cfg, std::ostream& out);
int cmd_circle(const RunConfig& cfg, std::ostream& out);
int cmd_stats(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);

// Worker count: the flag when positive, else NMS_DISLOC_THREADS, else 1.
unsigned resolve_threads(unsigned flag);

} // namespace nms::cli
