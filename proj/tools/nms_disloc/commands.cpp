#include "commands.hpp"

#include "nms/consolidate.hpp"
#include "nms/errors.hpp"
#include "nms/export.hpp"
#include "nms/ingest.hpp"
#include "nms/netviz.hpp"
#include "nms/price.hpp"
#include "nms/roc.hpp"
#include "nms/sim.hpp"
#include "nms/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace nms::cli {

namespace {

struct Session {
  std::string date;
  TimeUs last_ts{};
  // Events of each selected symbol in stream order.
  std::map<SymbolId, std::vector<ObserverEvent>> by_symbol;
};

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream os(cfg.out_dir / name, std::ios::binary);
  if (!os) throw Error("cannot write " + (cfg.out_dir / name).string());
  return os;
}

disloc::TiePolicy tie_policy(const RunConfig& cfg) {
  return cfg.ties == "coalesce" ? disloc::TiePolicy::Coalesce : disloc::TiePolicy::Retain;
}

disloc::Thresholds thresholds(const RunConfig& cfg) {
  return disloc::Thresholds{cfg.actionable_threshold_us, cfg.large_min_mag_e4};
}

Session load_session(const RunConfig& cfg, const std::filesystem::path& path) {
  std::vector<ObserverEvent> events = read_events(path);
  const ValidationReport report = validate_stream(events);
  if (!report.ok()) {
    throw ValidationError(path.string() + ": " + std::to_string(report.regressions) +
                          " timestamp inversions; the stream must be ordered by obs_ts_us");
  }
  std::vector<SymbolId> wanted;
  for (const auto& s : cfg.symbols) wanted.push_back(SymbolId::parse(s));

  Session session;
  session.date = cfg.date.value_or(path.stem().string());
  if (!events.empty()) session.last_ts = events.back().obs_ts;
  for (auto& ev : events) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), ev.symbol) == wanted.end()) continue;
    session.by_symbol[ev.symbol].push_back(std::move(ev));
  }
  return session;
}

std::vector<Session> load_sessions(const RunConfig& cfg) {
  std::vector<Session> out;
  for (const auto& p : cfg.inputs) out.push_back(load_session(cfg, p));
  return out;
}

template <typename T>
std::vector<std::vector<T>> per_symbol(const Session& s, unsigned threads,
                                       const std::function<std::vector<T>(SymbolId, const std::vector<ObserverEvent>&)>& fn) {
  std::vector<const std::pair<const SymbolId, std::vector<ObserverEvent>>*> items;
  for (const auto& kv : s.by_symbol) items.push_back(&kv);
  std::vector<std::vector<T>> results(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) { results[i] = fn(items[i]->first, items[i]->second); });
  return results;
}

struct DetectOutput {
  std::vector<disloc::DislocationSegment> segments;
  std::string snapshots;
};

DetectOutput detect_symbol(const RunConfig& cfg, TimeUs last_ts, SymbolId symbol,
                           const std::vector<ObserverEvent>& events) {
  consolidate::MarketView view;
  view.track(symbol);
  disloc::Detector det(tie_policy(cfg), thresholds(cfg));
  std::vector<consolidate::DeltaSample> samples;
  std::ostringstream snaps;
  for (const auto& ev : events) {
    view.apply(ev, samples);
    for (const auto& s : samples) det.push(s);
    samples.clear();
    if (cfg.snapshots && ev.kind == EventKind::Quote) io::write_snapshot_row(snaps, ev.obs_ts, symbol, view.snapshot(symbol));
  }
  det.finish(last_ts);
  DetectOutput out{det.take(), snaps.str()};
  disloc::sort_segments(out.segments);
  return out;
}

std::vector<disloc::DislocationSegment> detect_all(const RunConfig& cfg, const std::vector<Session>& sessions,
                                                   std::string* snapshots = nullptr) {
  const unsigned threads = resolve_threads(cfg.threads);
  std::vector<disloc::DislocationSegment> all;
  for (const auto& s : sessions) {
    auto parts = per_symbol<DetectOutput>(s, threads, [&](SymbolId sym, const std::vector<ObserverEvent>& evs) {
      return std::vector<DetectOutput>{detect_symbol(cfg, s.last_ts, sym, evs)};
    });
    for (auto& p : parts) {
      all.insert(all.end(), p[0].segments.begin(), p[0].segments.end());
      if (snapshots) *snapshots += p[0].snapshots;
    }
  }
  return all;
}

struct RocOutput {
  std::vector<roc::TradeOutcome> outcomes;
  roc::RocAggregate aggregate;
  std::size_t skipped = 0;
};

RocOutput roc_all(const RunConfig& cfg, const std::vector<Session>& sessions) {
  const unsigned threads = resolve_threads(cfg.threads);
  RocOutput out;
  for (const auto& s : sessions) {
    auto parts = per_symbol<RocOutput>(s, threads, [&](SymbolId, const std::vector<ObserverEvent>& evs) {
      roc::RocAnalyzer an(s.date);
      for (const auto& ev : evs) an.on_event(ev);
      return std::vector<RocOutput>{RocOutput{an.outcomes(), an.aggregate(), an.skipped_missing_dbbo()}};
    });
    for (auto& p : parts) {
      out.outcomes.insert(out.outcomes.end(), p[0].outcomes.begin(), p[0].outcomes.end());
      out.aggregate.merge(p[0].aggregate);
      out.skipped += p[0].skipped;
    }
  }
  return out;
}

std::vector<disloc::DislocationSegment> segments_for(const RunConfig& cfg, std::uint64_t& days) {
  std::vector<disloc::DislocationSegment> segs;
  for (const auto& p : cfg.segment_files) {
    auto part = io::read_segments_csv(p);
    segs.insert(segs.end(), part.begin(), part.end());
  }
  if (!cfg.inputs.empty()) {
    auto sessions = load_sessions(cfg);
    auto part = detect_all(cfg, sessions);
    segs.insert(segs.end(), part.begin(), part.end());
  }
  days = cfg.segment_files.size() + cfg.inputs.size();
  return segs;
}

void require_inputs(const RunConfig& cfg, bool allow_segments) {
  if (cfg.inputs.empty() && (!allow_segments || cfg.segment_files.empty()))
    throw CLI::ValidationError(allow_segments ? "one of --input or --segments is required" : "--input is required");
}

} // namespace

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("NMS_DISLOC_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

int cmd_detect(const RunConfig& cfg, std::ostream& out) {
  auto sessions = load_sessions(cfg);
  std::string snapshots;
  auto segments = detect_all(cfg, sessions, cfg.snapshots ? &snapshots : nullptr);
  {
    auto os = open_out(cfg, "segments.csv");
    io::write_segments_csv(os, segments);
  }
  {
    auto os = open_out(cfg, "histogram.csv");
    io::write_histogram_csv(os, stats::start_histogram(segments));
  }
  if (cfg.snapshots) {
    auto os = open_out(cfg, "snapshots.csv");
    io::write_snapshot_header(os);
    os << snapshots;
  }
  std::size_t actionable = 0;
  std::size_t large = 0;
  for (const auto& s : segments) {
    actionable += s.flags.actionable;
    large += s.flags.actionable && s.flags.large;
  }
  out << "segments " << segments.size() << " actionable " << actionable << " actionable_large " << large << "\n";
  return kExitOk;
}

int cmd_roc(const RunConfig& cfg, std::ostream& out) {
  auto sessions = load_sessions(cfg);
  RocOutput r = roc_all(cfg, sessions);
  {
    auto os = open_out(cfg, "trades_roc.csv");
    io::write_trades_roc_csv(os, r.outcomes);
  }
  {
    auto os = open_out(cfg, "aggregate.csv");
    io::write_aggregate_csv(os, r.aggregate);
  }
  const roc::TableOne t1 = roc::table_one(r.aggregate);
  {
    auto os = open_out(cfg, "table1.csv");
    io::write_table_one_csv(os, t1);
  }
  const roc::RocTotals tot = r.aggregate.totals();
  out << "trades " << tot.trades << " differing " << tot.differing_trades << " net_roc " << money_to_decimal(tot.net_roc())
      << " total_roc " << money_to_decimal(tot.total_roc()) << " skipped_missing_dbbo " << r.skipped << "\n";
  return kExitOk;
}

int cmd_circle(const RunConfig& cfg, std::ostream& out) {
  std::uint64_t days = 0;
  auto segments = segments_for(cfg, days);
  stats::Tier tier = stats::Tier::All;
  if (cfg.filter == "actionable") tier = stats::Tier::Actionable;
  if (cfg.filter == "actionable_large") tier = stats::Tier::ActionableLarge;
  std::vector<disloc::DislocationSegment> kept;
  for (const auto& s : segments)
    if (stats::in_tier(s, tier)) kept.push_back(s);

  const auto net = netviz::build(kept, cfg.modulo_day);
  const auto comps = netviz::components(net);
  const auto layout = netviz::renormalize(net, cfg.layout == "real" ? netviz::Layout::RealTime : netviz::Layout::EventSpace);
  {
    auto os = open_out(cfg, "nodes.csv");
    io::write_nodes_csv(os, layout);
  }
  {
    auto os = open_out(cfg, "edges.csv");
    io::write_edges_csv(os, net.edges);
  }
  {
    auto os = open_out(cfg, "components.csv");
    io::write_components_csv(os, net, comps);
  }
  out << "segments " << kept.size() << " nodes " << net.nodes.size() << " edges " << net.edges.size() << " components "
      << comps.size() << "\n";
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg, std::ostream& out) {
  std::uint64_t days = 0;
  auto segments = segments_for(cfg, days);
  if (cfg.days > 0) days = cfg.days;
  const auto table = stats::summarize(segments);
  {
    auto os = open_out(cfg, "stats.csv");
    io::write_stats_csv(os, table);
  }
  for (const auto& t : table.tiers) {
    out << stats::tier_name(t.tier) << " count " << t.count << " per_second "
        << io::format_fixed(stats::per_second_rate(t.count, std::max<std::uint64_t>(days, 1)), 4) << "\n";
  }
  if (!cfg.inputs.empty()) {
    auto sessions = load_sessions(cfg);
    const roc::TableOne t1 = roc::table_one(roc_all(cfg, sessions).aggregate);
    auto os = open_out(cfg, "table1.csv");
    io::write_table_one_csv(os, t1);
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  auto read_text = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  sim::SimTopology topo = cfg.topology ? sim::SimTopology::parse(read_text(*cfg.topology)) : sim::SimTopology::default_nms();
  if (cfg.sip_processing_us) topo.set_sip_processing_us(*cfg.sip_processing_us);

  sim::Scenario scenario;
  if (cfg.scenario) {
    scenario = sim::Scenario::parse(read_text(*cfg.scenario));
  } else {
    sim::GenOptions opt;
    opt.orders = cfg.orders;
    opt.horizon_us = cfg.horizon_us;
    for (const auto& s : cfg.symbols) opt.symbols.push_back(SymbolId::parse(s));
    scenario = sim::generate_scenario(topo, opt, cfg.seed);
    auto os = open_out(cfg, "scenario.cfg");
    os << scenario.serialize();
  }
  const sim::SimResult r = sim::run(topo, scenario, thresholds(cfg));
  {
    auto os = open_out(cfg, "events.csv");
    write_events_csv(os, r.events);
  }
  {
    auto os = open_out(cfg, "truth.csv");
    io::write_segments_csv(os, r.truth.segments);
  }
  out << "orders " << r.stats.orders << " fills " << r.stats.fills << " rejected " << r.stats.rejected
      << " lbbo_changes " << r.stats.lbbo_changes << " sip_quotes " << r.stats.sip_quotes << " events "
      << r.events.size() << " truth_segments " << r.truth.segments.size() << "\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Dislocation analytics for SIP versus direct-feed market data", "nms-disloc"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool segments) {
    sub->add_option("--input,-i", cfg.inputs, "Event file (CSV or NDJSON), one per session")->check(CLI::ExistingFile);
    if (segments)
      sub->add_option("--segments", cfg.segment_files, "Segment CSV from a previous detect run")->check(CLI::ExistingFile);
    sub->add_option("--symbol,-s", cfg.symbols, "Restrict to these symbols");
    sub->add_option("--threshold-us", cfg.actionable_threshold_us, "Actionable duration threshold (strict)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--large-min-mag-e4", cfg.large_min_mag_e4, "Large-segment minimum magnitude in 1e-4 USD (strict)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out,-o", cfg.out_dir, "Output directory");
    sub->add_option("--threads", cfg.threads, "Worker threads (default: NMS_DISLOC_THREADS or 1)");
    sub->add_option("--ties", cfg.ties, "Same-microsecond samples: retain or coalesce")
        ->check(CLI::IsMember({"retain", "coalesce"}));
    sub->add_option("--date", cfg.date, "Session date label (default: input file stem)");
  };

  auto* detect = app.add_subcommand("detect", "Detect dislocation segments");
  add_common(detect, false);
  detect->add_flag("--snapshots", cfg.snapshots, "Also write snapshots.csv");

  auto* rocc = app.add_subcommand("roc", "Realized opportunity cost per trade and aggregated");
  add_common(rocc, false);

  auto* circle = app.add_subcommand("circle", "Ordered-network export of segment starts and stops");
  add_common(circle, true);
  circle->add_option("--filter", cfg.filter, "none, actionable or actionable_large")
      ->check(CLI::IsMember({"none", "actionable", "actionable_large"}));
  circle->add_option("--layout", cfg.layout, "event or real")->check(CLI::IsMember({"event", "real"}));
  circle->add_flag("--modulo-day", cfg.modulo_day, "Fold timestamps to time of day");

  auto* statsc = app.add_subcommand("stats", "Segment statistics table and headline ROC rows");
  add_common(statsc, true);
  statsc->add_option("--days", cfg.days, "Trading days for per-second rates (default: number of inputs)");

  auto* simulate = app.add_subcommand("simulate", "Run the fragmented-market simulator");
  simulate->add_option("--topology", cfg.topology, "Topology file (default: built-in four-site layout)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--scenario", cfg.scenario, "Scenario file (default: generated from --seed)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", cfg.seed, "Generator seed");
  simulate->add_option("--orders", cfg.orders, "Generated order count")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon-us", cfg.horizon_us, "Generated horizon")->check(CLI::PositiveNumber);
  simulate->add_option("--sip-processing-us", cfg.sip_processing_us, "Override SIP processing latency")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--symbol,-s", cfg.symbols, "Symbols for generated flow");
  simulate->add_option("--threshold-us", cfg.actionable_threshold_us, "Actionable duration threshold (strict)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--large-min-mag-e4", cfg.large_min_mag_e4, "Large-segment minimum magnitude (strict)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--out,-o", cfg.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
    for (const auto& s : cfg.symbols)
      if (!SymbolId::valid(s)) throw CLI::ValidationError("--symbol", "bad symbol '" + s + "'");
    if (detect->parsed() || rocc->parsed()) require_inputs(cfg, false);
    if (circle->parsed() || statsc->parsed()) require_inputs(cfg, true);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (detect->parsed()) return cmd_detect(cfg, out);
    if (rocc->parsed()) return cmd_roc(cfg, out);
    if (circle->parsed()) return cmd_circle(cfg, out);
    if (statsc->parsed()) return cmd_stats(cfg, out);
    return cmd_simulate(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

} // namespace nms::cli
