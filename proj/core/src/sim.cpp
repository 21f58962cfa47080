#include "nms/sim.hpp"

#include "nms/errors.hpp"
#include "nms/price.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <tuple>

namespace nms::sim {

namespace {

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::optional<BboPair> gbbo_of(const std::map<VenueId, BboPair>& lbbos) {
  BboPair out;
  for (const auto& [v, q] : lbbos) {
    if (q.bid && (!out.bid || q.bid->px > out.bid->px)) out.bid = q.bid;
    if (q.offer && (!out.offer || q.offer->px < out.offer->px)) out.offer = q.offer;
  }
  return out;
}

Level wire(const std::optional<Level>& l) { return l ? *l : Level{PriceE4{0}, Quantity{0}}; }

struct Pending {
  ObserverEvent ev;
  // Quote payload as delivered, used by the truth builder.
  BboPair quote;
  std::uint64_t seq = 0;
};

struct TapeInput {
  std::int64_t arrival = 0;
  std::uint64_t seq = 0;
  VenueId venue = 0;
  SymbolId symbol{};
  std::optional<BboPair> quote;
  // Fill print when quote is empty.
  Level fill{};
  SideHint aggressor = SideHint::Unknown;
  std::string tape_site;
};

void close_truth(disloc::DislocationSegment& seg, TimeUs end, bool truncated, const disloc::Thresholds& th,
                 std::vector<disloc::DislocationSegment>& out) {
  seg.end = end;
  seg.truncated = truncated;
  seg.flags = disloc::classify(seg, th);
  out.push_back(seg);
}

// Constant-sign runs of a step function.
void segments_from_steps(SymbolId symbol, Side side, const std::vector<TruthStep>& steps, TimeUs last_ts,
                         const disloc::Thresholds& th, std::vector<disloc::DislocationSegment>& out) {
  std::optional<disloc::DislocationSegment> open;
  for (const auto& st : steps) {
    const int dir = st.dp ? sign(*st.dp) : 0;
    if (open && open->direction == dir) {
      open->min_dp = std::min(open->min_dp, *st.dp);
      open->max_dp = std::max(open->max_dp, *st.dp);
      continue;
    }
    const bool flip = open.has_value();
    if (open) {
      close_truth(*open, st.ts, false, th, out);
      open.reset();
    }
    if (dir != 0) {
      disloc::DislocationSegment s;
      s.symbol = symbol;
      s.side = side;
      s.start = st.ts;
      s.direction = dir;
      s.min_dp = *st.dp;
      s.max_dp = *st.dp;
      s.continues = flip;
      open = s;
    }
  }
  if (open) close_truth(*open, std::max(last_ts, open->start), true, th, out);
}

GroundTruth build_truth(const std::vector<Pending>& deliveries, const disloc::Thresholds& th) {
  struct View {
    BboPair sip;
    std::map<VenueId, BboPair> venues;
    std::optional<PriceE4> dp[2];
  };
  std::map<SymbolId, View> views;
  GroundTruth truth;

  std::size_t i = 0;
  while (i < deliveries.size()) {
    const TimeUs ts = deliveries[i].ev.obs_ts;
    std::vector<SymbolId> touched;
    for (; i < deliveries.size() && deliveries[i].ev.obs_ts == ts; ++i) {
      const Pending& d = deliveries[i];
      if (d.ev.kind != EventKind::Quote) continue;
      View& v = views[d.ev.symbol];
      if (d.ev.feed.is_sip()) {
        v.sip = d.quote;
      } else {
        v.venues[d.ev.venue] = d.quote;
      }
      touched.push_back(d.ev.symbol);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (SymbolId sym : touched) {
      View& v = views[sym];
      std::optional<PriceE4> best_bid, best_offer;
      for (const auto& [venue, q] : v.venues) {
        if (q.bid && (!best_bid || q.bid->px > *best_bid)) best_bid = q.bid->px;
        if (q.offer && (!best_offer || q.offer->px < *best_offer)) best_offer = q.offer->px;
      }
      const std::optional<PriceE4> direct[2] = {best_bid, best_offer};
      const std::optional<Level>* sip[2] = {&v.sip.bid, &v.sip.offer};
      for (std::size_t s = 0; s < 2; ++s) {
        std::optional<PriceE4> dp;
        if (*sip[s] && direct[s]) dp = (*sip[s])->px - *direct[s];
        if (dp != v.dp[s]) {
          v.dp[s] = dp;
          truth.steps[{sym, static_cast<Side>(s)}].push_back(TruthStep{ts, dp});
        }
      }
    }
  }
  if (!deliveries.empty()) truth.last_ts = deliveries.back().ev.obs_ts;
  for (const auto& [key, steps] : truth.steps)
    segments_from_steps(key.first, key.second, steps, truth.last_ts, th, truth.segments);
  disloc::sort_segments(truth.segments);
  return truth;
}

} // namespace

Scenario Scenario::parse(std::string_view text) {
  Scenario sc;
  std::size_t ordinal = 0;
  for (const auto& cl : split_config(text)) {
    const std::string where = "line " + std::to_string(cl.line_no) + ": ";
    try {
      if (cl.section.empty() && cl.text.find('=') != std::string::npos && split_ws(cl.text).size() <= 3) {
        auto eq = cl.text.find('=');
        auto tok_k = split_ws(cl.text.substr(0, eq));
        auto tok_v = split_ws(cl.text.substr(eq + 1));
        if (tok_k.size() != 1 || tok_v.size() != 1) throw ConfigError("expected key = value");
        if (tok_k[0] != "horizon_us") throw ConfigError("unknown key '" + tok_k[0] + "'");
        if (!parse_int(tok_v[0], sc.horizon_us) || sc.horizon_us < 0) throw ConfigError("bad horizon_us");
        continue;
      }
      if (!cl.section.empty() && cl.section != "orders") throw ConfigError("unknown section [" + cl.section + "]");
      auto tok = split_ws(cl.text);
      if (tok.size() != 7) throw ConfigError("order line needs 7 fields: t_us venue symbol side px_e4 qty flags");
      ++ordinal;
      ScenarioOrder o;
      std::int64_t v = 0;
      if (!parse_int(tok[0], v) || v < 0) throw ConfigError("bad t_us '" + tok[0] + "'");
      o.t = TimeUs{v};
      if (!parse_int(tok[1], v) || v < 0 || v >= static_cast<std::int64_t>(kMaxVenues))
        throw ConfigError("bad venue '" + tok[1] + "'");
      o.venue = static_cast<VenueId>(v);
      if (!SymbolId::valid(tok[2])) throw ConfigError("bad symbol '" + tok[2] + "'");
      o.symbol = SymbolId::parse(tok[2]);
      if (tok[3] == "B") {
        o.order.side = Side::Bid;
      } else if (tok[3] == "S") {
        o.order.side = Side::Offer;
      } else {
        throw ConfigError("side must be B or S");
      }
      if (tok[4] != "-") {
        if (!parse_int(tok[4], v) || v < 0) throw ConfigError("bad px_e4 '" + tok[4] + "'");
        o.order.limit_px = PriceE4{v};
      }
      if (!parse_int(tok[5], v) || v < 0) throw ConfigError("bad qty '" + tok[5] + "'");
      o.order.qty = Quantity{v};
      o.order.id = ordinal;
      if (tok[6] != "-") {
        std::stringstream flags(tok[6]);
        std::string f;
        while (std::getline(flags, f, ',')) {
          auto num = [&](std::size_t skip) {
            std::int64_t n = 0;
            if (!parse_int(std::string_view(f).substr(skip), n) || n < 0) throw ConfigError("bad flag '" + f + "'");
            return static_cast<std::uint64_t>(n);
          };
          if (f == "hidden") {
            o.order.displayed = false;
          } else if (f == "ioc") {
            o.order.ioc = true;
          } else if (f == "market") {
            o.order.limit_px.reset();
          } else if (f == "peg") {
            o.order.peg = book::Peg::Midpoint;
            o.order.displayed = false;
          } else if (f.starts_with("id=")) {
            o.order.id = num(3);
          } else if (f.starts_with("cancel=")) {
            o.action = Action::Cancel;
            o.target = num(7);
          } else if (f.starts_with("modify=")) {
            o.action = Action::Modify;
            o.target = num(7);
          } else {
            throw ConfigError("unknown flag '" + f + "'");
          }
        }
      }
      if (o.action == Action::Submit && !o.order.limit_px && o.order.peg == book::Peg::None && !o.order.ioc)
        o.order.ioc = true;
      sc.orders.push_back(o);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return sc;
}

std::string Scenario::serialize() const {
  std::ostringstream os;
  os << "horizon_us = " << horizon_us << "\n\n[orders]\n";
  for (const auto& o : orders) {
    os << o.t.value << " " << static_cast<unsigned>(o.venue) << " " << o.symbol.view() << " "
       << (o.order.side == Side::Bid ? "B" : "S") << " ";
    if (o.order.limit_px) {
      os << o.order.limit_px->value;
    } else {
      os << "-";
    }
    os << " " << o.order.qty.value << " ";
    std::vector<std::string> flags;
    switch (o.action) {
      case Action::Cancel: flags.push_back("cancel=" + std::to_string(o.target)); break;
      case Action::Modify: flags.push_back("modify=" + std::to_string(o.target)); break;
      case Action::Submit:
        flags.push_back("id=" + std::to_string(o.order.id));
        if (o.order.peg == book::Peg::Midpoint) {
          flags.push_back("peg");
        } else if (!o.order.displayed) {
          flags.push_back("hidden");
        }
        if (!o.order.limit_px && o.order.peg == book::Peg::None) {
          flags.push_back("market");
        } else if (o.order.ioc) {
          flags.push_back("ioc");
        }
        break;
    }
    for (std::size_t i = 0; i < flags.size(); ++i) os << (i ? "," : "") << flags[i];
    os << "\n";
  }
  return os.str();
}

Scenario generate_scenario(const SimTopology& topology, const GenOptions& options, std::uint64_t seed) {
  if (options.horizon_us <= 0) throw DomainError("horizon must be positive");
  std::vector<VenueId> venues = options.venues;
  if (venues.empty())
    for (const auto& [v, site] : topology.venues()) venues.push_back(v);
  if (venues.empty()) throw ConfigError("topology has no venues");
  std::vector<SymbolId> symbols = options.symbols;
  if (symbols.empty()) symbols.push_back(SymbolId::parse("XYZ"));

  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> times(options.orders);
  for (auto& t : times) t = static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(options.horizon_us)));
  std::sort(times.begin(), times.end());

  std::map<SymbolId, std::int64_t> fair;
  for (SymbolId s : symbols) fair[s] = options.start_px.value;
  const std::int64_t tick = std::max<std::int64_t>(options.tick.value, 1);

  Scenario sc;
  sc.horizon_us = options.horizon_us;
  std::vector<std::pair<VenueId, book::OrderId>> live;
  for (std::size_t k = 0; k < options.orders; ++k) {
    ScenarioOrder o;
    o.t = TimeUs{times[k]};
    o.venue = venues[draw(rng, venues.size())];
    o.symbol = symbols[draw(rng, symbols.size())];
    o.order.id = k + 1;
    o.order.side = draw(rng, 2) == 0 ? Side::Bid : Side::Offer;
    o.order.qty = Quantity{100 * static_cast<std::int64_t>(1 + draw(rng, 5))};

    std::int64_t& f = fair[o.symbol];
    const auto walk = draw(rng, 10);
    if (walk == 0) f += tick;
    if (walk == 1 && f > 10 * tick) f -= tick;

    const auto kind = draw(rng, 100);
    if (kind < 14 && !live.empty()) {
      auto pick = draw(rng, live.size());
      o.venue = live[pick].first;
      o.action = draw(rng, 4) == 0 ? Action::Modify : Action::Cancel;
      o.target = live[pick].second;
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
      if (o.action == Action::Modify) live.emplace_back(o.venue, o.target);
    } else if (kind < 20) {
      o.order.ioc = true;
    } else if (kind < 24) {
      o.order.peg = book::Peg::Midpoint;
      o.order.displayed = false;
      live.emplace_back(o.venue, o.order.id);
    } else {
      const std::int64_t sgn = o.order.side == Side::Bid ? -1 : 1;
      // Mostly passive, sometimes marketable.
      const std::int64_t offset = static_cast<std::int64_t>(draw(rng, 7)) - 1;
      o.order.limit_px = PriceE4{f + sgn * offset * tick};
      if (kind < 30) o.order.displayed = false;
      live.emplace_back(o.venue, o.order.id);
    }
    sc.orders.push_back(o);
  }
  return sc;
}

SimResult run(const SimTopology& topology, const Scenario& scenario, disloc::Thresholds thresholds) {
  topology.validate();
  SimResult result;
  const std::string& observer = topology.observer();
  const std::int64_t delta = topology.sip_processing_us();

  std::vector<ScenarioOrder> orders = scenario.orders;
  std::stable_sort(orders.begin(), orders.end(),
                   [](const ScenarioOrder& a, const ScenarioOrder& b) { return a.t < b.t; });

  std::map<std::pair<VenueId, SymbolId>, book::LocalBook> books;
  std::map<SymbolId, std::map<VenueId, BboPair>> lbbos;
  std::vector<Pending> deliveries;
  std::vector<TapeInput> tape_inputs;
  std::uint64_t seq = 0;

  for (const auto& o : orders) {
    if (scenario.horizon_us > 0 && o.t.value > scenario.horizon_us)
      throw DomainError("order at " + std::to_string(o.t.value) + " lies beyond the horizon");
    const std::string& venue_site = topology.venue_site(o.venue);
    const std::string& tape_site = topology.tape_site(o.symbol);
    ++result.stats.orders;

    book::LocalBook& bk = books[{o.venue, o.symbol}];
    auto& symbol_lbbos = lbbos[o.symbol];
    const BboPair before = bk.lbbo();
    std::vector<book::Event> events;
    try {
      switch (o.action) {
        case Action::Submit: events = bk.submit(o.order, gbbo_of(symbol_lbbos)); break;
        case Action::Cancel: bk.cancel(o.target); break;
        case Action::Modify: bk.modify(o.target, o.order.qty); break;
      }
    } catch (const RejectedOrder&) {
      ++result.stats.rejected;
    } catch (const NotFound&) {
      ++result.stats.rejected;
    } catch (const ValidationError&) {
      ++result.stats.rejected;
    }

    const std::int64_t tape_arrival = o.t.value + topology.delay_us(venue_site, tape_site) + delta;
    for (const auto& e : events) {
      if (e.kind != book::EventKind::Fill) continue;
      ++result.stats.fills;
      TapeInput in;
      in.arrival = tape_arrival;
      in.seq = seq++;
      in.venue = o.venue;
      in.symbol = o.symbol;
      in.fill = Level{e.px, e.qty};
      in.aggressor = e.side == Side::Bid ? SideHint::Buy : SideHint::Sell;
      in.tape_site = tape_site;
      tape_inputs.push_back(std::move(in));
    }

    const BboPair after = bk.lbbo();
    if (after == before) continue;
    ++result.stats.lbbo_changes;
    symbol_lbbos[o.venue] = after;

    Pending direct;
    direct.ev.obs_ts = TimeUs{o.t.value + topology.delay_us(venue_site, observer)};
    direct.ev.feed = FeedId::direct(o.venue);
    direct.ev.kind = EventKind::Quote;
    direct.ev.symbol = o.symbol;
    direct.ev.venue = o.venue;
    direct.ev.bid = wire(after.bid);
    direct.ev.offer = wire(after.offer);
    direct.ev.origin_ts = o.t;
    direct.quote = after;
    direct.seq = seq++;
    deliveries.push_back(std::move(direct));

    TapeInput in;
    in.arrival = tape_arrival;
    in.seq = seq++;
    in.venue = o.venue;
    in.symbol = o.symbol;
    in.quote = after;
    in.tape_site = tape_site;
    tape_inputs.push_back(std::move(in));
  }

  std::stable_sort(tape_inputs.begin(), tape_inputs.end(), [](const TapeInput& a, const TapeInput& b) {
    return std::tie(a.arrival, a.seq) < std::tie(b.arrival, b.seq);
  });
  std::map<SymbolId, std::map<VenueId, BboPair>> sip_venues;
  std::map<SymbolId, BboPair> published;
  for (const auto& in : tape_inputs) {
    const std::int64_t obs = in.arrival + topology.delay_us(in.tape_site, observer);
    Pending p;
    p.ev.obs_ts = TimeUs{obs};
    p.ev.feed = FeedId::sip();
    p.ev.symbol = in.symbol;
    p.ev.venue = in.venue;
    p.ev.origin_ts = TimeUs{in.arrival};
    if (!in.quote) {
      p.ev.kind = EventKind::Trade;
      p.ev.trade = in.fill;
      p.ev.side_hint = in.aggressor;
    } else {
      auto& venues = sip_venues[in.symbol];
      venues[in.venue] = *in.quote;
      const BboPair nbbo = *gbbo_of(venues);
      auto [it, inserted] = published.try_emplace(in.symbol);
      if (!inserted && it->second == nbbo) continue;
      if (inserted && nbbo == BboPair{}) continue;
      it->second = nbbo;
      ++result.stats.sip_quotes;
      p.ev.kind = EventKind::Quote;
      p.ev.bid = wire(nbbo.bid);
      p.ev.offer = wire(nbbo.offer);
      p.quote = nbbo;
    }
    p.seq = in.seq;
    deliveries.push_back(std::move(p));
  }

  std::stable_sort(deliveries.begin(), deliveries.end(), [](const Pending& a, const Pending& b) {
    const bool a_direct = !a.ev.feed.is_sip();
    const bool b_direct = !b.ev.feed.is_sip();
    return std::tie(a.ev.obs_ts, a_direct, a.ev.venue, a.seq) < std::tie(b.ev.obs_ts, b_direct, b.ev.venue, b.seq);
  });

  result.truth = build_truth(deliveries, thresholds);
  result.events.reserve(deliveries.size());
  for (auto& d : deliveries) result.events.push_back(std::move(d.ev));
  return result;
}

} // namespace nms::sim
