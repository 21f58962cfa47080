#include "nms/consolidate.hpp"

#include "nms/errors.hpp"

#include <algorithm>
#include <string>

namespace nms::consolidate {

namespace {

void apply_side(std::optional<Level>& slot, const std::optional<Level>& update) {
  if (!update) return;
  if (update->qty.value == 0) {
    slot.reset();
  } else {
    slot = update;
  }
}

BboPair aggregate_active(const std::array<BboPair, kMaxVenues>& venues, const std::vector<VenueId>& active) {
  BboPair out;
  for (VenueId v : active) {
    const BboPair& q = venues[v];
    if (q.bid && (!out.bid || q.bid->px > out.bid->px)) out.bid = q.bid;
    if (q.offer && (!out.offer || q.offer->px < out.offer->px)) out.offer = q.offer;
  }
  return out;
}

} // namespace

BboPair aggregate(const std::array<BboPair, kMaxVenues>& venues) {
  std::vector<VenueId> all;
  for (std::size_t v = 0; v < kMaxVenues; ++v) all.push_back(static_cast<VenueId>(v));
  return aggregate_active(venues, all);
}

std::optional<PriceE4> delta(const BboPair& sip, const BboPair& dbbo, Side side) {
  const auto& a = sip.side(side);
  const auto& b = dbbo.side(side);
  if (!a || !b) return std::nullopt;
  return a->px - b->px;
}

void MarketView::track(SymbolId symbol) { state_for(symbol); }

SymbolState& MarketView::state_for(SymbolId symbol) {
  if (last_state_ && symbol == last_symbol_) return *last_state_;
  last_symbol_ = symbol;
  last_state_ = &states_[symbol];
  return *last_state_;
}

void MarketView::apply(const ObserverEvent& ev, std::vector<DeltaSample>& out) {
  if (ev.kind != EventKind::Quote) return;
  SymbolState& st = state_for(ev.symbol);

  if (ev.feed.is_sip()) {
    apply_side(st.sip.bid, ev.bid);
    apply_side(st.sip.offer, ev.offer);
  } else {
    const VenueId v = ev.feed.venue();
    if (!venues_.test(v)) throw ValidationError("quote from unknown venue " + std::to_string(v));
    BboPair& q = st.venues[v];
    apply_side(q.bid, ev.bid);
    apply_side(q.offer, ev.offer);
    const bool quoted = q.bid || q.offer;
    auto pos = std::lower_bound(st.active.begin(), st.active.end(), v);
    const bool listed = pos != st.active.end() && *pos == v;
    if (quoted && !listed) st.active.insert(pos, v);
    if (!quoted && listed) st.active.erase(pos);
    st.dbbo = aggregate_active(st.venues, st.active);
  }

  for (Side s : {Side::Bid, Side::Offer}) {
    auto dp = delta(st.sip, st.dbbo, s);
    auto& prev = st.dp[index(s)];
    if (dp != prev) {
      prev = dp;
      out.push_back(DeltaSample{ev.obs_ts, ev.symbol, s, dp});
    }
  }
  st.last_change = ev.obs_ts;
}

std::vector<DeltaSample> MarketView::apply_event(const ObserverEvent& ev) {
  std::vector<DeltaSample> out;
  apply(ev, out);
  return out;
}

Snapshot MarketView::snapshot(SymbolId symbol) const {
  const SymbolState* st = find(symbol);
  if (!st) throw NotFound("symbol " + symbol.str() + " is not tracked");
  return Snapshot{st->sip, st->dbbo};
}

const SymbolState* MarketView::find(SymbolId symbol) const {
  auto it = states_.find(symbol);
  return it == states_.end() ? nullptr : &it->second;
}

std::vector<SymbolId> MarketView::symbols() const {
  std::vector<SymbolId> out;
  out.reserve(states_.size());
  for (const auto& [sym, st] : states_) out.push_back(sym);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace nms::consolidate
