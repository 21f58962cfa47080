#include "nms/roc.hpp"

#include "nms/errors.hpp"

#include <cstdlib>

namespace nms::roc {

namespace {

std::optional<PriceE4> px(const std::optional<Level>& l) {
  if (!l) return std::nullopt;
  return l->px;
}

} // namespace

std::string_view to_string(InferredSide s) {
  switch (s) {
    case InferredSide::ActiveOffer: return "ActiveOffer";
    case InferredSide::ActiveBid: return "ActiveBid";
    case InferredSide::Both: return "Both";
    case InferredSide::None: break;
  }
  return "None";
}

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::DirectRoc: return "DirectRoc";
    case Flavor::SipRoc: return "SipRoc";
    case Flavor::None: break;
  }
  return "None";
}

InferredSide infer_side(PriceE4 exec_px, const BboPair& sip) {
  const bool at_bid = sip.bid && sip.bid->px == exec_px;
  const bool at_offer = sip.offer && sip.offer->px == exec_px;
  if (at_bid && at_offer) return InferredSide::Both;
  if (at_bid) return InferredSide::ActiveOffer;
  if (at_offer) return InferredSide::ActiveBid;
  return InferredSide::None;
}

TradeRoc trade_roc(const ObserverEvent& trade, const BboPair& sip, const BboPair& dbbo) {
  if (trade.kind != EventKind::Trade || !trade.trade) throw ValidationError("trade_roc needs a trade event");
  TradeRoc out;
  const Level& t = *trade.trade;
  out.inferred = infer_side(t.px, sip);

  auto emit = [&](InferredSide side) {
    const bool offer_side = side == InferredSide::ActiveOffer;
    const auto& direct = offer_side ? dbbo.bid : dbbo.offer;
    if (!direct) {
      ++out.skipped_missing_dbbo;
      return;
    }
    const std::int64_t per_share = offer_side ? sip.bid->px.value - direct->px.value
                                              : direct->px.value - sip.offer->px.value;
    const std::int64_t roc = per_share * t.qty.value;
    if (roc == 0) return;
    out.records.push_back(RocRecord{trade.obs_ts, trade.symbol, trade.venue, t.px, t.qty, side, roc,
                                    roc > 0 ? Flavor::DirectRoc : Flavor::SipRoc});
  };

  switch (out.inferred) {
    case InferredSide::ActiveOffer:
    case InferredSide::ActiveBid:
      emit(out.inferred);
      break;
    case InferredSide::Both:
      emit(InferredSide::ActiveBid);
      emit(InferredSide::ActiveOffer);
      break;
    case InferredSide::None:
      break;
  }
  return out;
}

TradeSide trade_side(SideHint hint, InferredSide inferred) {
  if (hint == SideHint::Buy) return TradeSide::Buy;
  if (hint == SideHint::Sell) return TradeSide::Sell;
  if (inferred == InferredSide::ActiveBid) return TradeSide::Buy;
  if (inferred == InferredSide::ActiveOffer) return TradeSide::Sell;
  return TradeSide::Unknown;
}

bool classify_differing(const ObserverEvent& trade, InferredSide inferred, const BboPair& sip, const BboPair& dbbo) {
  const bool bids_differ = px(sip.bid) != px(dbbo.bid);
  const bool offers_differ = px(sip.offer) != px(dbbo.offer);
  switch (trade_side(trade.side_hint, inferred)) {
    case TradeSide::Buy: return bids_differ;
    case TradeSide::Sell: return offers_differ;
    case TradeSide::Unknown: break;
  }
  return bids_differ || offers_differ;
}

void RocTotals::add_trade(const ObserverEvent& trade, bool differing) {
  const std::int64_t notional = trade.trade->px.value * trade.trade->qty.value;
  ++trades;
  traded_value += notional;
  if (differing) {
    ++differing_trades;
    differing_traded_value += notional;
  }
}

void RocTotals::add_record(const RocRecord& rec) {
  if (rec.roc_e4 > 0) {
    direct_roc += rec.roc_e4;
  } else {
    sip_roc += rec.roc_e4;
  }
}

RocTotals& RocTotals::operator+=(const RocTotals& o) {
  trades += o.trades;
  differing_trades += o.differing_trades;
  traded_value += o.traded_value;
  differing_traded_value += o.differing_traded_value;
  sip_roc += o.sip_roc;
  direct_roc += o.direct_roc;
  return *this;
}

void RocAggregate::add_trade(const AggregateKey& key, const ObserverEvent& trade, bool differing) {
  by_key_[key].add_trade(trade, differing);
}

void RocAggregate::add_record(const AggregateKey& key, const RocRecord& rec) { by_key_[key].add_record(rec); }

void RocAggregate::merge(const RocAggregate& other) {
  for (const auto& [k, v] : other.by_key_) by_key_[k] += v;
}

RocTotals RocAggregate::totals() const {
  RocTotals t;
  for (const auto& [k, v] : by_key_) t += v;
  return t;
}

RocTotals aggregate_records(std::span<const RocRecord> records) {
  RocTotals t;
  for (const auto& r : records) t.add_record(r);
  return t;
}

TableOne table_one(const RocAggregate& agg) {
  TableOne t;
  for (const auto& [k, v] : agg.by_key()) {
    const std::int64_t net = v.net_roc();
    if (net < 0) {
      t.sip_oc += -net;
    } else {
      t.direct_oc += net;
    }
    t.trades += v.trades;
    t.differing_trades += v.differing_trades;
    t.traded_value += v.traded_value;
    t.differing_traded_value += v.differing_traded_value;
    t.gross_sip_roc += v.sip_roc;
    t.gross_direct_roc += v.direct_roc;
  }
  t.total_oc = t.sip_oc + t.direct_oc;
  if (t.trades > 0)
    t.fraction_differing_trades = static_cast<double>(t.differing_trades) / static_cast<double>(t.trades);
  if (t.traded_value > 0)
    t.fraction_differing_notional =
        static_cast<double>(t.differing_traded_value) / static_cast<double>(t.traded_value);
  if (t.fraction_differing_trades > 0.0)
    t.notional_over_trades = t.fraction_differing_notional / t.fraction_differing_trades;
  return t;
}

void RocAnalyzer::on_event(const ObserverEvent& ev) {
  if (ev.kind == EventKind::Quote) {
    scratch_.clear();
    view_.apply(ev, scratch_);
    return;
  }
  view_.track(ev.symbol);
  const auto snap = view_.snapshot(ev.symbol);
  TradeRoc r = trade_roc(ev, snap.sip, snap.dbbo);
  skipped_ += r.skipped_missing_dbbo;
  TradeOutcome out{ev, r.inferred, classify_differing(ev, r.inferred, snap.sip, snap.dbbo), std::move(r.records)};
  const AggregateKey key{date_, ev.symbol, ev.venue};
  agg_.add_trade(key, ev, out.differing);
  for (const auto& rec : out.records) agg_.add_record(key, rec);
  outcomes_.push_back(std::move(out));
}

} // namespace nms::roc
