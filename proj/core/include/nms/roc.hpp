#pragma once

#include "nms/bbo.hpp"
#include "nms/consolidate.hpp"
#include "nms/ingest.hpp"
#include "nms/types.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nms::roc {

// Which resting side a trade executed against, read off the SIP NBBO.
//   ActiveOffer  price equals the NBB only (an incoming sell hit the bid)
//   ActiveBid    price equals the NBO only
//   Both         the NBBO was locked at the trade price
enum class InferredSide : std::uint8_t { ActiveOffer, ActiveBid, Both, None };

enum class Flavor : std::uint8_t { DirectRoc, SipRoc, None };

std::string_view to_string(InferredSide s);
std::string_view to_string(Flavor f);

struct RocRecord {
  TimeUs ts{};
  SymbolId symbol{};
  VenueId venue = 0;
  PriceE4 exec_px{};
  Quantity shares{};
  // ActiveOffer or ActiveBid.
  InferredSide side = InferredSide::None;
  std::int64_t roc_e4 = 0;
  Flavor flavor = Flavor::None;

  bool operator==(const RocRecord&) const = default;
};

InferredSide infer_side(PriceE4 exec_px, const BboPair& sip);

struct TradeRoc {
  InferredSide inferred = InferredSide::None;
  std::vector<RocRecord> records;
  // Entries dropped because the DBBO lacked the side they needed.
  std::size_t skipped_missing_dbbo = 0;
};

// ROC entries of one trade given the quotes prevailing just before it.
// Zero-valued entries are dropped.
TradeRoc trade_roc(const ObserverEvent& trade, const BboPair& sip, const BboPair& dbbo);

enum class TradeSide : std::uint8_t { Buy, Sell, Unknown };

// Side used for the differing test: the hint when given, else the inferred
// aggressor (ActiveBid is a buy, ActiveOffer a sell).
TradeSide trade_side(SideHint hint, InferredSide inferred);

bool classify_differing(const ObserverEvent& trade, InferredSide inferred, const BboPair& sip, const BboPair& dbbo);

struct AggregateKey {
  std::string date;
  SymbolId symbol{};
  VenueId venue = 0;

  auto operator<=>(const AggregateKey&) const = default;
};

struct RocTotals {
  std::uint64_t trades = 0;
  std::uint64_t differing_trades = 0;
  // Notional in 1e-4 dollars.
  std::int64_t traded_value = 0;
  std::int64_t differing_traded_value = 0;
  // Sum of negative entries (≤ 0).
  std::int64_t sip_roc = 0;
  // Sum of positive entries (≥ 0).
  std::int64_t direct_roc = 0;

  [[nodiscard]] std::int64_t net_roc() const { return direct_roc + sip_roc; }
  [[nodiscard]] std::int64_t total_roc() const { return direct_roc - sip_roc; }

  void add_trade(const ObserverEvent& trade, bool differing);
  void add_record(const RocRecord& rec);
  RocTotals& operator+=(const RocTotals& other);

  bool operator==(const RocTotals&) const = default;
};

class RocAggregate {
public:
  void add_trade(const AggregateKey& key, const ObserverEvent& trade, bool differing);
  void add_record(const AggregateKey& key, const RocRecord& rec);
  void merge(const RocAggregate& other);

  [[nodiscard]] const std::map<AggregateKey, RocTotals>& by_key() const { return by_key_; }
  [[nodiscard]] RocTotals totals() const;

private:
  std::map<AggregateKey, RocTotals> by_key_;
};

// Sums over bare records (no trade counts), e.g. for worked examples.
RocTotals aggregate_records(std::span<const RocRecord> records);

// Headline rows. Opportunity costs come from the per-key net ROC: keys with
// a negative net feed sip_oc, positive ones direct_oc. Gross sums are kept
// alongside.
struct TableOne {
  std::int64_t total_oc = 0;
  std::int64_t sip_oc = 0;
  std::int64_t direct_oc = 0;
  std::uint64_t trades = 0;
  std::uint64_t differing_trades = 0;
  std::int64_t traded_value = 0;
  std::int64_t differing_traded_value = 0;
  double fraction_differing_trades = 0.0;
  double fraction_differing_notional = 0.0;
  double notional_over_trades = 0.0;
  std::int64_t gross_sip_roc = 0;
  std::int64_t gross_direct_roc = 0;
};

TableOne table_one(const RocAggregate& agg);

struct TradeOutcome {
  ObserverEvent trade;
  InferredSide inferred = InferredSide::None;
  bool differing = false;
  std::vector<RocRecord> records;
};

// Streams one session: quotes update the consolidated view, trades are
// scored against the view as it stood before them.
class RocAnalyzer {
public:
  explicit RocAnalyzer(std::string date, consolidate::VenueSet venues = consolidate::all_venues())
      : date_(std::move(date)), view_(venues) {}

  void on_event(const ObserverEvent& ev);

  [[nodiscard]] const std::vector<TradeOutcome>& outcomes() const { return outcomes_; }
  [[nodiscard]] const RocAggregate& aggregate() const { return agg_; }
  [[nodiscard]] std::size_t skipped_missing_dbbo() const { return skipped_; }
  [[nodiscard]] const consolidate::MarketView& view() const { return view_; }

private:
  std::string date_;
  consolidate::MarketView view_;
  std::vector<consolidate::DeltaSample> scratch_;
  std::vector<TradeOutcome> outcomes_;
  RocAggregate agg_;
  std::size_t skipped_ = 0;
};

} // namespace nms::roc
