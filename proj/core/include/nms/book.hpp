#pragma once

#include "nms/bbo.hpp"
#include "nms/types.hpp"

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace nms::book {

using OrderId = std::uint64_t;

enum class Peg : std::uint8_t { None, Midpoint };

struct Order {
  OrderId id = 0;
  Side side = Side::Bid;
  // Absent means a market order, which never rests.
  std::optional<PriceE4> limit_px;
  Quantity qty{};
  bool displayed = true;
  bool ioc = false;
  Peg peg = Peg::None;

  [[nodiscard]] bool is_market() const { return !limit_px && peg == Peg::None; }
};

enum class EventKind : std::uint8_t { Fill, Rest, Cancel };

struct Event {
  EventKind kind = EventKind::Fill;
  OrderId order_id = 0;
  // Resting counterparty of a fill.
  OrderId maker_id = 0;
  Side side = Side::Bid;
  PriceE4 px{};
  Quantity qty{};

  bool operator==(const Event&) const = default;
};

// One venue's book for one symbol.
//
// Price levels hold a displayed FIFO followed by a hidden FIFO; midpoint pegs
// sit in a separate per-side queue and rank after limit orders priced at the
// current midpoint. Fills execute at the resting order's price, or at the
// NBBO midpoint when either party is a peg.
class LocalBook {
public:
  // Throws RejectedOrder for a peg without a usable NBBO and ValidationError
  // for non-positive quantity or a duplicate id.
  std::vector<Event> submit(const Order& order, const std::optional<BboPair>& nbbo = std::nullopt);

  // Both throw NotFound for an id that is not resting.
  void cancel(OrderId id);
  // Changes size in place; queue position is kept.
  void modify(OrderId id, Quantity new_qty);

  // Best displayed level per side with its aggregated displayed size.
  [[nodiscard]] BboPair lbbo() const;

  [[nodiscard]] bool contains(OrderId id) const { return index_.contains(id); }
  [[nodiscard]] std::size_t resting_orders() const { return index_.size(); }
  [[nodiscard]] Quantity resting_qty(OrderId id) const;

  // Ids at one price in priority order (displayed then hidden).
  [[nodiscard]] std::vector<OrderId> queue_at(Side side, PriceE4 px) const;
  [[nodiscard]] std::vector<OrderId> peg_queue(Side side) const;

private:
  struct Resting {
    OrderId id;
    Quantity qty;
    std::optional<PriceE4> limit_px;
  };
  using Queue = std::list<Resting>;
  struct PriceLevel {
    Queue displayed;
    Queue hidden;
    std::int64_t displayed_qty = 0;
  };
  enum class Slot : std::uint8_t { Displayed, Hidden, Peg };
  struct Locator {
    Side side;
    PriceE4 px;
    Slot slot;
    Queue::iterator it;
  };

  // Bids keyed by negated price so both maps iterate best-first.
  using Ladder = std::map<std::int64_t, PriceLevel>;

  static std::int64_t key(Side s, PriceE4 px) { return s == Side::Bid ? -px.value : px.value; }
  static PriceE4 price_of(Side s, std::int64_t k) { return PriceE4{s == Side::Bid ? -k : k}; }

  Ladder& ladder(Side s) { return s == Side::Bid ? bids_ : offers_; }
  [[nodiscard]] const Ladder& ladder(Side s) const { return s == Side::Bid ? bids_ : offers_; }
  Queue& pegs(Side s) { return s == Side::Bid ? bid_pegs_ : offer_pegs_; }
  [[nodiscard]] const Queue& pegs(Side s) const { return s == Side::Bid ? bid_pegs_ : offer_pegs_; }

  void rest(const Order& order, Quantity qty);
  void erase(OrderId id);

  Ladder bids_;
  Ladder offers_;
  Queue bid_pegs_;
  Queue offer_pegs_;
  std::unordered_map<OrderId, Locator> index_;
};

// Exact midpoint of a two-sided, uncrossed NBBO; absent otherwise.
std::optional<PriceE4> midpoint(const std::optional<BboPair>& nbbo);

} // namespace nms::book
