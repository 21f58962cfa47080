#include "nms/book.hpp"

#include "nms/errors.hpp"

#include <algorithm>
#include <string>

namespace nms::book {

namespace {

// True when `px` is at least as good as `limit` for a taker on `side`.
bool within(Side side, PriceE4 px, PriceE4 limit) { return side == Side::Bid ? px <= limit : px >= limit; }

// True when `a` is strictly better than `b` for a taker on `side`.
bool better(Side side, PriceE4 a, PriceE4 b) { return side == Side::Bid ? a < b : a > b; }

} // namespace

std::optional<PriceE4> midpoint(const std::optional<BboPair>& nbbo) {
  if (!nbbo || !nbbo->two_sided() || nbbo->crossed()) return std::nullopt;
  std::int64_t sum = nbbo->bid->px.value + nbbo->offer->px.value;
  return PriceE4{sum >= 0 ? sum / 2 : -((-sum + 1) / 2)};
}

std::vector<Event> LocalBook::submit(const Order& order, const std::optional<BboPair>& nbbo) {
  if (order.qty.value <= 0) throw ValidationError("order " + std::to_string(order.id) + " has non-positive quantity");
  if (index_.contains(order.id)) throw ValidationError("duplicate order id " + std::to_string(order.id));

  const std::optional<PriceE4> mid = midpoint(nbbo);
  const Side side = order.side;
  const Side opp = opposite(side);

  bool has_limit = order.limit_px.has_value();
  PriceE4 limit = order.limit_px.value_or(PriceE4{});
  bool can_match = true;
  if (order.peg == Peg::Midpoint) {
    if (!mid) throw RejectedOrder("midpoint peg " + std::to_string(order.id) + " needs a two-sided uncrossed NBBO");
    // A cap that excludes the midpoint leaves nothing to match.
    can_match = !has_limit || within(side, *mid, limit);
    has_limit = true;
    limit = *mid;
  }

  std::vector<Event> events;
  std::int64_t remaining = order.qty.value;

  while (remaining > 0 && can_match) {
    Ladder& book = ladder(opp);
    Queue& opp_pegs = pegs(opp);

    std::optional<PriceE4> level_px;
    if (!book.empty()) level_px = price_of(opp, book.begin()->first);

    Queue::iterator peg_it = opp_pegs.end();
    if (mid) {
      peg_it = std::find_if(opp_pegs.begin(), opp_pegs.end(),
                            [&](const Resting& r) { return !r.limit_px || within(opp, *mid, *r.limit_px); });
    }
    const bool have_peg = peg_it != opp_pegs.end();

    bool take_level = false;
    if (level_px && have_peg) {
      take_level = !better(side, *mid, *level_px);
    } else if (level_px) {
      take_level = true;
    } else if (!have_peg) {
      break;
    }

    PriceE4 candidate = take_level ? *level_px : *mid;
    if (has_limit && !within(side, candidate, limit)) break;

    Queue* queue;
    Queue::iterator it;
    PriceLevel* level = nullptr;
    if (take_level) {
      level = &book.begin()->second;
      queue = level->displayed.empty() ? &level->hidden : &level->displayed;
      it = queue->begin();
    } else {
      queue = &opp_pegs;
      it = peg_it;
    }

    const bool peg_involved = !take_level || order.peg == Peg::Midpoint;
    const PriceE4 exec_px = peg_involved ? *mid : candidate;
    const std::int64_t fill = std::min(remaining, it->qty.value);
    events.push_back(Event{EventKind::Fill, order.id, it->id, side, exec_px, Quantity{fill}});
    remaining -= fill;
    it->qty.value -= fill;
    if (level && queue == &level->displayed) level->displayed_qty -= fill;
    if (it->qty.value == 0) erase(it->id);
  }

  if (remaining > 0) {
    if (order.is_market() || order.ioc) {
      events.push_back(Event{EventKind::Cancel, order.id, 0, side, order.limit_px.value_or(PriceE4{}), Quantity{remaining}});
    } else {
      rest(order, Quantity{remaining});
      PriceE4 px = order.peg == Peg::Midpoint ? *mid : *order.limit_px;
      events.push_back(Event{EventKind::Rest, order.id, 0, side, px, Quantity{remaining}});
    }
  }
  return events;
}

void LocalBook::rest(const Order& order, Quantity qty) {
  if (order.peg == Peg::Midpoint) {
    Queue& q = pegs(order.side);
    q.push_back(Resting{order.id, qty, order.limit_px});
    index_.emplace(order.id, Locator{order.side, PriceE4{}, Slot::Peg, std::prev(q.end())});
    return;
  }
  PriceE4 px = *order.limit_px;
  PriceLevel& level = ladder(order.side)[key(order.side, px)];
  Queue& q = order.displayed ? level.displayed : level.hidden;
  q.push_back(Resting{order.id, qty, px});
  if (order.displayed) level.displayed_qty += qty.value;
  index_.emplace(order.id, Locator{order.side, px, order.displayed ? Slot::Displayed : Slot::Hidden, std::prev(q.end())});
}

void LocalBook::erase(OrderId id) {
  auto found = index_.find(id);
  const Locator loc = found->second;
  index_.erase(found);
  if (loc.slot == Slot::Peg) {
    pegs(loc.side).erase(loc.it);
    return;
  }
  Ladder& book = ladder(loc.side);
  auto level_it = book.find(key(loc.side, loc.px));
  PriceLevel& level = level_it->second;
  if (loc.slot == Slot::Displayed) {
    level.displayed_qty -= loc.it->qty.value;
    level.displayed.erase(loc.it);
  } else {
    level.hidden.erase(loc.it);
  }
  if (level.displayed.empty() && level.hidden.empty()) book.erase(level_it);
}

void LocalBook::cancel(OrderId id) {
  if (!index_.contains(id)) throw NotFound("order " + std::to_string(id) + " is not resting");
  erase(id);
}

void LocalBook::modify(OrderId id, Quantity new_qty) {
  auto found = index_.find(id);
  if (found == index_.end()) throw NotFound("order " + std::to_string(id) + " is not resting");
  if (new_qty.value <= 0) throw ValidationError("modify to non-positive quantity; use cancel");
  const Locator& loc = found->second;
  if (loc.slot == Slot::Displayed) {
    ladder(loc.side).at(key(loc.side, loc.px)).displayed_qty += new_qty.value - loc.it->qty.value;
  }
  loc.it->qty = new_qty;
}

BboPair LocalBook::lbbo() const {
  BboPair out;
  for (Side s : {Side::Bid, Side::Offer}) {
    for (const auto& [k, level] : ladder(s)) {
      if (level.displayed_qty > 0) {
        out.side(s) = Level{price_of(s, k), Quantity{level.displayed_qty}};
        break;
      }
    }
  }
  return out;
}

Quantity LocalBook::resting_qty(OrderId id) const {
  auto found = index_.find(id);
  if (found == index_.end()) throw NotFound("order " + std::to_string(id) + " is not resting");
  return found->second.it->qty;
}

std::vector<OrderId> LocalBook::queue_at(Side side, PriceE4 px) const {
  std::vector<OrderId> ids;
  const Ladder& book = ladder(side);
  auto it = book.find(key(side, px));
  if (it == book.end()) return ids;
  for (const auto& r : it->second.displayed) ids.push_back(r.id);
  for (const auto& r : it->second.hidden) ids.push_back(r.id);
  return ids;
}

std::vector<OrderId> LocalBook::peg_queue(Side side) const {
  std::vector<OrderId> ids;
  for (const auto& r : pegs(side)) ids.push_back(r.id);
  return ids;
}

} // namespace nms::book
