#include "oracles.hpp"

#include "nms/book.hpp"
#include "nms/errors.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nms::book {
namespace {

Order limit(OrderId id, Side side, std::int64_t px, std::int64_t qty, bool displayed = true) {
  Order o;
  o.id = id;
  o.side = side;
  o.limit_px = PriceE4{px};
  o.qty = Quantity{qty};
  o.displayed = displayed;
  return o;
}

Order market(OrderId id, Side side, std::int64_t qty) {
  Order o;
  o.id = id;
  o.side = side;
  o.qty = Quantity{qty};
  return o;
}

Order peg(OrderId id, Side side, std::int64_t qty, std::optional<std::int64_t> cap = std::nullopt) {
  Order o;
  o.id = id;
  o.side = side;
  o.qty = Quantity{qty};
  o.peg = Peg::Midpoint;
  o.displayed = false;
  if (cap) o.limit_px = PriceE4{*cap};
  return o;
}

BboPair nbbo(std::int64_t bid, std::int64_t offer) {
  return BboPair{Level{PriceE4{bid}, Quantity{100}}, Level{PriceE4{offer}, Quantity{100}}};
}

TEST(Book, LimitOrderRestsOnEmptyBook) {
  LocalBook b;
  const auto ev = b.submit(limit(1, Side::Bid, 991300, 100));
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::Rest);
  EXPECT_EQ(b.lbbo().bid, (Level{PriceE4{991300}, Quantity{100}}));
  EXPECT_FALSE(b.lbbo().offer);
}

TEST(Book, MarketOrderFillsThenCancelsResidual) {
  LocalBook b;
  b.submit(limit(1, Side::Offer, 991500, 100));
  const auto ev = b.submit(market(2, Side::Bid, 150));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0], (Event{EventKind::Fill, 2, 1, Side::Bid, PriceE4{991500}, Quantity{100}}));
  EXPECT_EQ(ev[1].kind, EventKind::Cancel);
  EXPECT_EQ(ev[1].qty, Quantity{50});
  EXPECT_EQ(b.resting_orders(), 0u);
}

TEST(Book, HiddenMidpointPegFillsAtMidpoint) {
  LocalBook b;
  const auto n = nbbo(991300, 991500);
  b.submit(peg(1, Side::Offer, 100), n);
  EXPECT_FALSE(b.lbbo().offer);
  const auto ev = b.submit(limit(2, Side::Bid, 991500, 100), n);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0], (Event{EventKind::Fill, 2, 1, Side::Bid, PriceE4{991400}, Quantity{100}}));
}

TEST(Book, PegNeedsUsableNbbo) {
  LocalBook b;
  EXPECT_THROW(b.submit(peg(1, Side::Bid, 100)), RejectedOrder);
  EXPECT_THROW(b.submit(peg(2, Side::Bid, 100), nbbo(991500, 991300)), RejectedOrder);
  BboPair one_sided;
  one_sided.bid = Level{PriceE4{991300}, Quantity{1}};
  EXPECT_THROW(b.submit(peg(3, Side::Bid, 100), one_sided), RejectedOrder);
  EXPECT_EQ(b.resting_orders(), 0u);
}

TEST(Book, PegWithCapExcludingMidpointRestsWithoutMatching) {
  LocalBook b;
  const auto n = nbbo(991300, 991500);
  b.submit(limit(1, Side::Offer, 991400, 100), n);
  const auto ev = b.submit(peg(2, Side::Bid, 100, 991350), n);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::Rest);
  EXPECT_EQ(b.peg_queue(Side::Bid), std::vector<OrderId>{2});
}

TEST(Book, LevelBeatsPegAtEqualPrice) {
  LocalBook b;
  const auto n = nbbo(991300, 991500);
  b.submit(peg(1, Side::Offer, 100), n);
  b.submit(limit(2, Side::Offer, 991400, 100), n);
  const auto ev = b.submit(limit(3, Side::Bid, 991500, 150), n);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].maker_id, 2u);
  EXPECT_EQ(ev[1].maker_id, 1u);
  EXPECT_EQ(ev[1].px, PriceE4{991400});
}

TEST(Book, MidpointUsesFloorForOddSums) {
  EXPECT_EQ(midpoint(nbbo(991300, 991301)), PriceE4{991300});
  EXPECT_EQ(midpoint(nbbo(991300, 991300)), PriceE4{991300});
  EXPECT_FALSE(midpoint(std::nullopt));
}

TEST(Book, LbboAggregatesDisplayedSize) {
  LocalBook b;
  b.submit(limit(1, Side::Bid, 991300, 100));
  b.submit(limit(2, Side::Bid, 991200, 200));
  b.submit(limit(3, Side::Offer, 991500, 100));
  b.submit(limit(4, Side::Bid, 991300, 50, false));
  EXPECT_EQ(b.lbbo(), (BboPair{Level{PriceE4{991300}, Quantity{100}}, Level{PriceE4{991500}, Quantity{100}}}));
}

TEST(Book, HiddenOrderIsExcludedFromLbbo) {
  LocalBook b;
  b.submit(limit(1, Side::Bid, 991300, 100));
  b.submit(limit(2, Side::Bid, 991400, 100, false));
  EXPECT_EQ(b.lbbo().bid, (Level{PriceE4{991300}, Quantity{100}}));
  const auto ev = b.submit(limit(3, Side::Offer, 991300, 50));
  EXPECT_EQ(ev[0].maker_id, 2u);
  EXPECT_EQ(ev[0].px, PriceE4{991400});
}

TEST(Book, DisplayedBeforeHiddenAtSamePrice) {
  LocalBook b;
  b.submit(limit(1, Side::Bid, 991300, 100, false));
  b.submit(limit(2, Side::Bid, 991300, 100));
  EXPECT_EQ(b.queue_at(Side::Bid, PriceE4{991300}), (std::vector<OrderId>{2, 1}));
  const auto ev = b.submit(limit(3, Side::Offer, 991300, 100));
  EXPECT_EQ(ev[0].maker_id, 2u);
}

TEST(Book, ModifyKeepsQueuePosition) {
  LocalBook b;
  b.submit(limit(1, Side::Bid, 991300, 100));
  b.submit(limit(2, Side::Bid, 991300, 100));
  b.modify(1, Quantity{50});
  EXPECT_EQ(b.queue_at(Side::Bid, PriceE4{991300}), (std::vector<OrderId>{1, 2}));
  EXPECT_EQ(b.resting_qty(1), Quantity{50});
  EXPECT_EQ(b.lbbo().bid->qty, Quantity{150});
  EXPECT_THROW(b.modify(99, Quantity{1}), NotFound);
  EXPECT_THROW(b.modify(1, Quantity{0}), ValidationError);
}

TEST(Book, CancelEmptiesLevel) {
  LocalBook b;
  b.submit(limit(1, Side::Offer, 991500, 100));
  b.cancel(1);
  EXPECT_FALSE(b.lbbo().offer);
  EXPECT_TRUE(b.queue_at(Side::Offer, PriceE4{991500}).empty());
  EXPECT_THROW(b.cancel(1), NotFound);
}

TEST(Book, RejectsBadOrders) {
  LocalBook b;
  EXPECT_THROW(b.submit(limit(1, Side::Bid, 991300, 0)), ValidationError);
  b.submit(limit(1, Side::Bid, 991300, 10));
  EXPECT_THROW(b.submit(limit(1, Side::Bid, 991300, 10)), ValidationError);
}

TEST(Book, IocNeverRests) {
  LocalBook b;
  Order o = limit(1, Side::Bid, 991300, 100);
  o.ioc = true;
  const auto ev = b.submit(o);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::Cancel);
  EXPECT_EQ(b.resting_orders(), 0u);
}

// Random books against the rescanning reference matcher.
TEST(BookProperty, MatchesNaiveBookAndConservesQuantity) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    LocalBook b;
    oracle::NaiveBook ref;
    std::vector<OrderId> ids;
    const int n = 1 + static_cast<int>(rng() % 50);
    for (int k = 1; k <= n; ++k) {
      const auto kind = rng() % 10;
      if (kind == 0 && !ids.empty()) {
        const OrderId id = ids[rng() % ids.size()];
        const bool live = ref.cancel(id);
        if (live) {
          b.cancel(id);
        } else {
          EXPECT_THROW(b.cancel(id), NotFound);
        }
        continue;
      }
      if (kind == 1 && !ids.empty()) {
        const OrderId id = ids[rng() % ids.size()];
        const std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 300);
        if (ref.modify(id, q)) {
          b.modify(id, Quantity{q});
        } else {
          EXPECT_THROW(b.modify(id, Quantity{q}), NotFound);
        }
        continue;
      }
      Order o;
      o.id = static_cast<OrderId>(k);
      o.side = rng() % 2 ? Side::Bid : Side::Offer;
      o.qty = Quantity{1 + static_cast<std::int64_t>(rng() % 300)};
      if (kind != 2) o.limit_px = PriceE4{991000 + 100 * static_cast<std::int64_t>(rng() % 8)};
      o.displayed = rng() % 4 != 0;
      o.ioc = kind == 3;

      const auto got = b.submit(o);
      const auto want = ref.submit(o);
      std::vector<oracle::NaiveBook::Fill> fills;
      std::int64_t filled = 0, rested = 0, cancelled = 0;
      for (const auto& e : got) {
        if (e.kind == EventKind::Fill) {
          fills.push_back({e.order_id, e.maker_id, e.px, e.qty.value});
          filled += e.qty.value;
        }
        if (e.kind == EventKind::Rest) rested += e.qty.value;
        if (e.kind == EventKind::Cancel) cancelled += e.qty.value;
      }
      ASSERT_EQ(fills, want) << "trial " << trial << " order " << k;
      EXPECT_EQ(filled + rested + cancelled, o.qty.value);
      ids.push_back(o.id);

      ASSERT_EQ(b.lbbo(), ref.lbbo());
      ASSERT_EQ(b.resting_orders(), ref.size());
      const BboPair l = b.lbbo();
      if (l.two_sided()) {
        EXPECT_LT(l.bid->px, l.offer->px);
      }
    }
    for (OrderId id : ids) {
      const auto q = ref.qty_of(id);
      EXPECT_EQ(b.contains(id), q.has_value());
      if (q) {
        EXPECT_EQ(b.resting_qty(id), Quantity{*q});
      }
    }
  }
}

} // namespace
} // namespace nms::book
