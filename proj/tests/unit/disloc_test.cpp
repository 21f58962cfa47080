#include "generators.hpp"
#include "oracles.hpp"

#include "nms/disloc.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nms::disloc {
namespace {

using consolidate::DeltaSample;

const SymbolId kSym = SymbolId::parse("TEST");

DeltaSample at(std::int64_t ts, std::optional<std::int64_t> dp, Side side = Side::Offer) {
  DeltaSample s;
  s.ts = TimeUs{ts};
  s.symbol = kSym;
  s.side = side;
  if (dp) s.dp = PriceE4{*dp};
  return s;
}

TEST(Detect, SingleRun) {
  const std::vector<DeltaSample> d = {at(0, 0), at(10, 100), at(20, 0)};
  const auto segs = detect(d, Side::Offer);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].start, TimeUs{10});
  EXPECT_EQ(segs[0].end, TimeUs{20});
  EXPECT_EQ(segs[0].duration_us(), 10);
  EXPECT_EQ(segs[0].direction, 1);
  EXPECT_EQ(segs[0].min_dp, PriceE4{100});
  EXPECT_EQ(segs[0].max_dp, PriceE4{100});
  EXPECT_FALSE(segs[0].truncated);
}

TEST(Detect, SignFlipSplitsSegments) {
  const std::vector<DeltaSample> d = {at(0, 0), at(10, -100), at(15, -300), at(25, 100), at(30, 0)};
  const auto segs = detect(d, Side::Offer);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].start, TimeUs{10});
  EXPECT_EQ(segs[0].end, TimeUs{25});
  EXPECT_EQ(segs[0].direction, -1);
  EXPECT_EQ(segs[0].min_dp, PriceE4{-300});
  EXPECT_EQ(segs[0].max_dp, PriceE4{-100});
  EXPECT_EQ(segs[0].max_mag(), PriceE4{300});
  EXPECT_EQ(segs[0].min_mag(), PriceE4{100});
  EXPECT_EQ(segs[1].start, TimeUs{25});
  EXPECT_EQ(segs[1].end, TimeUs{30});
  EXPECT_EQ(segs[1].direction, 1);
  EXPECT_TRUE(segs[1].continues);
  EXPECT_EQ(segs, oracle::scan_segments(d, Side::Offer, TiePolicy::Retain, TimeUs{30}));

  const auto groups = group_dislocations(segs);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].start, TimeUs{10});
  EXPECT_EQ(groups[0].end, TimeUs{30});
  EXPECT_EQ(groups[0].segments.size(), 2u);
}

TEST(Detect, OfferRunWithSixCentPeak) {
  const std::int64_t base = 35335000000;
  const std::vector<DeltaSample> d = {
      at(base + 396800, 0),    at(base + 396886, -300), at(base + 397100, -400), at(base + 397644, -600),
      at(base + 398027, -300), at(base + 398300, -200), at(base + 398550, -300), at(base + 398749, 0),
  };
  const auto segs = detect(d, Side::Offer);
  ASSERT_EQ(segs.size(), 1u);
  const auto& s = segs[0];
  EXPECT_EQ(s.duration_us(), 1863);
  EXPECT_EQ(s.max_mag(), PriceE4{600});
  EXPECT_TRUE(s.flags.actionable);
  EXPECT_TRUE(s.flags.large);
  EXPECT_TRUE(s.flags.large_by_max);
  EXPECT_EQ(base + 398027 - (base + 397644), 383);
}

TEST(Detect, UndefinedClosesRun) {
  const std::vector<DeltaSample> d = {at(5, 200), at(9, std::nullopt), at(12, 200), at(20, 0)};
  const auto segs = detect(d, Side::Offer);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].end, TimeUs{9});
  EXPECT_EQ(segs[1].start, TimeUs{12});
  EXPECT_FALSE(segs[1].continues);
}

TEST(Detect, OpenRunIsTruncatedAtEnd) {
  const std::vector<DeltaSample> d = {at(5, 200), at(9, 300)};
  auto segs = detect(d, Side::Offer);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_TRUE(segs[0].truncated);
  EXPECT_EQ(segs[0].end, TimeUs{9});
  segs = detect(d, Side::Offer, TiePolicy::Retain, {}, TimeUs{50});
  EXPECT_EQ(segs[0].end, TimeUs{50});
}

TEST(Detect, SameMicrosecondRunIsZeroDurationUnderRetain) {
  const std::vector<DeltaSample> d = {at(0, 0), at(7, 100), at(7, 0), at(9, 0)};
  const auto kept = detect(d, Side::Offer, TiePolicy::Retain);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].duration_us(), 0);
  EXPECT_TRUE(detect(d, Side::Offer, TiePolicy::Coalesce).empty());
}

TEST(Detect, SidesAreIndependent) {
  const std::vector<DeltaSample> d = {at(1, 100, Side::Bid), at(2, -100, Side::Offer), at(3, 0, Side::Bid),
                                      at(4, 0, Side::Offer)};
  EXPECT_EQ(detect(d, Side::Bid).size(), 1u);
  EXPECT_EQ(detect(d, Side::Offer).size(), 1u);
  EXPECT_EQ(detect(d, Side::Offer)[0].side, Side::Offer);
}

TEST(Classify, ThresholdsAreStrict) {
  DislocationSegment s;
  s.direction = 1;
  s.start = TimeUs{0};
  s.end = TimeUs{1863};
  s.min_dp = PriceE4{100};
  s.max_dp = PriceE4{600};
  auto f = classify(s);
  EXPECT_TRUE(f.actionable);
  EXPECT_FALSE(f.large);
  EXPECT_TRUE(f.large_by_max);

  s.end = TimeUs{545};
  EXPECT_FALSE(classify(s).actionable);
  s.end = TimeUs{546};
  s.min_dp = PriceE4{200};
  f = classify(s);
  EXPECT_TRUE(f.actionable);
  EXPECT_TRUE(f.large);
  EXPECT_TRUE(classify(s, Thresholds{100, 50}).actionable);
  EXPECT_FALSE(classify(s, Thresholds{1000, 500}).large);
}

TEST(Classify, NegativeDirectionMagnitudes) {
  DislocationSegment s;
  s.direction = -1;
  s.min_dp = PriceE4{-600};
  s.max_dp = PriceE4{-200};
  EXPECT_EQ(s.min_mag(), PriceE4{200});
  EXPECT_EQ(s.max_mag(), PriceE4{600});
  EXPECT_EQ(s.mean_mag_twice(), 800);
}

TEST(Detector, RoutesBySymbolAndSide) {
  Detector det;
  DeltaSample a = at(1, 100, Side::Bid);
  DeltaSample b = at(2, 100, Side::Bid);
  b.symbol = SymbolId::parse("OTHER");
  det.push(a);
  det.push(b);
  det.finish(TimeUs{10});
  auto segs = det.take();
  sort_segments(segs);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].symbol, SymbolId::parse("OTHER"));
  EXPECT_TRUE(segs[0].truncated);
}

void check_invariants(const std::vector<DislocationSegment>& segs, const std::vector<DeltaSample>& d, Side side,
                      TiePolicy policy) {
  for (const auto& s : segs) {
    EXPECT_LE(s.start, s.end);
    EXPECT_LE(s.min_dp, s.max_dp);
    EXPECT_TRUE(s.direction == 1 || s.direction == -1);
    EXPECT_GT(s.min_mag().value, 0);
    if (policy != TiePolicy::Retain) continue;
    for (const auto& x : d) {
      if (x.side != side || x.ts <= s.start || x.ts >= s.end) continue;
      ASSERT_TRUE(x.dp);
      EXPECT_EQ(sign(*x.dp), s.direction);
    }
  }
  for (const auto& g : group_dislocations(segs)) {
    for (std::size_t k = 1; k < g.segments.size(); ++k) {
      EXPECT_EQ(g.segments[k - 1].end, g.segments[k].start);
      EXPECT_EQ(g.segments[k - 1].direction, -g.segments[k].direction);
    }
    EXPECT_EQ(g.segments.front().start, g.start);
    EXPECT_EQ(g.segments.back().end, g.end);
  }
}

TEST(DetectProperty, MatchesPerMicrosecondScan) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t horizon = gen::uniform(rng, 10, 20000);
    const auto d = gen::delta_stream(rng, Side::Bid, horizon, 200);
    for (auto policy : {TiePolicy::Coalesce, TiePolicy::Retain}) {
      const auto got = detect(d, Side::Bid, policy, {}, TimeUs{horizon});
      ASSERT_EQ(got, oracle::scan_segments(d, Side::Bid, policy, TimeUs{horizon})) << "trial " << trial;
      check_invariants(got, d, Side::Bid, policy);
    }
  }
}

TEST(DetectProperty, CoalescedDurationsSumToDislocatedTime) {
  std::mt19937_64 rng(405);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t horizon = gen::uniform(rng, 10, 5000);
    const auto d = gen::delta_stream(rng, Side::Offer, horizon, 100);
    std::int64_t total = 0;
    for (const auto& s : detect(d, Side::Offer, TiePolicy::Coalesce, {}, TimeUs{horizon})) total += s.duration_us();
    EXPECT_EQ(total, oracle::dislocated_us(d, Side::Offer, TimeUs{horizon}));
  }
}

} // namespace
} // namespace nms::disloc
