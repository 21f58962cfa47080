#include "nms/errors.hpp"
#include "nms/topology.hpp"

#include <gtest/gtest.h>

namespace nms::sim {
namespace {

struct Pair {
  Distance d;
  double light_one, light_two, fiber_one, fiber_two;
};

const Pair kPairs[] = {
    {{34.55, 55.6}, 185.75, 371.5, 272.44, 544.88},
    {{21.31, 34.3}, 114.57, 229.14, 168.07, 336.14},
    {{16.22, 26.1}, 87.2, 174.4, 127.89, 255.78},
    {{2.56, 4.12}, 13.76, 27.52, 20.19, 40.38},
};

TEST(PropagationDelay, LightAndFiberCells) {
  for (const auto& p : kPairs) {
    EXPECT_NEAR(propagation_delay_us(p.d, Medium::light()), p.light_one, 0.01) << p.d.miles;
    EXPECT_NEAR(round_trip_us(p.d, Medium::light()), p.light_two, 0.01) << p.d.miles;
    EXPECT_NEAR(propagation_delay_us(p.d, Medium::fiber()), p.fiber_one, 0.01) << p.d.miles;
    EXPECT_NEAR(round_trip_us(p.d, Medium::fiber()), p.fiber_two, 0.01) << p.d.miles;
  }
}

TEST(PropagationDelay, HybridLaserCells) {
  const Distance cs{16.22, 26.1};
  EXPECT_NEAR(propagation_delay_us(cs, Medium::laser(94.5)), 94.5, 0.01);
  EXPECT_NEAR(round_trip_us(cs, Medium::laser(94.5)), 189.0, 0.01);
}

TEST(PropagationDelay, ExactConversionWithoutTabulatedKm) {
  EXPECT_NEAR(propagation_delay_us(10.0, Medium::fiber()), 10.0 * 1.609344 * 4.9, 1e-9);
  EXPECT_NEAR(propagation_delay_us(186.0, Medium::light()), 1000.0, 1e-9);
}

TEST(PropagationDelay, ZeroAndNegativeDistance) {
  for (const auto& m : {Medium::light(), Medium::fiber(), Medium::laser(94.5)})
    EXPECT_EQ(propagation_delay_us(0.0, m), 0.0);
  EXPECT_THROW(propagation_delay_us(-1.0, Medium::fiber()), DomainError);
  EXPECT_THROW(propagation_delay_us(Distance{1.0, -2.0}, Medium::fiber()), DomainError);
}

TEST(Medium, ParseAndPrint) {
  EXPECT_EQ(Medium::parse("light"), Medium::light());
  EXPECT_EQ(Medium::parse("fiber"), Medium::fiber());
  EXPECT_EQ(Medium::parse("laser:94.5"), Medium::laser(94.5));
  EXPECT_EQ(Medium::parse(Medium::laser(94.5).to_string()), Medium::laser(94.5));
  EXPECT_THROW(Medium::parse("copper"), ConfigError);
  EXPECT_THROW(Medium::parse("laser:-1"), ConfigError);
  EXPECT_THROW(Medium::parse("laser:x"), ConfigError);
}

TEST(Topology, DefaultLayout) {
  const auto t = SimTopology::default_nms();
  EXPECT_EQ(t.observer(), "Carteret");
  EXPECT_EQ(t.venue_site(1), "Mahwah");
  EXPECT_EQ(t.venue_site(3), "Carteret");
  EXPECT_EQ(t.venue_site(5), "Secaucus");
  EXPECT_EQ(t.venue_site(6), "Weehawken");
  EXPECT_EQ(t.tape_site(SymbolId::parse("AAPL")), "Carteret");
  EXPECT_EQ(t.delay_us("Carteret", "Mahwah"), 272);
  EXPECT_EQ(t.delay_us("Mahwah", "Carteret"), 272);
  EXPECT_EQ(t.delay_us("Secaucus", "Secaucus"), 0);
  EXPECT_EQ(t.sip_processing_us(), 0);
  EXPECT_THROW((void)t.venue_site(9), ConfigError);
}

TEST(Topology, SerializeRoundTrip) {
  auto t = SimTopology::default_nms(250);
  t.set_symbol_tape(SymbolId::parse("IBM"), "A");
  const auto back = SimTopology::parse(t.serialize());
  EXPECT_EQ(back.serialize(), t.serialize());
  EXPECT_EQ(back.tape_site(SymbolId::parse("IBM")), "Mahwah");
  EXPECT_EQ(back.sip_processing_us(), 250);
  EXPECT_EQ(back.delay_us("Carteret", "Secaucus"), 128);
}

TEST(Topology, ParseCustom) {
  const auto t = SimTopology::parse(R"(
observer = X
default_tape = T
sip_processing_us = 5   # trailing comment
[sites]
X Y
[links]
X Y 16.22 km=26.1 medium=laser:94.5
[venues]
1 X
2 Y
[tapes]
T Y
)");
  EXPECT_EQ(t.delay_us("X", "Y"), 95);
  EXPECT_EQ(t.tape_site(SymbolId::parse("ABC")), "Y");
}

TEST(Topology, ParseErrors) {
  const char* bad[] = {
      "observer = Z\n[sites]\nX\n",
      "observer = X\n[sites]\nX Y\n[links]\nX Y\n",
      "observer = X\n[sites]\nX Y\n[links]\nX Y -3\n",
      "observer = X\n[sites]\nX\n[venues]\n1 Nowhere\n",
      "observer = X\n[sites]\nX\n[venues]\n256 X\n",
      "observer = X\n[bogus]\nfoo\n",
      "observer = X\nsip_processing_us = -1\n[sites]\nX\n",
      "unknown = 1\n",
      "observer = X\n[sites\nX\n",
      "observer = X\n[sites]\nX Y\n[links]\nX X 1\n",
  };
  for (const char* text : bad) EXPECT_THROW(SimTopology::parse(text), ConfigError) << text;
}

} // namespace
} // namespace nms::sim
