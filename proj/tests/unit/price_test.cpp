#include "nms/errors.hpp"
#include "nms/price.hpp"
#include "nms/types.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nms {
namespace {

TEST(Price, ParsesExactDecimals) {
  EXPECT_EQ(price_from_decimal("99.13"), PriceE4{991300});
  EXPECT_EQ(price_from_decimal("99.135"), PriceE4{991350});
  EXPECT_EQ(price_from_decimal("0.0001"), PriceE4{1});
  EXPECT_EQ(price_from_decimal("-3"), PriceE4{-30000});
  EXPECT_EQ(price_from_decimal(".5"), PriceE4{5000});
  EXPECT_EQ(price_from_decimal("+12"), PriceE4{120000});
}

TEST(Price, RejectsLossyOrMalformedText) {
  EXPECT_THROW(price_from_decimal("99.13001"), ParseError);
  EXPECT_THROW(price_from_decimal("1e5"), ParseError);
  EXPECT_THROW(price_from_decimal(""), ParseError);
  EXPECT_THROW(price_from_decimal("12."), ParseError);
  EXPECT_THROW(price_from_decimal("1,5"), ParseError);
  EXPECT_THROW(price_from_decimal("99999999999999999999"), ParseError);
}

TEST(Price, FormatsWithoutExponent) {
  EXPECT_EQ(price_to_decimal(PriceE4{991300}), "99.13");
  EXPECT_EQ(price_to_decimal(PriceE4{991350}), "99.135");
  EXPECT_EQ(price_to_decimal(PriceE4{1}), "0.0001");
  EXPECT_EQ(price_to_decimal(PriceE4{-30000}), "-3.00");
  EXPECT_EQ(price_to_decimal(PriceE4{0}), "0.00");
  EXPECT_EQ(money_to_decimal(1'602'139'229'500'000LL), "160213922950.00");
}

TEST(Price, RoundTripsRandomValues) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const auto v = static_cast<std::int64_t>(rng() % 2'000'000'000'000ULL) - 1'000'000'000'000LL;
    EXPECT_EQ(price_from_decimal(price_to_decimal(PriceE4{v})), PriceE4{v});
  }
}

TEST(Price, ParseIntIsStrict) {
  std::int64_t v = 0;
  EXPECT_TRUE(parse_int("-42", v));
  EXPECT_EQ(v, -42);
  EXPECT_FALSE(parse_int("", v));
  EXPECT_FALSE(parse_int("4x", v));
  EXPECT_FALSE(parse_int(" 4", v));
  EXPECT_FALSE(parse_int("99999999999999999999", v));
}

TEST(Types, FeedIdParsesAndPrints) {
  EXPECT_EQ(FeedId::parse("SIP"), FeedId::sip());
  EXPECT_EQ(FeedId::parse("D.5"), FeedId::direct(5));
  EXPECT_EQ(FeedId::direct(12).to_string(), "D.12");
  EXPECT_THROW(FeedId::parse("D."), ParseError);
  EXPECT_THROW(FeedId::parse("D.256"), ParseError);
  EXPECT_THROW(FeedId::parse("sip"), ParseError);
}

TEST(Types, SymbolIdValidatesAndOrders) {
  EXPECT_EQ(SymbolId::parse("BRK.B").view(), "BRK.B");
  EXPECT_THROW(SymbolId::parse("aapl"), ValidationError);
  EXPECT_THROW(SymbolId::parse("TOOLONGXX"), ValidationError);
  EXPECT_THROW(SymbolId::parse(""), ValidationError);
  EXPECT_LT(SymbolId::parse("AAPL"), SymbolId::parse("AAPLX"));
  EXPECT_LT(SymbolId::parse("AA"), SymbolId::parse("AB"));
}

} // namespace
} // namespace nms
