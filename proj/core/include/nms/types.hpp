#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace nms {

// Price in units of 1e-4 USD. Cent-quantized quotes are multiples of 100,
// sub-dollar quotes multiples of 1, midpoint executions multiples of 50.
struct PriceE4 {
  std::int64_t value{0};

  constexpr auto operator<=>(const PriceE4&) const = default;

  constexpr PriceE4 operator-() const { return PriceE4{-value}; }
  friend constexpr PriceE4 operator+(PriceE4 a, PriceE4 b) { return PriceE4{a.value + b.value}; }
  friend constexpr PriceE4 operator-(PriceE4 a, PriceE4 b) { return PriceE4{a.value - b.value}; }
};

inline constexpr std::int64_t kPriceScale = 10'000;
inline constexpr PriceE4 kOneCent{100};

constexpr PriceE4 abs(PriceE4 p) { return p.value < 0 ? -p : p; }
constexpr int sign(PriceE4 p) { return (p.value > 0) - (p.value < 0); }

// Observer clock: microseconds since session midnight.
struct TimeUs {
  std::int64_t value{0};

  constexpr auto operator<=>(const TimeUs&) const = default;
};

inline constexpr std::int64_t kUsPerSecond = 1'000'000;
inline constexpr std::int64_t kUsPerMinute = 60 * kUsPerSecond;
inline constexpr std::int64_t kUsPerDay = 86'400 * kUsPerSecond;

// Signed duration b - a in microseconds.
constexpr std::int64_t operator-(TimeUs b, TimeUs a) { return b.value - a.value; }

struct Quantity {
  std::int64_t value{0};

  constexpr auto operator<=>(const Quantity&) const = default;
};

enum class Side : std::uint8_t { Bid = 0, Offer = 1 };

constexpr Side opposite(Side s) { return s == Side::Bid ? Side::Offer : Side::Bid; }
constexpr std::size_t index(Side s) { return static_cast<std::size_t>(s); }
std::string_view to_string(Side s);

using VenueId = std::uint8_t;
inline constexpr std::size_t kMaxVenues = 256;

// Either the consolidated SIP feed or one venue's direct feed.
class FeedId {
public:
  constexpr FeedId() = default;

  static constexpr FeedId sip() { return FeedId{true, 0}; }
  static constexpr FeedId direct(VenueId venue) { return FeedId{false, venue}; }

  [[nodiscard]] constexpr bool is_sip() const { return sip_; }
  [[nodiscard]] constexpr VenueId venue() const { return venue_; }

  constexpr auto operator<=>(const FeedId&) const = default;

  // "SIP" or "D.<venue>"
  [[nodiscard]] std::string to_string() const;
  static FeedId parse(std::string_view text);

private:
  constexpr FeedId(bool sip, VenueId venue) : sip_(sip), venue_(venue) {}

  bool sip_{true};
  VenueId venue_{0};
};

// Ticker, 1-8 chars of [A-Z0-9.], stored inline and zero padded.
class SymbolId {
public:
  static constexpr std::size_t kMaxLength = 8;

  constexpr SymbolId() = default;

  // Throws ValidationError on an invalid ticker.
  static SymbolId parse(std::string_view text);
  static bool valid(std::string_view text) noexcept;

  [[nodiscard]] std::string_view view() const noexcept {
    std::size_t n = 0;
    while (n < kMaxLength && chars_[n] != '\0') ++n;
    return {chars_.data(), n};
  }
  [[nodiscard]] std::string str() const { return std::string(view()); }
  [[nodiscard]] bool empty() const noexcept { return chars_[0] == '\0'; }

  [[nodiscard]] std::uint64_t key() const noexcept {
    std::uint64_t k = 0;
    for (char c : chars_) k = (k << 8) | static_cast<unsigned char>(c);
    return k;
  }

  friend bool operator==(const SymbolId& a, const SymbolId& b) noexcept { return a.chars_ == b.chars_; }
  friend auto operator<=>(const SymbolId& a, const SymbolId& b) noexcept { return a.key() <=> b.key(); }

private:
  std::array<char, kMaxLength> chars_{};
};

struct SymbolHash {
  std::size_t operator()(const SymbolId& s) const noexcept {
    std::uint64_t k = s.key();
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

// One side of a quote or a trade print: price and share count.
// In quote events a zero quantity withdraws that side.
struct Level {
  PriceE4 px{};
  Quantity qty{};

  constexpr bool operator==(const Level&) const = default;
};

} // namespace nms

template <>
struct std::hash<nms::SymbolId> : nms::SymbolHash {};
