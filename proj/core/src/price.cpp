#include "nms/price.hpp"

#include "nms/errors.hpp"

#include <charconv>
#include <limits>

namespace nms {

bool parse_int(std::string_view text, std::int64_t& out) noexcept {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

PriceE4 price_from_decimal(std::string_view text) {
  const std::string quoted = "'" + std::string(text) + "'";
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw ParseError("empty price " + quoted);
  if (dot != std::string_view::npos && frac.empty()) throw ParseError("dangling decimal point in " + quoted);
  if (frac.size() > 4) throw ParseError("more than 4 fraction digits in " + quoted);
  for (char c : whole)
    if (c < '0' || c > '9') throw ParseError("bad price " + quoted);
  for (char c : frac)
    if (c < '0' || c > '9') throw ParseError("bad price " + quoted);

  std::int64_t units = 0;
  if (!whole.empty() && !parse_int(whole, units)) throw ParseError("price out of range " + quoted);
  if (units > std::numeric_limits<std::int64_t>::max() / kPriceScale) throw ParseError("price out of range " + quoted);
  units *= kPriceScale;

  std::int64_t f = 0;
  for (std::size_t i = 0; i < 4; ++i) f = f * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  units += f;
  return PriceE4{negative ? -units : units};
}

std::string price_to_decimal(PriceE4 p) {
  // INT64_MIN cannot be negated; it is far outside any real price or amount.
  std::uint64_t mag = p.value < 0 ? 0ULL - static_cast<std::uint64_t>(p.value) : static_cast<std::uint64_t>(p.value);
  std::string out;
  if (p.value < 0) out.push_back('-');
  out += std::to_string(mag / kPriceScale);
  char frac[5] = {};
  std::uint64_t f = mag % kPriceScale;
  for (int i = 3; i >= 0; --i) {
    frac[i] = static_cast<char>('0' + f % 10);
    f /= 10;
  }
  int keep = 4;
  while (keep > 2 && frac[keep - 1] == '0') --keep;
  out.push_back('.');
  out.append(frac, static_cast<std::size_t>(keep));
  return out;
}

} // namespace nms
