#pragma once

#include "nms/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace nms {

// Exact decimal -> e4 conversion. Accepts an optional sign, digits and at
// most four fraction digits. Anything that would lose precision throws
// ParseError.
PriceE4 price_from_decimal(std::string_view text);

// Exact e4 -> decimal. Always at least two fraction digits ("99.13",
// "99.135", "0.0001", "-3.00"); never scientific notation.
std::string price_to_decimal(PriceE4 p);

// Money amounts (ROC, traded value) carry the same 1e-4 dollar unit.
inline std::string money_to_decimal(std::int64_t e4) { return price_to_decimal(PriceE4{e4}); }

// Parses a plain base-10 integer with an optional leading '-'.
// Returns false on anything else (empty, junk, overflow).
bool parse_int(std::string_view text, std::int64_t& out) noexcept;

} // namespace nms
