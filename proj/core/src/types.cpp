#include "nms/types.hpp"

#include "nms/errors.hpp"
#include "nms/price.hpp"

namespace nms {

std::string_view to_string(Side s) { return s == Side::Bid ? "bid" : "offer"; }

std::string FeedId::to_string() const {
  if (sip_) return "SIP";
  return "D." + std::to_string(static_cast<unsigned>(venue_));
}

FeedId FeedId::parse(std::string_view text) {
  if (text == "SIP") return sip();
  if (text.size() > 2 && text[0] == 'D' && text[1] == '.') {
    std::int64_t v = 0;
    if (parse_int(text.substr(2), v) && v >= 0 && v < static_cast<std::int64_t>(kMaxVenues))
      return direct(static_cast<VenueId>(v));
  }
  throw ParseError("bad feed '" + std::string(text) + "' (expected SIP or D.<venue>)");
}

bool SymbolId::valid(std::string_view text) noexcept {
  if (text.empty() || text.size() > kMaxLength) return false;
  for (char c : text) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.';
    if (!ok) return false;
  }
  return true;
}

SymbolId SymbolId::parse(std::string_view text) {
  if (!valid(text)) throw ValidationError("bad symbol '" + std::string(text) + "'");
  SymbolId s;
  for (std::size_t i = 0; i < text.size(); ++i) s.chars_[i] = text[i];
  return s;
}

} // namespace nms
