#pragma once

#include "nms/types.hpp"

#include <optional>

namespace nms {

// Best bid and offer of one view. Locked and crossed states are representable.
struct BboPair {
  std::optional<Level> bid;
  std::optional<Level> offer;

  [[nodiscard]] const std::optional<Level>& side(Side s) const { return s == Side::Bid ? bid : offer; }
  [[nodiscard]] std::optional<Level>& side(Side s) { return s == Side::Bid ? bid : offer; }

  [[nodiscard]] bool two_sided() const { return bid.has_value() && offer.has_value(); }
  [[nodiscard]] bool locked() const { return two_sided() && bid->px == offer->px; }
  [[nodiscard]] bool crossed() const { return two_sided() && bid->px > offer->px; }

  bool operator==(const BboPair&) const = default;
};

} // namespace nms
