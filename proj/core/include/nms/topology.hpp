#pragma once

#include "nms/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nms::sim {

enum class MediumKind : std::uint8_t { LightVacuum, Fiber, HybridLaser };

struct Medium {
  MediumKind kind = MediumKind::Fiber;
  // Fixed one-way delay of a hybrid laser link.
  double laser_one_way_us = 0.0;

  static Medium light() { return {MediumKind::LightVacuum, 0.0}; }
  static Medium fiber() { return {MediumKind::Fiber, 0.0}; }
  static Medium laser(double one_way_us) { return {MediumKind::HybridLaser, one_way_us}; }

  // "light", "fiber" or "laser:<us>".
  static Medium parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;

  bool operator==(const Medium&) const = default;
};

inline constexpr double kLightMilesPerSecond = 186'000.0;
inline constexpr double kFiberUsPerKm = 4.9;
inline constexpr double kKmPerMile = 1.609344;

// Straight-line distance. A tabulated kilometre figure, when present, is used
// for fiber delays instead of converting miles.
struct Distance {
  double miles = 0.0;
  std::optional<double> km;

  [[nodiscard]] double fiber_km() const { return km.value_or(miles * kKmPerMile); }
};

// One-way delay in microseconds. Throws DomainError for negative distance.
double propagation_delay_us(const Distance& d, const Medium& m);
inline double propagation_delay_us(double miles, const Medium& m) { return propagation_delay_us(Distance{miles, {}}, m); }
inline double round_trip_us(const Distance& d, const Medium& m) { return 2.0 * propagation_delay_us(d, m); }

struct Link {
  Distance distance;
  Medium medium;
};

// Sites, links and where every venue, SIP tape and the observer live.
class SimTopology {
public:
  void add_site(std::string name);
  void add_link(const std::string& a, const std::string& b, Link link);
  void set_venue(VenueId venue, std::string site);
  void set_tape(std::string tape, std::string site);
  void set_symbol_tape(SymbolId symbol, std::string tape);
  void set_default_tape(std::string tape) { default_tape_ = std::move(tape); }
  void set_observer(std::string site) { observer_ = std::move(site); }
  void set_sip_processing_us(std::int64_t us);
  void set_default_medium(Medium m) { default_medium_ = m; }

  [[nodiscard]] const std::vector<std::string>& sites() const { return sites_; }
  [[nodiscard]] const std::map<VenueId, std::string>& venues() const { return venue_site_; }
  [[nodiscard]] const std::string& observer() const { return observer_; }
  [[nodiscard]] std::int64_t sip_processing_us() const { return sip_processing_us_; }
  [[nodiscard]] bool has_site(std::string_view name) const;

  // Link between two distinct sites; ConfigError when undefined.
  [[nodiscard]] const Link& link(const std::string& a, const std::string& b) const;
  // Rounded one-way delay; 0 within a site.
  [[nodiscard]] std::int64_t delay_us(const std::string& a, const std::string& b) const;

  // ConfigError when the venue or symbol has no mapping.
  [[nodiscard]] const std::string& venue_site(VenueId venue) const;
  [[nodiscard]] const std::string& tape_site(SymbolId symbol) const;

  // Checks every mapping refers to a defined site and distances are positive.
  void validate() const;

  // Sectioned key=value text; see README for the format.
  static SimTopology parse(std::string_view text);
  [[nodiscard]] std::string serialize() const;

  // Carteret, Mahwah, Secaucus and Weehawken with fiber links, tapes A and B
  // at Mahwah, tape C at Carteret and the observer at Carteret. Venues:
  // 1 NYSE, 2 Arca (Mahwah); 3 Nasdaq (Carteret); 4 BZX, 5 EDGX (Secaucus);
  // 6 IEX (Weehawken). Symbols default to tape C.
  static SimTopology default_nms(std::int64_t sip_processing_us = 0);

private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }

  std::vector<std::string> sites_;
  std::map<std::pair<std::string, std::string>, Link> links_;
  std::map<VenueId, std::string> venue_site_;
  std::map<std::string, std::string> tape_site_;
  std::map<SymbolId, std::string> symbol_tape_;
  std::string default_tape_;
  std::string observer_;
  std::int64_t sip_processing_us_ = 0;
  Medium default_medium_ = Medium::fiber();
};

// Splits sectioned key=value text into (section, line_no, line) entries with
// comments and blank lines removed.
struct ConfigLine {
  std::string section;
  std::size_t line_no = 0;
  std::string text;
};
std::vector<ConfigLine> split_config(std::string_view text);
std::vector<std::string> split_ws(std::string_view text);

} // namespace nms::sim
