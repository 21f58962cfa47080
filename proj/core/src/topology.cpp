#include "nms/topology.hpp"

#include "nms/errors.hpp"
#include "nms/price.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace nms::sim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw ConfigError("bad " + what + " '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_count(std::string_view text, const std::string& what) {
  std::int64_t v = 0;
  if (!parse_int(text, v)) throw ConfigError("bad " + what + " '" + std::string(text) + "'");
  return v;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

} // namespace

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<ConfigLine> split_config(std::string_view text) {
  std::vector<ConfigLine> out;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    out.push_back(ConfigLine{section, line_no, std::string(line)});
  }
  return out;
}

Medium Medium::parse(std::string_view text) {
  if (text == "light") return light();
  if (text == "fiber") return fiber();
  if (text.starts_with("laser:")) {
    double us = parse_double(text.substr(6), "laser delay");
    if (us < 0) throw ConfigError("negative laser delay");
    return laser(us);
  }
  throw ConfigError("unknown medium '" + std::string(text) + "' (light, fiber or laser:<us>)");
}

std::string Medium::to_string() const {
  switch (kind) {
    case MediumKind::LightVacuum: return "light";
    case MediumKind::Fiber: return "fiber";
    case MediumKind::HybridLaser: return "laser:" + fmt_double(laser_one_way_us);
  }
  return "fiber";
}

double propagation_delay_us(const Distance& d, const Medium& m) {
  if (d.miles < 0 || (d.km && *d.km < 0)) throw DomainError("negative distance");
  switch (m.kind) {
    case MediumKind::LightVacuum: return d.miles / kLightMilesPerSecond * 1e6;
    case MediumKind::Fiber: return d.fiber_km() * kFiberUsPerKm;
    case MediumKind::HybridLaser: return d.miles == 0.0 ? 0.0 : m.laser_one_way_us;
  }
  return 0.0;
}

void SimTopology::add_site(std::string name) {
  if (name.empty()) throw ConfigError("empty site name");
  if (!has_site(name)) sites_.push_back(std::move(name));
}

bool SimTopology::has_site(std::string_view name) const {
  return std::find(sites_.begin(), sites_.end(), name) != sites_.end();
}

void SimTopology::add_link(const std::string& a, const std::string& b, Link link) {
  if (a == b) throw ConfigError("link from " + a + " to itself");
  links_[key(a, b)] = link;
}

void SimTopology::set_venue(VenueId venue, std::string site) { venue_site_[venue] = std::move(site); }
void SimTopology::set_tape(std::string tape, std::string site) { tape_site_[std::move(tape)] = std::move(site); }
void SimTopology::set_symbol_tape(SymbolId symbol, std::string tape) { symbol_tape_[symbol] = std::move(tape); }

void SimTopology::set_sip_processing_us(std::int64_t us) {
  if (us < 0) throw ConfigError("sip_processing_us must be non-negative");
  sip_processing_us_ = us;
}

const Link& SimTopology::link(const std::string& a, const std::string& b) const {
  auto it = links_.find(key(a, b));
  if (it == links_.end()) throw ConfigError("no link between " + a + " and " + b);
  return it->second;
}

std::int64_t SimTopology::delay_us(const std::string& a, const std::string& b) const {
  if (a == b) return 0;
  const Link& l = link(a, b);
  return std::llround(propagation_delay_us(l.distance, l.medium));
}

const std::string& SimTopology::venue_site(VenueId venue) const {
  auto it = venue_site_.find(venue);
  if (it == venue_site_.end()) throw ConfigError("venue " + std::to_string(venue) + " is not mapped to a site");
  return it->second;
}

const std::string& SimTopology::tape_site(SymbolId symbol) const {
  auto st = symbol_tape_.find(symbol);
  const std::string& tape = st != symbol_tape_.end() ? st->second : default_tape_;
  if (tape.empty()) throw ConfigError("symbol " + symbol.str() + " is not mapped to a tape");
  auto it = tape_site_.find(tape);
  if (it == tape_site_.end()) throw ConfigError("tape " + tape + " is not mapped to a site");
  return it->second;
}

void SimTopology::validate() const {
  auto need = [&](const std::string& site, const std::string& who) {
    if (!has_site(site)) throw ConfigError(who + " refers to unknown site '" + site + "'");
  };
  if (observer_.empty()) throw ConfigError("observer site not set");
  need(observer_, "observer");
  for (const auto& [v, s] : venue_site_) need(s, "venue " + std::to_string(v));
  for (const auto& [t, s] : tape_site_) need(s, "tape " + t);
  for (const auto& [sym, t] : symbol_tape_)
    if (!tape_site_.contains(t)) throw ConfigError("symbol " + sym.str() + " uses unknown tape " + t);
  if (!default_tape_.empty() && !tape_site_.contains(default_tape_))
    throw ConfigError("default tape " + default_tape_ + " is not mapped to a site");
  for (const auto& [k, l] : links_) {
    need(k.first, "link");
    need(k.second, "link");
    if (!(l.distance.miles > 0)) throw ConfigError("link " + k.first + "-" + k.second + " needs a positive distance");
  }
}

SimTopology SimTopology::parse(std::string_view text) {
  SimTopology t;
  struct PendingLink {
    std::string a, b;
    Distance d;
    std::optional<Medium> m;
  };
  std::vector<PendingLink> links;

  for (const auto& cl : split_config(text)) {
    const std::string where = "line " + std::to_string(cl.line_no) + ": ";
    auto tok = split_ws(cl.text);
    try {
      if (cl.section.empty()) {
        auto eq = cl.text.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value");
        std::string k(trim(std::string_view(cl.text).substr(0, eq)));
        std::string v(trim(std::string_view(cl.text).substr(eq + 1)));
        if (k == "observer") {
          t.set_observer(v);
        } else if (k == "sip_processing_us") {
          t.set_sip_processing_us(parse_count(v, k));
        } else if (k == "default_medium") {
          t.set_default_medium(Medium::parse(v));
        } else if (k == "default_tape") {
          t.set_default_tape(v);
        } else {
          throw ConfigError("unknown key '" + k + "'");
        }
      } else if (cl.section == "sites") {
        for (auto& s : tok) t.add_site(s);
      } else if (cl.section == "links") {
        if (tok.size() < 3) throw ConfigError("link needs: <site> <site> <miles> [km=<km>] [medium=<m>]");
        PendingLink pl{tok[0], tok[1], Distance{parse_double(tok[2], "miles"), {}}, {}};
        for (std::size_t i = 3; i < tok.size(); ++i) {
          if (tok[i].starts_with("km=")) {
            pl.d.km = parse_double(std::string_view(tok[i]).substr(3), "km");
          } else if (tok[i].starts_with("medium=")) {
            pl.m = Medium::parse(std::string_view(tok[i]).substr(7));
          } else {
            throw ConfigError("unknown link attribute '" + tok[i] + "'");
          }
        }
        links.push_back(std::move(pl));
      } else if (cl.section == "venues") {
        if (tok.size() != 2) throw ConfigError("venue line needs: <venue id> <site>");
        std::int64_t v = parse_count(tok[0], "venue id");
        if (v < 0 || v >= static_cast<std::int64_t>(kMaxVenues)) throw ConfigError("venue id out of range");
        t.set_venue(static_cast<VenueId>(v), tok[1]);
      } else if (cl.section == "tapes") {
        if (tok.size() != 2) throw ConfigError("tape line needs: <tape> <site>");
        t.set_tape(tok[0], tok[1]);
      } else if (cl.section == "symbols") {
        if (tok.size() != 2) throw ConfigError("symbol line needs: <symbol> <tape>");
        if (!SymbolId::valid(tok[0])) throw ConfigError("bad symbol '" + tok[0] + "'");
        t.set_symbol_tape(SymbolId::parse(tok[0]), tok[1]);
      } else {
        throw ConfigError("unknown section [" + cl.section + "]");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const DomainError& e) {
      throw ConfigError(where + e.what());
    }
  }
  for (auto& pl : links) {
    if (!(pl.d.miles >= 0)) throw ConfigError("negative distance on link " + pl.a + "-" + pl.b);
    t.add_link(pl.a, pl.b, Link{pl.d, pl.m.value_or(t.default_medium_)});
  }
  t.validate();
  return t;
}

std::string SimTopology::serialize() const {
  std::ostringstream os;
  os << "observer = " << observer_ << "\n";
  os << "sip_processing_us = " << sip_processing_us_ << "\n";
  os << "default_medium = " << default_medium_.to_string() << "\n";
  if (!default_tape_.empty()) os << "default_tape = " << default_tape_ << "\n";
  os << "\n[sites]\n";
  for (const auto& s : sites_) os << s << "\n";
  os << "\n[links]\n";
  for (const auto& [k, l] : links_) {
    os << k.first << " " << k.second << " " << fmt_double(l.distance.miles);
    if (l.distance.km) os << " km=" << fmt_double(*l.distance.km);
    os << " medium=" << l.medium.to_string() << "\n";
  }
  os << "\n[venues]\n";
  for (const auto& [v, s] : venue_site_) os << static_cast<unsigned>(v) << " " << s << "\n";
  os << "\n[tapes]\n";
  for (const auto& [t, s] : tape_site_) os << t << " " << s << "\n";
  if (!symbol_tape_.empty()) {
    os << "\n[symbols]\n";
    for (const auto& [sym, t] : symbol_tape_) os << sym.view() << " " << t << "\n";
  }
  return os.str();
}

SimTopology SimTopology::default_nms(std::int64_t sip_processing_us) {
  SimTopology t;
  for (const char* s : {"Carteret", "Mahwah", "Secaucus", "Weehawken"}) t.add_site(s);
  const Medium f = Medium::fiber();
  t.add_link("Carteret", "Mahwah", Link{Distance{34.55, 55.6}, f});
  t.add_link("Mahwah", "Secaucus", Link{Distance{21.31, 34.3}, f});
  t.add_link("Carteret", "Secaucus", Link{Distance{16.22, 26.1}, f});
  t.add_link("Secaucus", "Weehawken", Link{Distance{2.56, 4.12}, f});
  // Not tabulated; straight-line estimates from site coordinates.
  t.add_link("Carteret", "Weehawken", Link{Distance{17.04, {}}, f});
  t.add_link("Mahwah", "Weehawken", Link{Distance{22.92, {}}, f});
  t.set_venue(1, "Mahwah");
  t.set_venue(2, "Mahwah");
  t.set_venue(3, "Carteret");
  t.set_venue(4, "Secaucus");
  t.set_venue(5, "Secaucus");
  t.set_venue(6, "Weehawken");
  t.set_tape("A", "Mahwah");
  t.set_tape("B", "Mahwah");
  t.set_tape("C", "Carteret");
  t.set_default_tape("C");
  t.set_observer("Carteret");
  t.set_sip_processing_us(sip_processing_us);
  t.validate();
  return t;
}

} // namespace nms::sim
