#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace aam::astro {

namespace constants {
inline constexpr double c = 2.99792458e10;       // cm/s
inline constexpr double G = 6.674e-8;            // cm^3/(g s^2)
inline constexpr double hbar = 1.0546e-27;       // erg s
inline constexpr double m_n = 1.6749e-24;        // g
inline constexpr double M_sun = 1.989e33;        // g
inline constexpr double R_sun = 6.957e10;        // cm
inline constexpr double GeV = 1.6022e-3;         // erg
inline constexpr double MeV = 1e-3 * GeV;        // erg
inline constexpr double julian_year = 365.25 * 86400.0;  // s
inline constexpr double light_year = c * julian_year;    // cm
}  // namespace constants

/// Numerator 4 c^2 of the length scale, in cm^2/s^2.
inline constexpr double kLengthScaleNumerator = 4.0 * constants::c * constants::c;

/// The quoted order of magnitude for the quark commutator, cm/s^2.
inline constexpr double kQuarkReferenceCms2 = 1e36;

struct CatalogError : std::runtime_error {
  CatalogError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

inline double surface_gravity(double mass_g, double radius_cm) {
  if (!(mass_g > 0.0) || !(radius_cm > 0.0) || !std::isfinite(mass_g) || !std::isfinite(radius_cm))
    throw std::invalid_argument("mass and radius must be positive");
  return constants::G * mass_g / (radius_cm * radius_cm);
}

/// x_a = 4c^2 / (|1 + mu_a| a), given |1 + mu_a| directly. nullopt is the
/// infinite scale of a vanishing coupling.
inline std::optional<double> length_scale_abs(double a_cms2, double one_plus_mu_abs) {
  if (!(a_cms2 > 0.0) || !std::isfinite(a_cms2)) throw std::invalid_argument("acceleration must be positive");
  if (!(one_plus_mu_abs >= 0.0) || !std::isfinite(one_plus_mu_abs))
    throw std::invalid_argument("|1 + mu_a| must be a nonnegative number");
  if (one_plus_mu_abs == 0.0) return std::nullopt;
  return kLengthScaleNumerator / (one_plus_mu_abs * a_cms2);
}

inline std::optional<double> length_scale(double a_cms2, double mu_a) {
  if (!std::isfinite(mu_a)) throw std::invalid_argument("mu_a must be finite");
  return length_scale_abs(a_cms2, std::abs(1.0 + mu_a));
}

inline double cm_to_light_years(double cm) { return cm / constants::light_year; }

struct QuarkEstimate {
  double force_gev_per_cm = 0.0;
  double quark_mass_mev = 0.0;
  double force_dyn = 0.0;
  double quark_mass_g = 0.0;
  double value_cms2 = 0.0;
  double reference_cms2 = kQuarkReferenceCms2;
  std::vector<std::string> chain;

  /// log10(value / reference); reported, never asserted.
  [[nodiscard]] double decades_from_reference() const { return std::log10(value_cms2 / reference_cms2); }
};

/// (2/3) F / m_q with F in GeV/cm and m_q in MeV/c^2, converted to cgs.
inline QuarkEstimate quark_commutator_estimate(double force_gev_per_cm, double quark_mass_mev) {
  if (!(force_gev_per_cm > 0.0) || !(quark_mass_mev > 0.0))
    throw std::invalid_argument("force and quark mass must be positive");
  QuarkEstimate q;
  q.force_gev_per_cm = force_gev_per_cm;
  q.quark_mass_mev = quark_mass_mev;
  q.force_dyn = force_gev_per_cm * constants::GeV;
  q.quark_mass_g = quark_mass_mev * constants::MeV / (constants::c * constants::c);
  q.value_cms2 = (2.0 / 3.0) * q.force_dyn / q.quark_mass_g;
  char buf[256];
  std::snprintf(buf, sizeof buf, "F = %.6g GeV/cm x %.6g erg/GeV = %.6g dyn", force_gev_per_cm, constants::GeV,
                q.force_dyn);
  q.chain.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "m_q = %.6g MeV x %.6g erg/MeV / c^2 (%.9g cm^2/s^2) = %.6g g", quark_mass_mev,
                constants::MeV, constants::c * constants::c, q.quark_mass_g);
  q.chain.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "(2/3) F / m_q = %.6g cm/s^2", q.value_cms2);
  q.chain.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "reference value %.6g cm/s^2, ratio %.6g", q.reference_cms2,
                q.value_cms2 / q.reference_cms2);
  q.chain.emplace_back(buf);
  return q;
}

struct Body {
  std::string name;
  double mass_g = 0.0;
  double radius_cm = 0.0;
};

struct ScalesRow {
  std::string name;
  double surface_gravity = 0.0;  // cm/s^2
  std::optional<double> x_a_cm;  // nullopt: infinite
  std::optional<double> x_a_ly;
};

inline std::vector<Body> default_catalog() {
  return {{"Sun", constants::M_sun, constants::R_sun}, {"NeutronStar", 1.5 * constants::M_sun, 1e6}};
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_positive(const std::string& text, int line, const char* column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw CatalogError(line, std::string("cannot parse ") + column + " '" + text + "'");
  }
  if (used != text.size()) throw CatalogError(line, std::string("cannot parse ") + column + " '" + text + "'");
  if (!(v > 0.0) || !std::isfinite(v)) throw CatalogError(line, std::string(column) + " must be positive");
  return v;
}

}  // namespace detail

/// Reads `name,mass_g,radius_cm` rows after a required header. Blank lines
/// are skipped.
inline std::vector<Body> read_catalog(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::vector<Body> bodies;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (!have_header) {
      if (fields != std::vector<std::string>{"name", "mass_g", "radius_cm"})
        throw CatalogError(lineno, "expected header 'name,mass_g,radius_cm'");
      have_header = true;
      continue;
    }
    if (fields.size() != 3) throw CatalogError(lineno, "expected 3 fields, found " + std::to_string(fields.size()));
    if (fields[0].empty()) throw CatalogError(lineno, "empty name");
    bodies.push_back({fields[0], detail::parse_positive(fields[1], lineno, "mass_g"),
                      detail::parse_positive(fields[2], lineno, "radius_cm")});
  }
  if (!have_header) throw CatalogError(lineno == 0 ? 1 : lineno, "missing header 'name,mass_g,radius_cm'");
  return bodies;
}

inline std::vector<Body> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog '" + path + "'");
  return read_catalog(in);
}

inline std::vector<ScalesRow> scales_table_abs(const std::vector<Body>& bodies, double one_plus_mu_abs) {
  std::vector<ScalesRow> rows;
  rows.reserve(bodies.size());
  for (const auto& b : bodies) {
    ScalesRow r;
    r.name = b.name;
    r.surface_gravity = surface_gravity(b.mass_g, b.radius_cm);
    r.x_a_cm = length_scale_abs(r.surface_gravity, one_plus_mu_abs);
    if (r.x_a_cm) r.x_a_ly = cm_to_light_years(*r.x_a_cm);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ScalesRow> scales_table(const std::vector<Body>& bodies, double mu_a) {
  return scales_table_abs(bodies, std::abs(1.0 + mu_a));
}

namespace detail {
inline std::string g17(const std::optional<double>& v) {
  if (!v) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}
}  // namespace detail

inline void write_scales_csv(std::ostream& os, const std::vector<ScalesRow>& rows) {
  os << "name,a_cms2,x_a_cm,x_a_ly\n";
  for (const auto& r : rows)
    os << r.name << ',' << detail::g17(r.surface_gravity) << ',' << detail::g17(r.x_a_cm) << ','
       << detail::g17(r.x_a_ly) << '\n';
}

/// JSON array; an infinite scale is written as null.
inline nlohmann::ordered_json scales_to_json(const std::vector<ScalesRow>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["name"] = r.name;
    o["a_cms2"] = r.surface_gravity;
    o["x_a_cm"] = r.x_a_cm ? nlohmann::ordered_json(*r.x_a_cm) : nlohmann::ordered_json(nullptr);
    o["x_a_ly"] = r.x_a_ly ? nlohmann::ordered_json(*r.x_a_ly) : nlohmann::ordered_json(nullptr);
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace aam::astro
