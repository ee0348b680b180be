#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aam/hamiltonians.hpp"
#include "aam/numgrid/cow.hpp"
#include "aam/numgrid/evolve.hpp"
#include "aam/numgrid/realize.hpp"
#include "aam/rational.hpp"

namespace aam::config {

using json = nlohmann::json;

/// Validation failure at a JSON-pointer location.
struct ConfigError : std::runtime_error {
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message), pointer(std::move(pointer)) {}
  std::string pointer;
};

struct InitialSpin {
  double theta = 0.0;
  double phi = 0.0;
  std::optional<double> width_cm;  // default: grid length / 20
  double center_cm = 0.0;
  double k0_per_cm = 0.0;
};

struct EvolutionSettings {
  double dt_s = 0.0;
  int steps = 0;
  numgrid::EvolutionMethod method = numgrid::EvolutionMethod::eigen_exponential;
};

struct ProbeSettings {
  std::vector<double> thetas;
  int ensemble_size = 64;
  std::uint64_t seed = 1;
  double phi0 = 0.0;
};

struct OutputSettings {
  std::optional<std::string> path;
  std::string format = "csv";
};

struct RunConfig {
  numgrid::Grid1D grid;
  numgrid::PhysParams params;
  Rational mu_a;
  double p_perp_gcms = 0.0;
  double p_perp_azimuth = 0.0;
  std::optional<HamiltonianSpec> hamiltonian;
  std::optional<EvolutionSettings> evolution;
  std::optional<InitialSpin> initial_spin;
  std::optional<ProbeSettings> probe;
  std::optional<numgrid::CowGeometry> cow;
  OutputSettings output;

  [[nodiscard]] numgrid::RealizationContext context() const {
    numgrid::RealizationContext ctx;
    ctx.grid = grid;
    ctx.params = params;
    ctx.p_x = p_perp_gcms * std::cos(p_perp_azimuth);
    ctx.p_y = p_perp_gcms * std::sin(p_perp_azimuth);
    return ctx;
  }
};

namespace detail {

inline std::string child(const std::string& ptr, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return ptr + "/" + escaped;
}

inline const json& require_object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError(child(ptr, k), "unknown key");
  return j;
}

inline const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline const json& need(const json& obj, const std::string& ptr, const char* key) {
  const json* v = find(obj, key);
  if (!v) throw ConfigError(child(ptr, key), "missing required key");
  return *v;
}

inline double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw ConfigError(ptr, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(ptr, "expected a finite number");
  return d;
}

inline double positive(const json& v, const std::string& ptr) {
  const double d = number(v, ptr);
  if (!(d > 0.0)) throw ConfigError(ptr, "must be positive");
  return d;
}

inline double nonnegative(const json& v, const std::string& ptr) {
  const double d = number(v, ptr);
  if (d < 0.0) throw ConfigError(ptr, "must be nonnegative");
  return d;
}

inline std::int64_t integer(const json& v, const std::string& ptr, std::int64_t lo, std::int64_t hi) {
  if (!v.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  const auto n = v.get<std::int64_t>();
  if (n < lo || n > hi)
    throw ConfigError(ptr, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return n;
}

inline std::string string(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw ConfigError(ptr, "expected a string");
  return v.get<std::string>();
}

/// Exact rational from a decimal literal such as "-0.25" or "1.5e-2".
inline Rational rational_from_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
  Rational value(0);
  int digits = 0, exponent = 0;
  bool dot = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !dot) {
      dot = true;
    } else if (c >= '0' && c <= '9') {
      value = value * Rational(10) + Rational(c - '0');
      if (dot) --exponent;
      ++digits;
    } else {
      break;
    }
  }
  if (digits == 0) throw std::invalid_argument("not a number");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    const std::string rest = text.substr(pos + 1);
    std::size_t used = 0;
    exponent += std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("not a number");
    pos = text.size();
  }
  if (pos != text.size()) throw std::invalid_argument("not a number");
  value = value * Rational(10).pow(exponent);
  return neg ? -value : value;
}

/// mu_a as an integer, a decimal number, or a string "n" or "n/d".
inline Rational rational(const json& v, const std::string& ptr) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return rational_from_decimal(v.dump());
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.find('/') != std::string::npos) return Rational::parse(s);
      return rational_from_decimal(s);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(ptr, std::string("not a rational number: ") + e.what());
  }
  throw ConfigError(ptr, "expected a number or a rational string such as \"-3\" or \"1/2\"");
}

inline HamiltonianKind kind_from_name(const std::string& s, const std::string& ptr) {
  if (s == "gravitational") return HamiltonianKind::gravitational;
  if (s == "accelerational") return HamiltonianKind::accelerational;
  if (s == "free") return HamiltonianKind::free;
  throw ConfigError(ptr, "unknown Hamiltonian kind '" + s + "'");
}

}  // namespace detail

inline RunConfig parse_config(const json& root) {
  using namespace detail;
  RunConfig cfg;
  require_object(root, "", {"grid", "params", "hamiltonian", "evolution", "initial_spin", "probe", "cow", "output"});

  const json& grid = require_object(need(root, "", "grid"), "/grid", {"n_points", "length_cm"});
  const auto n = integer(need(grid, "/grid", "n_points"), "/grid/n_points", 32, 1024);
  if ((n & (n - 1)) != 0) throw ConfigError("/grid/n_points", "must be a power of two");
  cfg.grid.n_points = static_cast<int>(n);
  cfg.grid.length_cm = positive(need(grid, "/grid", "length_cm"), "/grid/length_cm");

  const json& params = require_object(need(root, "", "params"), "/params",
                                      {"m_g", "a_cms2", "g_cms2", "mu_a", "p_perp_gcms", "p_perp_azimuth_rad", "axis"});
  if (const json* v = find(params, "m_g")) cfg.params.m = positive(*v, "/params/m_g");
  const json* a = find(params, "a_cms2");
  const json* g = find(params, "g_cms2");
  if (!a && !g) throw ConfigError("/params", "one of a_cms2 or g_cms2 is required");
  // A single field value stands for the equivalent setting a = -g of the other.
  if (a) cfg.params.a = number(*a, "/params/a_cms2");
  if (g) cfg.params.g = number(*g, "/params/g_cms2");
  if (!g) cfg.params.g = cfg.params.a;
  if (!a) cfg.params.a = cfg.params.g;
  if (const json* v = find(params, "mu_a")) cfg.mu_a = rational(*v, "/params/mu_a");
  cfg.params.mu_a = cfg.mu_a.to_double();
  if (const json* v = find(params, "p_perp_gcms")) cfg.p_perp_gcms = nonnegative(*v, "/params/p_perp_gcms");
  if (const json* v = find(params, "p_perp_azimuth_rad")) cfg.p_perp_azimuth = number(*v, "/params/p_perp_azimuth_rad");
  if (const json* v = find(params, "axis"))
    if (string(*v, "/params/axis") != "z") throw ConfigError("/params/axis", "only \"z\" is supported");

  if (const json* h = find(root, "hamiltonian")) {
    require_object(*h, "/hamiltonian", {"kind", "terms"});
    const HamiltonianKind kind = kind_from_name(string(need(*h, "/hamiltonian", "kind"), "/hamiltonian/kind"),
                                                "/hamiltonian/kind");
    const json& terms = need(*h, "/hamiltonian", "terms");
    if (!terms.is_array()) throw ConfigError("/hamiltonian/terms", "expected an array of term names");
    TermFlags flags = TermFlags::none();
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string ptr = "/hamiltonian/terms/" + std::to_string(k);
      const auto t = term_from_name(string(terms[k], ptr));
      if (!t) throw ConfigError(ptr, "unknown term '" + terms[k].get<std::string>() + "'");
      flags.set(*t, true);
    }
    HamiltonianSpec spec = kind == HamiltonianKind::gravitational    ? HamiltonianSpec::gravitational(flags)
                           : kind == HamiltonianKind::accelerational ? HamiltonianSpec::accelerational(ScalarCoeff(cfg.mu_a), flags)
                                                                     : HamiltonianSpec::free_particle();
    if (kind == HamiltonianKind::free) spec.flags = flags;
    try {
      spec.validate();
    } catch (const std::exception& e) {
      throw ConfigError("/hamiltonian/terms", e.what());
    }
    cfg.hamiltonian = spec;
  }

  if (const json* e = find(root, "evolution")) {
    require_object(*e, "/evolution", {"dt_s", "steps", "method"});
    EvolutionSettings s;
    s.dt_s = positive(need(*e, "/evolution", "dt_s"), "/evolution/dt_s");
    s.steps = static_cast<int>(integer(need(*e, "/evolution", "steps"), "/evolution/steps", 1, 100000));
    if (const json* m = find(*e, "method")) {
      const std::string name = string(*m, "/evolution/method");
      if (name == "eigen_exponential") s.method = numgrid::EvolutionMethod::eigen_exponential;
      else if (name == "crank_nicolson") s.method = numgrid::EvolutionMethod::crank_nicolson;
      else throw ConfigError("/evolution/method", "expected \"eigen_exponential\" or \"crank_nicolson\"");
    }
    cfg.evolution = s;
  }

  if (const json* s = find(root, "initial_spin")) {
    require_object(*s, "/initial_spin", {"theta", "phi", "width_cm", "center_cm", "k0_per_cm"});
    InitialSpin spin;
    spin.theta = number(need(*s, "/initial_spin", "theta"), "/initial_spin/theta");
    if (spin.theta < 0.0 || spin.theta > std::numbers::pi) throw ConfigError("/initial_spin/theta", "must lie in [0, pi]");
    spin.phi = number(need(*s, "/initial_spin", "phi"), "/initial_spin/phi");
    if (const json* v = find(*s, "width_cm")) spin.width_cm = positive(*v, "/initial_spin/width_cm");
    if (const json* v = find(*s, "center_cm")) spin.center_cm = number(*v, "/initial_spin/center_cm");
    if (const json* v = find(*s, "k0_per_cm")) spin.k0_per_cm = number(*v, "/initial_spin/k0_per_cm");
    cfg.initial_spin = spin;
  }

  if (const json* p = find(root, "probe")) {
    require_object(*p, "/probe", {"thetas", "ensemble_size", "seed", "phi0"});
    ProbeSettings s;
    const json& thetas = need(*p, "/probe", "thetas");
    if (!thetas.is_array() || thetas.empty()) throw ConfigError("/probe/thetas", "expected a nonempty array");
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      const std::string ptr = "/probe/thetas/" + std::to_string(k);
      const double t = number(thetas[k], ptr);
      if (!(t > 0.0 && t < std::numbers::pi)) throw ConfigError(ptr, "must lie strictly between 0 and pi");
      s.thetas.push_back(t);
    }
    if (const json* v = find(*p, "ensemble_size"))
      s.ensemble_size = static_cast<int>(integer(*v, "/probe/ensemble_size", 1, 100000));
    if (const json* v = find(*p, "seed"))
      s.seed = static_cast<std::uint64_t>(integer(*v, "/probe/seed", 0, INT64_MAX));
    if (const json* v = find(*p, "phi0")) s.phi0 = number(*v, "/probe/phi0");
    cfg.probe = s;
  }

  if (const json* c = find(root, "cow")) {
    require_object(*c, "/cow", {"height_cm", "traversal_time_s"});
    numgrid::CowGeometry geo;
    geo.height_difference_cm = nonnegative(need(*c, "/cow", "height_cm"), "/cow/height_cm");
    geo.traversal_time_s = nonnegative(need(*c, "/cow", "traversal_time_s"), "/cow/traversal_time_s");
    cfg.cow = geo;
  }

  if (const json* o = find(root, "output")) {
    require_object(*o, "/output", {"path", "format"});
    if (const json* v = find(*o, "path")) cfg.output.path = string(*v, "/output/path");
    if (const json* v = find(*o, "format")) {
      cfg.output.format = string(*v, "/output/format");
      if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw ConfigError("/output/format", "expected \"csv\" or \"json\"");
    }
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(root);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Throws ConfigError if a section needed by `command` is absent.
inline void require_section(bool present, const char* section, const char* command) {
  if (!present) throw ConfigError(std::string("/") + section, std::string("section required by '") + command + "'");
}

}  // namespace aam::config
