#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "aam/astro.hpp"
#include "aam/boostgen.hpp"
#include "aam/config.hpp"
#include "aam/hamiltonians.hpp"
#include "aam/numgrid/cow.hpp"
#include "aam/numgrid/evolve.hpp"
#include "aam/numgrid/precession.hpp"
#include "aam/numgrid/probe.hpp"
#include "aam/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

aam::Rational parse_mu(const std::string& text) {
  try {
    return aam::config::detail::rational(aam::config::json(text), "--mu-a");
  } catch (const std::exception& e) {
    throw UsageError("--mu-a: " + std::string(e.what()));
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

aam::config::RunConfig load(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("config file not found: " + path);
  return aam::config::load_config(path);
}

/// Writes `text` to the configured path, or to stdout.
void emit(const aam::config::OutputSettings& out, const std::string& text) {
  if (!out.path) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out.path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + *out.path + "'");
  f << text;
}

int run_verify(bool mutate, const std::string& mu) {
  aam::VerifyOptions opts;
  opts.mutate_spin_coefficient = mutate;
  if (!mu.empty()) opts.mu_a = parse_mu(mu);
  const auto lines = aam::run_verify(opts);
  aam::print_checks(std::cout, lines);
  return aam::all_passed(lines) ? kExitOk : kExitFailure;
}

int run_residual(const std::string& mu, bool tidal) {
  const aam::Rational m = parse_mu(mu);
  std::cout << aam::equivalence_residual(aam::ScalarCoeff(m), tidal).str() << '\n';
  return kExitOk;
}

int run_generate(const std::string& mu) {
  const aam::Rational m = parse_mu(mu);
  const aam::BoostGenerator gen = aam::chi_prime(aam::ScalarCoeff(m));
  const aam::OperatorExpr inc = aam::boost_increment(gen, aam::build(aam::HamiltonianSpec::free_particle()));
  std::cout << "convention: " << aam::convention_name(aam::kCalibratedConvention) << '\n'
            << "a.chi': " << aam::accel_dot_generator(gen).str() << '\n'
            << "increment: " << inc.str() << '\n'
            << "particle_sector: " << aam::particle_sector(inc).str() << '\n';
  return kExitOk;
}

int run_evolve(const std::string& path) {
  using namespace aam;
  const config::RunConfig cfg = load(path);
  config::require_section(cfg.hamiltonian.has_value(), "hamiltonian", "evolve");
  config::require_section(cfg.evolution.has_value(), "evolution", "evolve");
  config::require_section(cfg.initial_spin.has_value(), "initial_spin", "evolve");
  if (cfg.output.format != "csv") throw config::ConfigError("/output/format", "evolve writes csv");

  const auto ctx = cfg.context();
  const numgrid::MatrixOp h = numgrid::realize(build(*cfg.hamiltonian), ctx);
  for (const auto& w : h.warnings) std::cerr << "warning: " << w << '\n';
  const auto& s = *cfg.initial_spin;
  const auto psi = numgrid::SpinorState::gaussian(cfg.grid, s.theta, s.phi, s.width_cm.value_or(cfg.grid.length_cm / 20.0),
                                                  s.center_cm, s.k0_per_cm);
  const auto traj = numgrid::evolve(h, psi, cfg.evolution->dt_s, cfg.evolution->steps, cfg.evolution->method);
  std::ostringstream csv;
  numgrid::write_trajectory_csv(csv, traj);
  emit(cfg.output, csv.str());

  std::cerr << "norm_drift=" << g17(traj.max_norm_drift())
            << " energy_drift_relative=" << g17(traj.max_relative_energy_drift());
  try {
    const auto est = numgrid::precession_frequency(traj);
    if (est.is_static) std::cerr << " precession=static";
    else std::cerr << " precession_rad_s=" << g17(est.omega);
  } catch (const std::invalid_argument& e) {
    std::cerr << " precession=unresolved (" << e.what() << ")";
  }
  std::cerr << '\n';
  return kExitOk;
}

int run_probe(const std::string& path, std::optional<std::uint64_t> seed) {
  using namespace aam;
  const config::RunConfig cfg = load(path);
  config::require_section(cfg.probe.has_value(), "probe", "probe");
  if (cfg.output.path && cfg.output.format != "json") throw config::ConfigError("/output/format", "probe writes json");
  const auto& p = *cfg.probe;
  const auto report =
      numgrid::symmetry_probe(cfg.mu_a, p.thetas, cfg.context(), p.ensemble_size, seed.value_or(p.seed), p.phi0);
  emit(cfg.output, numgrid::probe_to_json(report).dump(2) + "\n");
  return kExitOk;
}

int run_scales(const std::string& catalog, double one_plus_mu_abs, const std::string& format) {
  using namespace aam::astro;
  std::vector<Body> bodies;
  try {
    bodies = catalog.empty() ? default_catalog() : load_catalog(catalog);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (!(one_plus_mu_abs >= 0.0)) throw UsageError("--one-plus-mu-a-abs must be nonnegative");
  const auto rows = scales_table_abs(bodies, one_plus_mu_abs);
  if (format == "json") std::cout << scales_to_json(rows).dump(2) << '\n';
  else write_scales_csv(std::cout, rows);
  return kExitOk;
}

int run_quark(double force, double mass) {
  const auto q = aam::astro::quark_commutator_estimate(force, mass);
  for (const auto& step : q.chain) std::cout << step << '\n';
  std::cout << "value_cms2=" << g17(q.value_cms2) << '\n'
            << "reference_cms2=" << g17(q.reference_cms2) << '\n'
            << "decades_from_reference=" << g17(q.decades_from_reference()) << '\n';
  return kExitOk;
}

int run_cow(const std::string& path) {
  using namespace aam;
  const config::RunConfig cfg = load(path);
  config::require_section(cfg.cow.has_value(), "cow", "cow");
  const double pg = numgrid::cow_phase(HamiltonianKind::gravitational, *cfg.cow, cfg.params);
  const double pa = numgrid::cow_phase(HamiltonianKind::accelerational, *cfg.cow, cfg.params);
  const double rel = pg == pa ? 0.0 : std::abs(pg - pa) / std::max(std::abs(pg), std::abs(pa));
  std::ostringstream out;
  out << "gravitational_phase_rad=" << g17(pg) << '\n'
      << "accelerational_phase_rad=" << g17(pa) << '\n'
      << "relative_difference=" << g17(rel) << '\n';
  emit(cfg.output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic and numeric checks for the accelerated spin-1/2 Hamiltonian"};
  app.require_subcommand(1);

  bool mutate = false;
  std::string mu;
  auto* verify = app.add_subcommand("verify", "Run the symbolic check suite");
  verify->add_option("--mutate", "Test hook; the only value is spin-coefficient")
      ->check(CLI::IsMember({"spin-coefficient"}))
      ->each([&](const std::string&) { mutate = true; });
  verify->add_option("--mu-a", mu, "Also report the residual at this mu_a (integer, decimal or n/d)");

  bool tidal = false;
  auto* residual = app.add_subcommand("residual", "Print H_grav - H_acc at a = -g");
  residual->add_option("--mu-a", mu, "mu_a (integer, decimal or n/d)")->required();
  residual->add_flag("--tidal", tidal, "Keep the tidal term of the gravitational Hamiltonian");

  auto* generate = app.add_subcommand("generate", "Print the increment generated from the free Hamiltonian");
  generate->add_option("--mu-a", mu, "mu_a (integer, decimal or n/d)")->required();

  std::string config_path;
  auto* evolve = app.add_subcommand("evolve", "Evolve a spinor packet and write the trajectory CSV");
  evolve->add_option("--config", config_path, "Run configuration (JSON)")->required();

  std::optional<std::uint64_t> seed;
  auto* probe = app.add_subcommand("probe", "Bloch-angle symmetry probe, JSON report");
  probe->add_option("--config", config_path, "Run configuration (JSON)")->required();
  probe->add_option("--seed", seed, "Seed for the momentum-azimuth ensemble (overrides the config)");

  std::string catalog, format = "csv";
  double one_plus_mu_abs = 2.0;
  auto* scales = app.add_subcommand("scales", "Surface gravity and length scale per catalog body");
  scales->add_option("--catalog", catalog, "CSV with header name,mass_g,radius_cm (default: Sun and neutron star)");
  scales->add_option("--one-plus-mu-a-abs", one_plus_mu_abs, "|1 + mu_a|")->required();
  scales->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  double force = 1e22, quark_mass = 5.0;
  auto* quark = app.add_subcommand("quark", "Order-of-magnitude estimate (2/3) F / m_q with its conversion chain");
  quark->add_option("--force-gev-per-cm", force, "F in GeV/cm")->capture_default_str();
  quark->add_option("--quark-mass-mev", quark_mass, "m_q in MeV/c^2")->capture_default_str();

  auto* cow = app.add_subcommand("cow", "Potential-term phase for both Hamiltonians");
  cow->add_option("--config", config_path, "Run configuration (JSON) with a cow section")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return run_verify(mutate, mu);
    if (*residual) return run_residual(mu, tidal);
    if (*generate) return run_generate(mu);
    if (*evolve) return run_evolve(config_path);
    if (*probe) return run_probe(config_path, seed);
    if (*scales) return run_scales(catalog, one_plus_mu_abs, format);
    if (*quark) return run_quark(force, quark_mass);
    if (*cow) return run_cow(config_path);
  } catch (const aam::config::ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
