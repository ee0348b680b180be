#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "aam/numgrid/evolve.hpp"
#include "aam/numgrid/precession.hpp"
#include "oracles.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(AAM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string cfg(const char* name) { return std::string(AAM_SOURCE_DIR) + "/configs/" + name; }

aam::numgrid::Trajectory parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  aam::numgrid::Trajectory t;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string f;
    std::vector<double> v;
    while (std::getline(ls, f, ',')) v.push_back(f == "nan" ? std::nan("") : std::stod(f));
    aam::numgrid::TrajectoryPoint p;
    p.t = v[0];
    p.spin = aam::numgrid::bloch_from_components(v[1], v[2], v[3]);
    t.points.push_back(p);
  }
  return t;
}

}  // namespace

TEST(Cli, VerifyPassesAndMutationFails) {
  const CliRun ok = run("verify");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
  EXPECT_NE(ok.out.find("PASS spin-term-ratio"), std::string::npos);
  const CliRun bad = run("verify --mutate spin-coefficient");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL spin-term-ratio"), std::string::npos);
}

TEST(Cli, VerifyMuMinusOneNotesVanishingTerm) {
  const CliRun r = run("verify --mu-a -1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("vanishes"), std::string::npos);
}

TEST(Cli, ResidualAtMinusThreeIsZero) {
  const CliRun r = run("residual --mu-a -3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n");
  EXPECT_NE(run("residual --mu-a 1/2").out, "0\n");
  EXPECT_NE(run("residual --mu-a -3 --tidal").out, "0\n");
}

TEST(Cli, GenerateCarriesSigmaOnly) {
  const CliRun r = run("generate --mu-a 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("increment: - 1/4 * hbar"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("residual").code, 2);
  EXPECT_EQ(run("residual --mu-a banana").code, 2);
  EXPECT_EQ(run("verify --mutate other").code, 2);
  EXPECT_EQ(run("evolve --config /nonexistent.json").code, 2);
  EXPECT_EQ(run("scales --catalog /nonexistent.csv --one-plus-mu-a-abs 2").code, 2);
  EXPECT_EQ(run("probe --config " + cfg("cow.json")).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ScalesTable) {
  const CliRun r = run("scales --catalog " + std::string(AAM_SOURCE_DIR) + "/data/bodies.csv --one-plus-mu-a-abs 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "name,a_cms2,x_a_cm,x_a_ly");
  EXPECT_NE(r.out.find("Sun,27426.9161459574"), std::string::npos);
  EXPECT_EQ(run("scales --one-plus-mu-a-abs 2").out, r.out);
  const CliRun j = run("scales --one-plus-mu-a-abs 2 --format json");
  EXPECT_EQ(j.out.front(), '[');
}

TEST(Cli, EvolveDemoMatchesClosedForm) {
  const CliRun r = run("evolve --config " + cfg("precession_mu0.json"));
  ASSERT_EQ(r.code, 0);
  const auto traj = parse_csv(r.out);
  ASSERT_EQ(traj.size(), 1001u);
  const double omega = aam::numgrid::precession_frequency(traj).omega;
  EXPECT_NEAR(omega / oracle::accel_spin_omega(0.0, 981.0, 3.35e-19, 0.0), 1.0, 1e-4);
}

TEST(Cli, OutputsAreByteIdentical) {
  for (const std::string& args : {"evolve --config " + cfg("falling_packet.json"), "probe --config " + cfg("probe.json"),
                                 "cow --config " + cfg("cow.json"), std::string("verify")}) {
    const CliRun a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
  EXPECT_NE(run("probe --config " + cfg("probe.json") + " --seed 5").out,
            run("probe --config " + cfg("probe.json") + " --seed 6").out);
}

TEST(Cli, CowPhasesAgree) {
  const CliRun r = run("cow --config " + cfg("cow.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("relative_difference=0\n"), std::string::npos);
}

TEST(Cli, WritesToConfiguredPath) {
  const std::string path = std::string(AAM_BINARY_DIR) + "/cli_output_test.json";
  std::ofstream(path + ".cfg") << R"({"grid": {"n_points": 32, "length_cm": 1e-3},
    "params": {"g_cms2": 981}, "cow": {"height_cm": 1, "traversal_time_s": 1e-4},
    "output": {"path": ")" << path << R"("}})";
  std::remove(path.c_str());
  const CliRun r = run("cow --config " + path + ".cfg");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.rfind("gravitational_phase_rad=", 0), 0u);
}
