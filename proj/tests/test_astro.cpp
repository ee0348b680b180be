#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "aam/astro.hpp"

using namespace aam::astro;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(SurfaceGravity, QuotedValues) {
  EXPECT_LT(rel(surface_gravity(constants::M_sun, constants::R_sun), 2.7e4), 0.03);
  EXPECT_LT(rel(surface_gravity(1.5 * constants::M_sun, 1e6), 2.0e14), 0.03);
}

TEST(SurfaceGravity, EarthByHand) {
  // 6.674e-8 * 5.972e27 / 6.371e8^2
  EXPECT_NEAR(surface_gravity(5.972e27, 6.371e8), 981.953203281596, 1e-9);
}

TEST(SurfaceGravity, Homogeneity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> m(1e20, 1e35), r(1e3, 1e12), k(0.1, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double mm = m(rng), rr = r(rng), kk = k(rng);
    const double g = surface_gravity(mm, rr);
    EXPECT_LT(rel(surface_gravity(kk * mm, rr), kk * g), 1e-14);
    EXPECT_LT(rel(surface_gravity(mm, kk * rr), g / (kk * kk)), 1e-14);
  }
  EXPECT_LT(rel(surface_gravity(1e30, 2e8), surface_gravity(1e30, 1e8) / 4), 1e-15);
}

TEST(SurfaceGravity, Rejections) {
  EXPECT_THROW(surface_gravity(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(surface_gravity(1.0, -1.0), std::invalid_argument);
}

TEST(LengthScale, Numerator) {
  EXPECT_LT(rel(kLengthScaleNumerator, 3.6e21), 0.005);
  EXPECT_NEAR(kLengthScaleNumerator, 3.5950207149472704e21, 1e7);
}

TEST(LengthScale, QuotedValues) {
  const double sun = *length_scale_abs(surface_gravity(constants::M_sun, constants::R_sun), 2.0);
  const double ns = *length_scale_abs(surface_gravity(1.5 * constants::M_sun, 1e6), 2.0);
  EXPECT_LT(rel(sun, 6.6e16), 0.03);
  EXPECT_LT(rel(ns, 9.1e6), 0.03);
  EXPECT_NEAR(sun, 6.553818693679785e16, 1e3);
  EXPECT_NEAR(ns, 9027326.639909951, 1e-5);
}

TEST(LengthScale, LightYearConversionByHand) {
  // 6.5538e16 cm over c * 365.25 d.
  const double sun = *length_scale_abs(surface_gravity(constants::M_sun, constants::R_sun), 2.0);
  EXPECT_NEAR(cm_to_light_years(sun), 0.06927391825265648, 1e-12);
}

TEST(LengthScale, ProductIdentityAndReciprocity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(1e-3, 1e16), mu(-6.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double aa = a(rng), mm = mu(rng);
    const auto x = length_scale(aa, mm);
    ASSERT_TRUE(x);
    EXPECT_LT(rel(*x * std::abs(1.0 + mm) * aa, 4.0 * constants::c * constants::c), 1e-12);
  }
  EXPECT_LT(rel(*length_scale_abs(100.0, 4.0), *length_scale_abs(100.0, 2.0) / 2.0), 1e-15);
}

TEST(LengthScale, InfiniteAndRejected) {
  EXPECT_FALSE(length_scale(981.0, -1.0).has_value());
  EXPECT_THROW(length_scale(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(length_scale(-5.0, 1.0), std::invalid_argument);
  EXPECT_THROW(length_scale_abs(5.0, -1.0), std::invalid_argument);
}

TEST(QuarkEstimate, ConvertedValueAndChain) {
  const QuarkEstimate q = quark_commutator_estimate(1e22, 5.0);
  EXPECT_NEAR(q.force_dyn, 1.6022e19, 1e5);
  EXPECT_NEAR(q.quark_mass_g / 8.913439599045537e-27, 1.0, 1e-12);
  EXPECT_NEAR(q.value_cms2 / 1.1983402383157567e45, 1.0, 1e-12);
  EXPECT_EQ(q.reference_cms2, 1e36);
  EXPECT_EQ(q.chain.size(), 4u);
  EXPECT_NE(q.chain[0].find("dyn"), std::string::npos);
  EXPECT_NEAR(q.decades_from_reference(), std::log10(1.1983402383157567e9), 1e-9);
}

TEST(QuarkEstimate, LinearityAndReciprocity) {
  const double base = quark_commutator_estimate(1e22, 5.0).value_cms2;
  EXPECT_EQ(quark_commutator_estimate(2e22, 5.0).value_cms2, 2.0 * base);
  EXPECT_EQ(quark_commutator_estimate(1e22, 10.0).value_cms2, base / 2.0);
  EXPECT_THROW(quark_commutator_estimate(0.0, 5.0), std::invalid_argument);
  EXPECT_THROW(quark_commutator_estimate(1.0, -5.0), std::invalid_argument);
}

TEST(Catalog, ReadsAndPreservesOrder) {
  std::istringstream in("name,mass_g,radius_cm\nEarth,5.972e27,6.371e8\n\nSun,1.989e33,6.957e10\n");
  const auto bodies = read_catalog(in);
  ASSERT_EQ(bodies.size(), 2u);
  EXPECT_EQ(bodies[0].name, "Earth");
  EXPECT_EQ(bodies[1].name, "Sun");
  const auto rows = scales_table_abs(bodies, 2.0);
  EXPECT_NEAR(rows[0].surface_gravity, 981.953203281596, 1e-9);
  EXPECT_NEAR(*rows[0].x_a_cm / 1.8305458462445292e18, 1.0, 1e-12);
}

TEST(Catalog, EmptyCatalogGivesEmptyTable) {
  std::istringstream in("name,mass_g,radius_cm\n");
  EXPECT_TRUE(scales_table(read_catalog(in), 1.0).empty());
}

TEST(Catalog, ErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_catalog(in);
    } catch (const CatalogError& e) {
      return e.line;
    }
    return -1;
  };
  EXPECT_EQ(line_of("name,mass_g,radius_cm\nA,1,2\nB,x,2\n"), 3);
  EXPECT_EQ(line_of("name,mass_g,radius_cm\nA,1\n"), 2);
  EXPECT_EQ(line_of("name,mass_g,radius_cm\nA,1,2\nB,1,-2\n"), 3);
  EXPECT_EQ(line_of("name,mass,radius\nA,1,2\n"), 1);
  EXPECT_EQ(line_of("A,1,2\n"), 1);
  EXPECT_EQ(line_of(""), 1);
  EXPECT_EQ(line_of("name,mass_g,radius_cm\nA,1e3x,2\n"), 2);
}

TEST(Catalog, DefaultCatalogAndShippedFile) {
  const auto rows = scales_table_abs(default_catalog(), 2.0);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(rel(*rows[0].x_a_cm, 6.6e16), 0.03);
  EXPECT_LT(rel(*rows[1].x_a_cm, 9.1e6), 0.03);
  const auto shipped = load_catalog(AAM_SOURCE_DIR "/data/bodies.csv");
  ASSERT_EQ(shipped.size(), 2u);
  EXPECT_EQ(shipped[1].mass_g, default_catalog()[1].mass_g);
}

TEST(ScalesTable, MuMinusThreeEqualsMuOne) {
  const auto a = scales_table(default_catalog(), -3.0);
  const auto b = scales_table(default_catalog(), 1.0);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(*a[k].x_a_cm, *b[k].x_a_cm);
}

TEST(ScalesTable, Outputs) {
  std::ostringstream os;
  write_scales_csv(os, scales_table(default_catalog(), -1.0));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "name,a_cms2,x_a_cm,x_a_ly");
  EXPECT_NE(os.str().find(",inf,inf"), std::string::npos);
  const auto j = scales_to_json(scales_table(default_catalog(), 1.0));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0]["name"], "Sun");
  EXPECT_TRUE(j[0]["x_a_cm"].is_number());
  EXPECT_TRUE(scales_to_json(scales_table(default_catalog(), -1.0))[0]["x_a_cm"].is_null());
}
