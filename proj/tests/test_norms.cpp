#include <gtest/gtest.h>

#include <cmath>

#include "blowup/norms.hpp"
#include "blowup/operators.hpp"

using namespace blowup;

namespace {

GridPtr grid(std::size_t nr = 256, std::size_t nt = 64) { return build_grid(nr, nt, -10.0, 10.0); }

}  // namespace

TEST(Params, RejectsAlphaOutsideRange) {
  const auto g = grid(16, 16);
  EXPECT_THROW(make_params(0.0, *g), ConfigError);
  EXPECT_THROW(make_params(0.3, *g), ConfigError);
  EXPECT_NO_THROW(make_params(0.25, *g));
}

TEST(Params, DerivedExponentsFollowAlpha) {
  const auto g = grid(16, 16);
  const Params p = make_params(0.1, *g);
  EXPECT_DOUBLE_EQ(p.gamma, 1.01);
  EXPECT_DOUBLE_EQ(p.eta, 0.99);
}

TEST(Params, NormalizationMatchesClosedForm) {
  // Midpoint quadrature of Gamma K converges to the Beta-function value.
  const auto g = build_grid(16, 512, -1.0, 1.0);
  for (double a : {0.01, 0.1, 0.25}) EXPECT_NEAR(make_params(a, *g).c, normalization_exact(a), 1e-5);
  // alpha -> 0: 3 int sin cos^2 = 1.
  EXPECT_NEAR(normalization_exact(1e-12), 1.0, 1e-10);
}

TEST(Norms, ZeroFieldHasZeroNorm) {
  const auto g = grid(32, 16);
  const Params p = make_params(0.1, *g);
  const Field z(g);
  EXPECT_EQ(weighted_l2(z, WeightSelector::W, p), 0.0);
  EXPECT_EQ(hk_norm(z, 4, p), 0.0);
  EXPECT_EQ(linf(z), 0.0);
}

TEST(Norms, RadialWeightMatchesAnalyticIntegral) {
  const auto g = grid(512, 16);
  const Params p = make_params(0.1, *g);
  // f w = 1/(1+z), so |f w|^2 = (pi/2) int dz/(1+z)^2.
  const Field f = sample(g, [](double z, double) { return z * z / std::pow(1.0 + z, 3); });
  const double a = g->z.front(), b = g->z.back();
  const double exact = (M_PI / 2) * (b / (1.0 + b) - a / (1.0 + a));
  const double got = weighted_l2(f, WeightSelector::w, p);
  EXPECT_NEAR(got * got, exact, 1e-3 * exact);
}

TEST(Norms, AngularWeightMatchesBetaIntegral) {
  const auto g = build_grid(16, 1024, -1.0, 1.0);
  Params p = make_params(0.1, *g);
  // int_0^{pi/2} sin(2t)^2 sin(2t)^{-gamma} dt = B(1/2, (3-gamma)/2) / 2.
  const Field f = sample(g, [](double, double t) { return std::sin(2.0 * t); });
  const double ang = weighted_l2(f, WeightSelector::w_theta, p);
  double rad = 0.0;
  for (double w : g->radial_quad_weights) rad += w;
  const double exact = 0.5 * std::beta(0.5, 0.5 * (3.0 - p.gamma)) * rad;
  EXPECT_NEAR(ang * ang, exact, 1e-4 * exact);
}

TEST(Norms, OrderAboveFourThrows) {
  const auto g = grid(16, 16);
  const Params p = make_params(0.1, *g);
  EXPECT_THROW(hk_norm(Field(g), 5, p), std::invalid_argument);
  EXPECT_THROW(hk_inner(Field(g), Field(g), 5, p), std::invalid_argument);
  EXPECT_THROW(wlinf_norm(Field(g), 6, p), std::invalid_argument);
}

TEST(Norms, HkNormIsMonotoneInOrder) {
  const auto g = grid(128, 32);
  const Params p = make_params(0.1, *g);
  const Field f = f_star(p, g);
  double prev = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const double n = hk_norm(f, k, p);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(Norms, HkNormSelfConverges) {
  auto h2 = [](std::size_t nr, std::size_t nt) {
    const auto g = grid(nr, nt);
    const Params p = make_params(0.1, *g);
    const Field f = sample(g, [](double z, double t) { return std::sin(2 * t) * z * z / std::pow(1 + z, 4); });
    return hk_norm(f, 2, p);
  };
  const double a = h2(256, 64), b = h2(512, 128);
  EXPECT_LT(std::abs(a - b) / b, 1e-2);
}

TEST(Norms, WeightedSupOfDecayingProfile) {
  const auto g = grid(512, 16);
  const Params p = make_params(0.1, *g);
  // (1+z)^k d_z^k (1+z)^{-1} = (-1)^k k! / (1+z), sup 1 at the origin.
  const Field f = sample(g, [](double z, double) { return 1.0 / (1.0 + z); }, Bc::free);
  const double expect = 1.0 + 1.0 + 2.0 + 6.0 + 24.0 + 120.0;
  EXPECT_NEAR(wlinf_norm(f, 5, p), expect, 0.02 * expect);
}

TEST(Norms, InnerProductDominatesNormAndIsBilinear) {
  const auto g = grid(64, 16);
  const Params p = make_params(0.1, *g);
  const Field f = f_star(p, g);
  const double n = hk_norm(f, 4, p);
  EXPECT_GE(hk_inner(f, f, 4, p), n * n);
  EXPECT_EQ(hk_inner(f, Field(g), 4, p), 0.0);
  const Field h = sample(g, [](double z, double t) { return std::sin(2 * t) * z / std::pow(1 + z, 3); });
  EXPECT_NEAR(hk_inner(2.0 * f, h, 2, p), 2.0 * hk_inner(f, h, 2, p), 1e-12 * std::abs(hk_inner(f, h, 2, p)));
  EXPECT_NEAR(hk_inner(f, h, 3, p), hk_inner(h, f, 3, p), 1e-12 * std::abs(hk_inner(f, h, 3, p)));
}

TEST(Norms, ScaledConstantsInterpolate) {
  const auto one = InnerProductConstants::scaled(0.0);
  const auto paper = InnerProductConstants::paper();
  const auto full = InnerProductConstants::scaled(1.0);
  EXPECT_DOUBLE_EQ(one.l2, 1.0);
  EXPECT_DOUBLE_EQ(full.l2, paper.l2);
  EXPECT_DOUBLE_EQ(full.theta, paper.theta);
  EXPECT_DOUBLE_EQ(full.dz, paper.dz);
}
