#include <gtest/gtest.h>

#include <cmath>

#include "blowup/grid.hpp"
#include "blowup/toy_models.hpp"

using namespace blowup;
using namespace blowup::toy;

TEST(Toy, CutoffShape) {
  EXPECT_EQ(cutoff(0.0), 1.0);
  EXPECT_EQ(cutoff(1.0), 1.0);
  EXPECT_EQ(cutoff(2.0), 0.0);
  EXPECT_EQ(cutoff(5.0), 0.0);
  EXPECT_NEAR(cutoff(1.5), 0.5, 1e-12);
  double prev = 1.0;
  for (double s = 1.0; s <= 2.0; s += 0.01) {
    EXPECT_LE(cutoff(s), prev + 1e-15);
    prev = cutoff(s);
  }
}

TEST(Toy, ComparisonBlowupTimeClosedForm) {
  EXPECT_NEAR(comparison_blowup_time(0.1), M_PI / std::sqrt(0.2), 1e-14);
  const MuTrajectory tr = hyperbolic_mu_ode(RhoProfile::comparison, 10.0, 0.01);
  ASSERT_TRUE(tr.blew_up);
  ASSERT_TRUE(tr.t_star.has_value());
  EXPECT_NEAR(*tr.t_star, comparison_blowup_time(0.1), 1e-3);
}

TEST(Toy, HalfPlaneDataBlowsUp) {
  const MuTrajectory tr = hyperbolic_mu_ode(RhoProfile::half_plane, 10.0, 0.01);
  ASSERT_TRUE(tr.blew_up);
  ASSERT_TRUE(tr.t_star.has_value());
  EXPECT_LT(*tr.t_star, comparison_blowup_time(0.1));
  ASSERT_TRUE(tr.min_growth_ratio.has_value());
  EXPECT_GE(*tr.min_growth_ratio, 0.1);
}

TEST(Toy, SmoothDataStaysBounded) {
  const MuTrajectory tr = hyperbolic_mu_ode(RhoProfile::smooth_plane, 10.0, 0.01);
  EXPECT_FALSE(tr.blew_up);
  EXPECT_FALSE(tr.t_star.has_value());
  EXPECT_TRUE(std::isfinite(tr.mu_max));
  EXPECT_LT(tr.mu_max, 1e3);
  EXPECT_NEAR(tr.t_nodes.back(), 10.0, 1e-9);
}

TEST(Toy, RateDecaysForSmoothDataOnly) {
  EXPECT_LT(hyperbolic_rate(RhoProfile::smooth_plane, 1e3), 1e-2 * hyperbolic_rate(RhoProfile::smooth_plane, 1.0));
  EXPECT_GT(hyperbolic_rate(RhoProfile::half_plane, 1e3), 0.1);
  EXPECT_EQ(hyperbolic_rate(RhoProfile::comparison, 7.0), 0.1);
  EXPECT_THROW(hyperbolic_rate(RhoProfile::half_plane, 0.0), std::invalid_argument);
}

TEST(Toy, ActiveScalarIntervalBlowsUpCircleDoesNot) {
  const std::size_t n = 256;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = 1.0 + 0.5 * std::sin(M_PI * static_cast<double>(k) / (n - 1));
  const auto a = active_scalar_evolve(w, Domain::interval, 5.0);
  EXPECT_TRUE(a.blew_up);
  ASSERT_TRUE(a.t_blowup.has_value());
  EXPECT_LT(*a.t_blowup, 5.0);

  for (std::size_t k = 0; k < n; ++k) w[k] = std::sin(2.0 * M_PI * static_cast<double>(k) / n);
  const auto b = active_scalar_evolve(w, Domain::circle, 5.0);
  EXPECT_FALSE(b.blew_up);
  for (double s : b.sup_omega) EXPECT_LT(s, 1.5);
}

TEST(Toy, ActiveScalarRejectsBadData) {
  std::vector<double> w(64, 1.0);
  EXPECT_THROW(active_scalar_evolve(w, Domain::circle, 1.0), ConfigError);
  EXPECT_THROW(active_scalar_evolve(std::vector<double>(4, 0.0), Domain::interval, 1.0), ConfigError);
  EXPECT_THROW(parse_domain("torus"), ConfigError);
}

TEST(Toy, SquareNonlinearityKeepsExactProfile) {
  // 1/(1+z) solves the unperturbed problem and f^2 keeps it stationary, so
  // g only absorbs the discretization error.
  const OdeToyResult r = ode_selfsimilar_solve(0.05, Nonlinearity::square, 1e-8);
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.norm_x, 1e-5);
}

TEST(Toy, TransportPerturbationIsOrderEpsilon) {
  std::vector<double> ratio;
  for (double e : {0.01, 0.05}) {
    const OdeToyResult r = ode_selfsimilar_solve(e, Nonlinearity::transport, 1e-10);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.matching_defect, 1e-6);
    EXPECT_GT(r.coercivity, 0.0);
    EXPECT_TRUE(r.apriori_holds);
    ratio.push_back(r.norm_x / e);
  }
  EXPECT_LT(std::max(ratio[0], ratio[1]), 10.0);
  EXPECT_LT(std::abs(ratio[0] - ratio[1]) / ratio[0], 0.25);
}

TEST(Toy, ZeroEpsilonGivesZeroPerturbation) {
  const OdeToyResult r = ode_selfsimilar_solve(0.0, Nonlinearity::mixed, 1e-10);
  EXPECT_LT(r.norm_x, 1e-10);
  EXPECT_EQ(r.mu, 0.0);
}

TEST(Toy, LargeEpsilonIsRejected) {
  EXPECT_THROW(ode_selfsimilar_solve(0.2, Nonlinearity::transport, 1e-8), ConfigError);
  EXPECT_THROW(parse_nonlinearity("cubic"), ConfigError);
  EXPECT_THROW(parse_profile("flat"), ConfigError);
}
