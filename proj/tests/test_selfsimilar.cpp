#include <gtest/gtest.h>

#include <cmath>

#include "blowup/norms.hpp"
#include "blowup/operators.hpp"
#include "blowup/selfsimilar.hpp"

using namespace blowup;

namespace {

GridPtr grid(std::size_t nr = 128, std::size_t nt = 32) { return build_grid(nr, nt, -10.0, 10.0); }

}  // namespace

TEST(SelfSimilar, ProfileSelfInteractionMatchesClosedForm) {
  const auto g = grid(256, 64);
  const Params p = make_params(0.1, *g);
  const NonlinearTerms t = nonlinear_terms(Field(g), p);
  const Field exact = n0_closed_form(p, g);
  EXPECT_LT(linf(t.N0 - exact), 2e-2 * linf(exact));
}

TEST(SelfSimilar, ZeroPerturbationHasNoModulationTerm) {
  const auto g = grid(64, 16);
  const Params p = make_params(0.1, *g);
  const NonlinearTerms t = nonlinear_terms(Field(g), p);
  EXPECT_EQ(linf(t.Nstar), 0.0);
  EXPECT_DOUBLE_EQ(t.lambda, -2.0 * t.mu / (t.mu + 1.0));
}

TEST(SelfSimilar, RelaxationRhsIsProjected) {
  const auto g = grid(64, 16);
  const Params p = make_params(0.1, *g);
  const BslSolver s(g, p.alpha, p.tail);
  const Field g0 = sample(g, [](double z, double t) { return 1e-3 * std::sin(2 * t) * z / std::pow(1 + z, 3); });
  const Field r = relax_rhs(project_P(g0, p), p, s);
  EXPECT_LT(std::abs(l12_at_zero(r, p.tail)), 1e-14);
}

TEST(SelfSimilar, RelaxationConvergesWithSmallModulation) {
  const auto g = grid(128, 32);
  const Params p = make_params(0.1, *g);
  RelaxOptions o;
  const ModulationState s = relax(g, p, o);
  ASSERT_EQ(s.status, RelaxStatus::converged) << s.message;
  const double ratio = hk_norm(s.g, 4, p) / (p.alpha * p.alpha);
  EXPECT_GT(ratio, 1.0);
  EXPECT_LT(ratio, 1e3);
  EXPECT_LE(std::abs(s.mu), 10.0 * p.alpha);
  EXPECT_LE(std::abs(s.lambda), 10.0 * p.alpha);
  for (const auto& h : s.history) EXPECT_LE(std::abs(h.l12_zero), 1e-8);
  EXPECT_LE(stationary_residual(s, p), 10.0 * o.tol);
  const auto rate = fitted_decay_rate(s);
  ASSERT_TRUE(rate.has_value());
  EXPECT_GT(*rate, 0.0);

  const BlowupSolution b = blowup_solution(s, p);
  EXPECT_DOUBLE_EQ(b.t_star, 1.0 / (1.0 + s.mu));
  EXPECT_DOUBLE_EQ(b.xi_exponent, (1.0 + s.lambda) / p.alpha);
  EXPECT_LE(b.lower_bound, 0.0);
}

TEST(SelfSimilar, EnvelopeOfZeroIsZero) {
  const auto g = grid(64, 16);
  const Params p = make_params(0.1, *g);
  const EnvelopeReport r = nonlinear_envelope(Field(g), p);
  EXPECT_EQ(r.envelope, 0.0);
  EXPECT_EQ(r.constant, 0.0);
}

TEST(SelfSimilar, InterpolationReproducesNodes) {
  const auto g = grid(32, 16);
  const Params p = make_params(0.1, *g);
  const Field F = f_star(p, g);
  for (std::size_t i = 0; i < g->nr(); i += 5)
    for (std::size_t j = 0; j < g->nt(); j += 3)
      EXPECT_NEAR(interpolate_profile(F, g->z[i], g->theta[j]), F(i, j), 1e-13);
  EXPECT_EQ(interpolate_profile(F, 1.0, 0.0), 0.0);
  EXPECT_EQ(interpolate_profile(F, 0.0, 0.5), 0.0);
  // Continuations: linear in z below the grid, 1/z above it.
  const double zlo = g->z.front() / 4, zhi = g->z.back() * 4;
  EXPECT_NEAR(interpolate_profile(F, zlo, g->theta[3]), F(0, 3) / 4, 1e-15);
  EXPECT_NEAR(interpolate_profile(F, zhi, g->theta[3]), F(g->nr() - 1, 3) / 4, 1e-15);
}

TEST(SelfSimilar, PhysicalFieldScalesSelfSimilarly) {
  const auto g = grid(64, 16);
  const Params p = make_params(0.1, *g);
  BlowupSolution b;
  b.F = f_star(p, g);
  b.mu = 0.02;
  b.lambda = -0.05;
  b.t_star = 1.0 / (1.0 + b.mu);
  const double theta = 0.6, rho = 0.3;
  EXPECT_NEAR(assemble_physical(b, p, 0.0, rho, theta), interpolate_profile(b.F, std::pow(rho, p.alpha), theta), 1e-15);
  const double t = 0.5 * b.t_star, d = 1.0 - (1.0 + b.mu) * t;
  const double z = std::pow(rho, p.alpha) / std::pow(d, 1.0 + b.lambda);
  EXPECT_NEAR(assemble_physical(b, p, t, rho, theta), interpolate_profile(b.F, z, theta) / d, 1e-13);
  EXPECT_THROW(assemble_physical(b, p, b.t_star, rho, theta), BlowupReachedPhysical);
  EXPECT_THROW(assemble_physical(b, p, 0.0, -1.0, theta), ConfigError);
}
