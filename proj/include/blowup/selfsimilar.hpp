#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/elliptic.hpp"
#include "blowup/grid.hpp"
#include "blowup/params.hpp"

namespace blowup {

// Perturbation equation around F_* = alpha (Gamma/c) 2z/(1+z)^2 for the
// stationary self-similar system, with the time-dilation and scaling
// parameters mu, lambda fixed algebraically from g.

struct ModulationDegeneracy : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonlinearTerms {
  Field N0;
  Field N;
  Field Nstar;
  double mu = 0.0;
  double lambda = 0.0;
  double mu_bar = 0.0;  // L12(N0)(0) + L12(N)(0)
  Field phi;            // stream function of F_* + g
};

// The F_* self-interaction of N0 in closed form:
// 8 alpha^2 / (c (1+z)) (cos 2t - sin^2 t) z^2/(1+z)^3 Gamma.
Field n0_closed_form(const Params& p, const GridPtr& g);

NonlinearTerms nonlinear_terms(const Field& g, const Params& p);
NonlinearTerms nonlinear_terms(const Field& g, const Params& p, const BslSolver& solver);

struct RelaxOptions {
  double dtau = 0.01;
  double tau_max = 40.0;
  double tol = 1e-6;
  int record_every = 10;
  // The run stops as divergent once |g|_H4 exceeds this multiple of the
  // smallness threshold alpha^{7/4}.
  double divergence_factor = 1e4;
};

enum class RelaxStatus { converged, max_tau, diverged, unstable };
std::string to_string(RelaxStatus s);

struct HistoryRow {
  double tau = 0.0;
  double h4 = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double residual = 0.0;      // |d_tau g|_H3
  double l12_zero = 0.0;      // L12(g)(0)
  double dissipation = 0.0;   // (L_Gamma^T g, g)_H4
};

struct ModulationState {
  double mu = 0.0;
  double lambda = 0.0;
  double mu_bar = 0.0;
  double tau = 0.0;
  Field g;
  std::vector<HistoryRow> history;
  double dtau_norm = 0.0;
  RelaxStatus status = RelaxStatus::max_tau;
  bool guardrail_breached = false;  // |g|_H4 > alpha^{7/4} at some record
  std::string message;
};

// P(-L_Gamma^T g + N0 + N + N_*). Subtracting mu_bar (Gamma/c) 2z^2/(1+z)^3
// and projecting coincide up to the discrete normalization of P.
Field relax_rhs(const Field& g, const Params& p, const BslSolver& solver, NonlinearTerms* terms = nullptr);

// Explicit RK4 in pseudo-time from g = 0, re-projecting after every step.
ModulationState relax(const GridPtr& grid, const Params& p, const RelaxOptions& opt);

// |relax_rhs(g)|_H2 at the given state.
double stationary_residual(const ModulationState& s, const Params& p);

// Decay rate fitted to log |d_tau g|_H3 over the second half of the history.
std::optional<double> fitted_decay_rate(const ModulationState& s);

struct EnvelopeReport {
  double lhs = 0.0;       // |(N0,g)| + |(N,g)| + |(N_*,g)| in H4
  double envelope = 0.0;  // a^2|g| + sqrt(a)|g|^2 + a^{-3/2}|g|^3 + a^{-5/2}|g|^4
  double constant = 0.0;  // lhs / envelope
};
EnvelopeReport nonlinear_envelope(const Field& g, const Params& p);

struct BlowupSolution {
  Field F;
  double mu = 0.0;
  double lambda = 0.0;
  double xi_exponent = 0.0;  // (1 + lambda) / alpha
  double lower_bound = 0.0;  // -|g|_inf
  double t_star = 0.0;       // 1 / (1 + mu)
};

BlowupSolution blowup_solution(const ModulationState& s, const Params& p);

struct BlowupReachedPhysical : std::runtime_error {
  double t_star;
  BlowupReachedPhysical(const std::string& what, double ts) : std::runtime_error(what), t_star(ts) {}
};

// Omega(rho, theta, t) = F(z, theta) / (1 - (1+mu) t), z = rho^alpha / (1 - (1+mu) t)^{1+lambda}.
// F is interpolated linearly in (log z, theta); outside the radial range it
// is continued as F ~ z near the origin and F ~ 1/z at infinity.
double assemble_physical(const BlowupSolution& sol, const Params& p, double t, double rho, double theta);

// Bilinear interpolation of F at (z, theta) with the continuations above.
double interpolate_profile(const Field& F, double z, double theta);

}  // namespace blowup
