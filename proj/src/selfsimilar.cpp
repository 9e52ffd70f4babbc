#include "blowup/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "blowup/norms.hpp"
#include "blowup/operators.hpp"

namespace blowup {

namespace {

// cos(2t) - sin^2(t) = cos^2 t - 2 sin^2 t
double angular_mix(double t) {
  const double s = std::sin(t), c = std::cos(t);
  return c * c - 2.0 * s * s;
}

// Analytic theta and z derivatives of F_*; differencing Gamma near theta = 0
// would resolve the sin^{alpha/3} cusp badly.
struct FStarDerivs {
  Field f, dtheta, Dtheta, Dz;
};

FStarDerivs f_star_derivs(const Params& p, const GridPtr& g) {
  FStarDerivs d{f_star(p, g), Field(g, Bc::free), Field(g, Bc::dirichlet_theta), Field(g, Bc::dirichlet_theta)};
  for (std::size_t j = 0; j < g->nt(); ++j) {
    const double t = g->theta[j];
    const double s = std::sin(t), c = std::cos(t);
    const double log_slope = p.alpha / 3.0 * (c / s - 2.0 * s / c);  // Gamma'/Gamma
    for (std::size_t i = 0; i < g->nr(); ++i) {
      const double z = g->z[i];
      const double f = d.f(i, j);
      d.dtheta(i, j) = f * log_slope;
      d.Dtheta(i, j) = f * 2.0 * p.alpha / 3.0 * angular_mix(t);
      d.Dz(i, j) = f * (1.0 - z) / (1.0 + z);
    }
  }
  return d;
}

}  // namespace

Field n0_closed_form(const Params& p, const GridPtr& g) {
  const std::vector<double> gam = gamma_values(p.alpha, *g);
  Field out(g, Bc::dirichlet_theta);
  const double a2 = p.alpha * p.alpha;
  for (std::size_t i = 0; i < g->nr(); ++i) {
    const double z = g->z[i];
    const double rad = 8.0 * a2 / (p.c * (1.0 + z)) * z * z / std::pow(1.0 + z, 3);
    for (std::size_t j = 0; j < g->nt(); ++j) out(i, j) = rad * angular_mix(g->theta[j]) * gam[j];
  }
  return out;
}

NonlinearTerms nonlinear_terms(const Field& g, const Params& p) {
  const BslSolver solver(g.grid, p.alpha, p.tail);
  return nonlinear_terms(g, p, solver);
}

NonlinearTerms nonlinear_terms(const Field& g, const Params& p, const BslSolver& solver) {
  const GridPtr& grid = g.grid;
  const Grid2D& gr = *grid;
  const std::size_t nr = gr.nr(), nt = gr.nt();
  const double a = p.alpha;

  const FStarDerivs fs = f_star_derivs(p, grid);
  const Field F = fs.f + g;
  const Field dth_F = fs.dtheta + partial_theta(g);
  const Field Dth_F = fs.Dtheta + diff(g, Dir::d_theta);
  const Field Dz_g = diff(g, Dir::d_z);
  const Field Dz_F = fs.Dz + Dz_g;

  const RadialProfile l_fs = l12(fs.f, p.tail);
  const RadialProfile l_g = l12(g, p.tail);
  const RadialProfile l_F = l_fs + l_g;
  const RadialProfile mF = theta_moment(F, kernel_values(gr));  // (F, K) in theta

  NonlinearTerms t;
  t.N0 = n0_closed_form(p, grid);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      const double mix = angular_mix(gr.theta[j]);
      t.N0(i, j) += l_g[i] * g(i, j) / a + 1.5 / a * l_g[i] * Dth_F(i, j) - mix * l_g[i] * Dz_F(i, j) -
                    mix * l_fs[i] * Dz_g(i, j);
    }

  // Phi solves the elliptic problem for F; the remainder removes its
  // leading singular part.
  EllipticSolution es = solve_bsl(solver, F);
  if (!es.psi.finite()) throw std::runtime_error("elliptic solve produced non-finite values");
  if (es.residual_norm > p.tol_solver) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "elliptic residual %.3g above tolerance", es.residual_norm);
    throw std::runtime_error(buf);
  }
  t.phi = es.psi;
  Field rem = es.psi;
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) rem(i, j) -= 0.25 / a * std::sin(2.0 * gr.theta[j]) * l_F[i];
  const Velocity vel = velocity_functionals(rem, p);

  t.N = Field(grid, Bc::dirichlet_theta);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      const double th = gr.theta[j];
      const double s = std::sin(th);
      t.N(i, j) = 2.0 * vel.R(i, j) * F(i, j) - 2.0 * vel.U(i, j) * dth_F(i, j) - 2.0 * a * vel.V(i, j) * Dz_F(i, j) -
                  a * mF[i] * Dth_F(i, j) - 2.0 * a * s * s * mF[i] * F(i, j);
    }

  t.mu_bar = l12_at_zero(t.N0, p.tail) + l12_at_zero(t.N, p.tail);
  Field tr = diff(g, Dir::d_theta);
  for (std::size_t i = 0; i < nr; ++i) {
    const double c = 3.0 / (1.0 + gr.z[i]);
    for (std::size_t j = 0; j < nt; ++j) tr(i, j) *= c;
  }
  t.mu = (t.mu_bar - l12_at_zero(tr, p.tail)) / (2.0 * a);
  if (!(t.mu > -1.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "modulation degenerate: mu = %.6g <= -1", t.mu);
    throw ModulationDegeneracy(buf);
  }
  t.lambda = -2.0 * t.mu / (t.mu + 1.0);
  const double k = t.mu + t.lambda + t.mu * t.lambda;
  t.Nstar = Field(grid, Bc::dirichlet_theta);
  for (std::size_t q = 0; q < t.Nstar.v.size(); ++q) t.Nstar.v[q] = -t.mu * g.v[q] - k * Dz_g.v[q];
  return t;
}

namespace {

// xi_min is an inflow boundary for the z d/dz transport. The one-sided
// closure there is unstable, so the first row follows the second under
// quadratic vanishing at the origin.
void inflow_closure(Field& r) {
  const Grid2D& g = *r.grid;
  const double q = (g.z[0] / g.z[1]) * (g.z[0] / g.z[1]);
  for (std::size_t j = 0; j < g.nt(); ++j) r(0, j) = q * r(1, j);
}

}  // namespace

std::string to_string(RelaxStatus s) {
  switch (s) {
    case RelaxStatus::converged: return "converged";
    case RelaxStatus::max_tau: return "max_tau";
    case RelaxStatus::diverged: return "diverged";
    case RelaxStatus::unstable: return "unstable";
  }
  return "unknown";
}

Field relax_rhs(const Field& g, const Params& p, const BslSolver& solver, NonlinearTerms* terms) {
  NonlinearTerms t = nonlinear_terms(g, p, solver);
  Field r = t.N0 + t.N + t.Nstar - apply_linear_upwind(LinearOpKind::L_gamma_T, g, p);
  r.bc = Bc::dirichlet_theta;
  inflow_closure(r);
  r = project_P(r, p);
  if (terms) *terms = std::move(t);
  return r;
}

namespace {

Field rk4_step(const Field& g, double h, const Params& p, const BslSolver& solver, const Field& k1) {
  Field y = g;
  axpy(0.5 * h, k1, y);
  const Field k2 = relax_rhs(y, p, solver);
  y = g;
  axpy(0.5 * h, k2, y);
  const Field k3 = relax_rhs(y, p, solver);
  y = g;
  axpy(h, k3, y);
  const Field k4 = relax_rhs(y, p, solver);
  Field next = g;
  for (std::size_t q = 0; q < next.v.size(); ++q)
    next.v[q] += h / 6.0 * (k1.v[q] + 2.0 * k2.v[q] + 2.0 * k3.v[q] + k4.v[q]);
  next.bc = Bc::dirichlet_theta;
  return project_P(next, p);
}

}  // namespace

ModulationState relax(const GridPtr& grid, const Params& p, const RelaxOptions& opt) {
  if (!(p.alpha > 0.0 && p.alpha <= 0.25)) throw ConfigError("relaxation needs alpha in (0, 0.25]");
  if (!(opt.dtau > 0.0) || !(opt.tau_max > 0.0)) throw ConfigError("dtau and tau_max must be positive");
  const BslSolver solver(grid, p.alpha, p.tail);
  const double bootstrap = std::pow(p.alpha, 1.75);

  ModulationState s;
  s.g = Field(grid, Bc::dirichlet_theta);
  const auto n_steps = static_cast<long>(std::ceil(opt.tau_max / opt.dtau - 1e-9));
  for (long step = 0;; ++step) {
    NonlinearTerms t;
    const Field k1 = relax_rhs(s.g, p, solver, &t);
    s.mu = t.mu;
    s.lambda = t.lambda;
    s.mu_bar = t.mu_bar;
    s.dtau_norm = hk_norm(k1, 3, p);

    const bool done = s.dtau_norm < opt.tol;
    const bool last = step >= n_steps;
    if (step % std::max(opt.record_every, 1) == 0 || done || last) {
      HistoryRow row;
      row.tau = s.tau;
      row.h4 = hk_norm(s.g, 4, p);
      row.mu = s.mu;
      row.lambda = s.lambda;
      row.residual = s.dtau_norm;
      row.l12_zero = l12_at_zero(s.g, p.tail);
      row.dissipation = hk_inner(apply_linear(LinearOpKind::L_gamma_T, s.g, p), s.g, 4, p);
      s.history.push_back(row);
      if (row.h4 > bootstrap) s.guardrail_breached = true;
      if (row.h4 > opt.divergence_factor * bootstrap) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "|g|_H4 = %.4g exceeds %.0f * alpha^(7/4) at tau = %.4g", row.h4,
                      opt.divergence_factor, s.tau);
        s.status = RelaxStatus::diverged;
        s.message = buf;
        return s;
      }
    }
    if (done) {
      s.status = RelaxStatus::converged;
      return s;
    }
    if (last) {
      s.status = RelaxStatus::max_tau;
      s.message = "tau_max reached before the tolerance";
      return s;
    }

    const double h = std::min(opt.dtau, opt.tau_max - s.tau);
    Field next = rk4_step(s.g, h, p, solver, k1);
    if (!next.finite()) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "non-finite state at tau = %.4g; retry with dtau below %.3g", s.tau,
                    0.5 * opt.dtau);
      s.status = RelaxStatus::unstable;
      s.message = buf;
      return s;
    }
    s.g = std::move(next);
    s.tau = step + 1 == n_steps ? opt.tau_max : s.tau + h;
  }
}

double stationary_residual(const ModulationState& s, const Params& p) {
  const BslSolver solver(s.g.grid, p.alpha, p.tail);
  return hk_norm(relax_rhs(s.g, p, solver), 2, p);
}

std::optional<double> fitted_decay_rate(const ModulationState& s) {
  const auto& h = s.history;
  if (h.size() < 4) return std::nullopt;
  const std::size_t start = h.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = start; k < h.size(); ++k) {
    if (!(h[k].residual > 0.0)) continue;
    const double x = h[k].tau, y = std::log(h[k].residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return std::nullopt;
  const double den = static_cast<double>(n) * sxx - sx * sx;
  if (den <= 0.0) return std::nullopt;
  return -(static_cast<double>(n) * sxy - sx * sy) / den;
}

EnvelopeReport nonlinear_envelope(const Field& g, const Params& p) {
  const NonlinearTerms t = nonlinear_terms(g, p);
  EnvelopeReport r;
  r.lhs = std::abs(hk_inner(t.N0, g, 4, p)) + std::abs(hk_inner(t.N, g, 4, p)) + std::abs(hk_inner(t.Nstar, g, 4, p));
  const double n = hk_norm(g, 4, p);
  const double a = p.alpha;
  r.envelope = a * a * n + std::sqrt(a) * n * n + std::pow(a, -1.5) * n * n * n + std::pow(a, -2.5) * n * n * n * n;
  r.constant = r.envelope > 0.0 ? r.lhs / r.envelope : 0.0;
  return r;
}

BlowupSolution blowup_solution(const ModulationState& s, const Params& p) {
  BlowupSolution b;
  b.F = f_star(p, s.g.grid) + s.g;
  b.mu = s.mu;
  b.lambda = s.lambda;
  b.xi_exponent = (1.0 + s.lambda) / p.alpha;
  b.lower_bound = -linf(s.g);
  b.t_star = 1.0 / (1.0 + s.mu);
  return b;
}

double interpolate_profile(const Field& F, double z, double theta) {
  const Grid2D& g = *F.grid;
  const std::size_t nr = g.nr(), nt = g.nt();
  if (!(z > 0.0)) return 0.0;
  if (theta <= 0.0 || theta >= M_PI / 2) return 0.0;

  // Angular weights; beyond the outer nodes interpolate towards the
  // Dirichlet zero at the endpoint.
  auto at_radial = [&](std::size_t i) {
    if (theta <= g.theta[0]) return F(i, 0) * theta / g.theta[0];
    if (theta >= g.theta[nt - 1]) return F(i, nt - 1) * (M_PI / 2 - theta) / (M_PI / 2 - g.theta[nt - 1]);
    const double u = theta / g.dtheta - 0.5;
    const auto j = std::min(static_cast<std::size_t>(u), nt - 2);
    const double w = u - static_cast<double>(j);
    return (1.0 - w) * F(i, j) + w * F(i, j + 1);
  };

  const double xi = std::log(z);
  if (xi <= g.xi[0]) return at_radial(0) * z / g.z[0];
  if (xi >= g.xi[nr - 1]) return at_radial(nr - 1) * g.z[nr - 1] / z;
  const double u = (xi - g.xi[0]) / g.dxi;
  const auto i = std::min(static_cast<std::size_t>(u), nr - 2);
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * at_radial(i) + w * at_radial(i + 1);
}

double assemble_physical(const BlowupSolution& sol, const Params& p, double t, double rho, double theta) {
  const double d = 1.0 - (1.0 + sol.mu) * t;
  if (!(d > 0.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "t = %.6g is at or beyond the blow-up time %.6g", t, sol.t_star);
    throw BlowupReachedPhysical(buf, sol.t_star);
  }
  if (rho < 0.0) throw ConfigError("rho must be nonnegative");
  const double z = std::pow(rho, p.alpha) / std::pow(d, 1.0 + sol.lambda);
  return interpolate_profile(sol.F, z, theta) / d;
}

}  // namespace blowup
