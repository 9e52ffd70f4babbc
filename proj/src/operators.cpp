#include "blowup/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace blowup {

std::vector<double> kernel_values(const Grid2D& g) {
  std::vector<double> k(g.nt());
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double s = std::sin(g.theta[j]), c = std::cos(g.theta[j]);
    k[j] = 3.0 * s * c * c;
  }
  return k;
}

std::vector<double> gamma_values(double alpha, const Grid2D& g) {
  std::vector<double> r(g.nt());
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double s = std::sin(g.theta[j]), c = std::cos(g.theta[j]);
    r[j] = std::pow(s * c * c, alpha / 3.0);
  }
  return r;
}

AngularProfiles angular_profiles(const Params& p, const Grid2D& g, bool validate) {
  AngularProfiles a;
  a.gamma_vals = gamma_values(p.alpha, g);
  a.kernel_vals = kernel_values(g);
  a.c = 0.0;
  a.kernel_mass = 0.0;
  for (std::size_t j = 0; j < g.nt(); ++j) {
    a.c += a.gamma_vals[j] * a.kernel_vals[j] * g.theta_quad_weights[j];
    a.kernel_mass += a.kernel_vals[j] * g.theta_quad_weights[j];
  }
  double defect = 0.0;
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double d = a.gamma_vals[j] / a.c - a.kernel_vals[j];
    defect += d * d * g.theta_quad_weights[j];
    // sin(2t) Gamma' = (alpha/3) Gamma (2 cos^2 - 4 sin^2)
    const double s = std::sin(g.theta[j]), c = std::cos(g.theta[j]);
    const double ratio = std::abs(2.0 * c * c - 4.0 * s * s) / 3.0;
    a.transport_ratio = std::max(a.transport_ratio, ratio);
  }
  a.l2_defect = std::sqrt(defect);
  if (validate) {
    char buf[160];
    if (a.transport_ratio > 2.0) {
      std::snprintf(buf, sizeof buf, "angular transport bound violated: ratio %.6g > 2", a.transport_ratio);
      throw InvariantError(buf);
    }
    if (a.l2_defect > 0.7) {
      std::snprintf(buf, sizeof buf, "angular L2 defect %.6g exceeds 0.7", a.l2_defect);
      throw InvariantError(buf);
    }
    if (a.c < 0.1 || a.c > 10.0) {
      std::snprintf(buf, sizeof buf, "normalization c = %.6g outside [0.1, 10]", a.c);
      throw InvariantError(buf);
    }
  }
  return a;
}

namespace {

// Weights integrating the degree-5 interpolant through nodes offset - o,
// ..., 5 - o over the unit cell [0, 1].
struct CellRule {
  std::array<std::array<double, 6>, 5> w{};
  CellRule() {
    const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    for (int o = 0; o < 5; ++o) {
      for (int m = 0; m < 6; ++m) {
        double acc = 0.0;
        for (int q = 0; q < 3; ++q) {
          double l = 1.0;
          for (int n = 0; n < 6; ++n)
            if (n != m) l *= (gx[q] - (n - o)) / static_cast<double>(m - n);
          acc += gw[q] * l;
        }
        w[static_cast<std::size_t>(o)][static_cast<std::size_t>(m)] = acc;
      }
    }
  }
};

const CellRule& cell_rule() {
  static const CellRule r;
  return r;
}

}  // namespace

RadialProfile l12_from_moment(const RadialProfile& m, TailModel tail) {
  const std::size_t n = m.size();
  RadialProfile out(m.grid);
  const double h = m.grid->dxi;
  const auto& rule = cell_rule();
  double acc = tail == TailModel::inverse_z ? m[n - 1] : 0.0;
  out[n - 1] = acc;
  for (std::size_t k = n - 1; k-- > 0;) {
    const std::size_t s = std::min(k >= 2 ? k - 2 : 0, n - 6);
    const auto& w = rule.w[k - s];
    double cell = 0.0;
    for (std::size_t q = 0; q < 6; ++q) cell += w[q] * m[s + q];
    acc += h * cell;
    out[k] = acc;
  }
  return out;
}

RadialProfile l12(const Field& f, TailModel tail) {
  return l12_from_moment(theta_moment(f, kernel_values(*f.grid)), tail);
}

double l12_at_zero(const RadialProfile& l12_vals, const RadialProfile& moment) {
  return l12_vals[0] + moment[0];
}

double l12_at_zero(const Field& f, TailModel tail) {
  const RadialProfile m = theta_moment(f, kernel_values(*f.grid));
  return l12_at_zero(l12_from_moment(m, tail), m);
}

Field f_star(const Params& p, const GridPtr& g) {
  const std::vector<double> gam = gamma_values(p.alpha, *g);
  Field f(g, Bc::dirichlet_theta);
  for (std::size_t i = 0; i < g->nr(); ++i) {
    const double z = g->z[i];
    const double rad = 2.0 * z / ((1.0 + z) * (1.0 + z));
    for (std::size_t j = 0; j < g->nt(); ++j) f(i, j) = p.alpha * gam[j] / p.c * rad;
  }
  return f;
}

Field projector_profile(const Params& p, const GridPtr& g) {
  const std::vector<double> gam = gamma_values(p.alpha, *g);
  Field f(g, Bc::dirichlet_theta);
  for (std::size_t i = 0; i < g->nr(); ++i) {
    const double z = g->z[i];
    const double rad = 2.0 * z * z / std::pow(1.0 + z, 3);
    for (std::size_t j = 0; j < g->nt(); ++j) f(i, j) = gam[j] / p.c * rad;
  }
  return f;
}

Field project_P(const Field& f, const Params& p) {
  const Field prof = projector_profile(p, f.grid);
  // Normalize by the discrete value so that L12(P f)(0) vanishes to rounding.
  const double norm = l12_at_zero(prof, p.tail);
  Field out = f;
  axpy(-l12_at_zero(f, p.tail) / norm, prof, out);
  out.bc = f.bc;
  return out;
}

RadialProfile apply_L_radial(const RadialProfile& r) {
  RadialProfile out = diff_z(r);
  for (std::size_t i = 0; i < r.size(); ++i) out[i] += r[i] - 2.0 * r[i] / (1.0 + r.grid->z[i]);
  return out;
}

namespace {

Field linear_impl(LinearOpKind kind, const Field& f, const Params& p, bool upwind) {
  const Grid2D& g = *f.grid;
  // Radial transport runs outwards, angular transport towards theta = 0.
  Field out = upwind ? diff_upwind(f, Dir::d_z, true) : diff(f, Dir::d_z);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double a = 1.0 - 2.0 / (1.0 + g.z[i]);
    for (std::size_t j = 0; j < g.nt(); ++j) out(i, j) += a * f(i, j);
  }
  out.bc = f.bc;
  if (kind == LinearOpKind::L) return out;

  const std::vector<double> gam = gamma_values(p.alpha, g);
  const RadialProfile l = l12(f, p.tail);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double z = g.z[i];
    const double a = 2.0 * z / (p.c * (1.0 + z) * (1.0 + z)) * l[i];
    for (std::size_t j = 0; j < g.nt(); ++j) out(i, j) -= a * gam[j];
  }
  if (kind == LinearOpKind::L_gamma) return out;

  Field tr = upwind ? diff_upwind(f, Dir::d_theta, false) : diff(f, Dir::d_theta);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double a = 3.0 / (1.0 + g.z[i]);
    for (std::size_t j = 0; j < g.nt(); ++j) tr(i, j) *= a;
  }
  return out - project_P(tr, p);
}

}  // namespace

Field apply_linear(LinearOpKind kind, const Field& f, const Params& p) { return linear_impl(kind, f, p, false); }

Field apply_linear_upwind(LinearOpKind kind, const Field& f, const Params& p) {
  return linear_impl(kind, f, p, true);
}

}  // namespace blowup
