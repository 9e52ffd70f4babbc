#include "blowup/fundamental_model.hpp"

#include "blowup/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace blowup {

namespace {

double sup_l12(const Field& f, TailModel tail, RadialProfile* out = nullptr) {
  const RadialProfile m = theta_moment(f, kernel_values(*f.grid));
  const RadialProfile l = l12_from_moment(m, tail);
  double s = l12_at_zero(l, m);
  for (double x : l.v) s = std::max(s, x);
  if (out) *out = l;
  return s;
}

Field rhs(const Field& f, TailModel tail) { return scale_radial(f, l12(f, tail)); }

}  // namespace

double blowup_time(const Field& f0, TailModel tail) {
  const double s = sup_l12(f0, tail);
  return s > 0.0 ? 2.0 / s : std::numeric_limits<double>::infinity();
}

Field evolve_exact(const Field& f0, double t, TailModel tail) {
  RadialProfile l;
  const double s = sup_l12(f0, tail, &l);
  const double ts = s > 0.0 ? 2.0 / s : std::numeric_limits<double>::infinity();
  if (t >= ts) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "t = %.6g is at or beyond the blow-up time %.6g", t, ts);
    throw BlowupReached(buf, ts);
  }
  Field out = f0;
  for (std::size_t i = 0; i < f0.nr(); ++i) {
    const double d = 1.0 - 0.5 * t * l[i];
    const double fac = 1.0 / (d * d);
    for (std::size_t j = 0; j < f0.nt(); ++j) out(i, j) *= fac;
  }
  return out;
}

FMState evolve_numeric(const Field& f0, double dt, double t_end, TailModel tail, double growth_cap) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  FMState st;
  st.f = f0;
  st.t = 0.0;
  st.l12_at_zero = l12_at_zero(f0, tail);
  st.t_hist.push_back(0.0);
  st.l12_hist.push_back(st.l12_at_zero);
  const double cap = growth_cap * std::max(linf(f0), std::numeric_limits<double>::min());

  const auto n = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long s = 0; s < n; ++s) {
    const double h = std::min(dt, t_end - st.t);
    const Field& y = st.f;
    const Field k1 = rhs(y, tail);
    Field y2 = y;
    axpy(0.5 * h, k1, y2);
    const Field k2 = rhs(y2, tail);
    Field y3 = y;
    axpy(0.5 * h, k2, y3);
    const Field k3 = rhs(y3, tail);
    Field y4 = y;
    axpy(h, k3, y4);
    const Field k4 = rhs(y4, tail);
    Field next = y;
    for (std::size_t k = 0; k < next.v.size(); ++k)
      next.v[k] += h / 6.0 * (k1.v[k] + 2.0 * k2.v[k] + 2.0 * k3.v[k] + k4.v[k]);

    if (!next.finite()) throw InstabilityError("non-finite state in model integration", st.t);
    st.f = std::move(next);
    st.t = (s + 1 == n) ? t_end : st.t + h;
    st.l12_at_zero = l12_at_zero(st.f, tail);
    st.t_hist.push_back(st.t);
    st.l12_hist.push_back(st.l12_at_zero);
    if (linf(st.f) > cap) {
      st.halted = true;
      break;
    }
  }
  return st;
}

double profile_residual(const AngularProfiles& gamma_choice, const GridPtr& g,
                        const std::function<double(double)>& radial) {
  const auto& gam = gamma_choice.gamma_vals;
  const auto kern = kernel_values(*g);
  double c = 0.0;
  for (std::size_t j = 0; j < g->nt(); ++j) c += gam[j] * kern[j] * g->theta_quad_weights[j];
  if (std::abs(c) < 1e-14) throw InvariantError("degenerate normalization: int Gamma K = 0");

  auto rad = radial ? radial : [](double z) { return 2.0 * z / ((1.0 + z) * (1.0 + z)); };
  Field f(g, Bc::dirichlet_theta);
  for (std::size_t i = 0; i < g->nr(); ++i) {
    const double r = rad(g->z[i]);
    for (std::size_t j = 0; j < g->nt(); ++j) f(i, j) = gam[j] / c * r;
  }
  // The profile decays like 1/z, which the inverse-z tail captures.
  const RadialProfile l = l12(f, TailModel::inverse_z);
  const Field dz = diff(f, Dir::d_z);
  double res = 0.0;
  for (std::size_t i = 0; i < g->nr(); ++i)
    for (std::size_t j = 0; j < g->nt(); ++j)
      res = std::max(res, std::abs(f(i, j) + dz(i, j) - l[i] * f(i, j)));
  return res;
}

}  // namespace blowup
