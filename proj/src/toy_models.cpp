#include "blowup/toy_models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/FFT>

#include "blowup/grid.hpp"

namespace blowup::toy {

namespace {

constexpr double pi = std::numbers::pi;

struct Velocity1D {
  std::vector<double> u, ux;
};

Velocity1D poisson_circle(const std::vector<double>& w) {
  const std::size_t n = w.size();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, w);
  std::vector<std::complex<double>> us(n), uxs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long kk = k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    if (kk == 0) continue;
    const double kd = static_cast<double>(kk);
    us[k] = spec[k] / (kd * kd);
    // The Nyquist mode has no consistent sign for the derivative.
    if (2 * k != n) uxs[k] = std::complex<double>(0.0, kd) * us[k];
  }
  Velocity1D v;
  fft.inv(v.u, us);
  fft.inv(v.ux, uxs);
  return v;
}

Velocity1D poisson_interval(const std::vector<double>& w, double dx) {
  const std::size_t n = w.size();
  Velocity1D v{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  // -u'' = w on interior nodes, u = 0 at both walls; Thomas algorithm for
  // the constant stencil (-1, 2, -1).
  const std::size_t m = n - 2;
  std::vector<double> cp(m), d(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double b = 2.0 - (k > 0 ? cp[k - 1] * -1.0 : 0.0);
    cp[k] = -1.0 / b;
    d[k] = (w[k + 1] * dx * dx + (k > 0 ? d[k - 1] : 0.0)) / b;
  }
  for (std::size_t k = m; k-- > 0;) v.u[k + 1] = d[k] - (k + 1 < m ? cp[k] * v.u[k + 2] : 0.0);
  const double inv = 0.5 / dx;
  for (std::size_t k = 1; k + 1 < n; ++k) v.ux[k] = (v.u[k + 1] - v.u[k - 1]) * inv;
  v.ux[0] = (-3.0 * v.u[0] + 4.0 * v.u[1] - v.u[2]) * inv;
  v.ux[n - 1] = (3.0 * v.u[n - 1] - 4.0 * v.u[n - 2] + v.u[n - 3]) * inv;
  return v;
}

// -u w_x + w u_x with second-order upwinding of w_x.
std::vector<double> active_rhs(const std::vector<double>& w, Domain dom, double dx, Velocity1D* vel_out) {
  const std::size_t n = w.size();
  Velocity1D vel = dom == Domain::circle ? poisson_circle(w) : poisson_interval(w, dx);
  auto at = [&](long k) {
    if (dom == Domain::circle) return w[static_cast<std::size_t>((k % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n))];
    return w[static_cast<std::size_t>(std::clamp(k, 0L, static_cast<long>(n) - 1))];
  };
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long kk = static_cast<long>(k);
    const double u = vel.u[k];
    double wx = 0.0;
    const bool interior = dom == Domain::circle || (k >= 2 && k + 2 < n);
    if (u > 0.0) {
      wx = interior ? (3.0 * w[k] - 4.0 * at(kk - 1) + at(kk - 2)) / (2.0 * dx)
                    : (k > 0 ? (w[k] - w[k - 1]) / dx : 0.0);
    } else if (u < 0.0) {
      wx = interior ? (-3.0 * w[k] + 4.0 * at(kk + 1) - at(kk + 2)) / (2.0 * dx)
                    : (k + 1 < n ? (w[k + 1] - w[k]) / dx : 0.0);
    }
    r[k] = -u * wx + w[k] * vel.ux[k];
  }
  if (vel_out) *vel_out = std::move(vel);
  return r;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Domain parse_domain(const std::string& s) {
  if (s == "circle") return Domain::circle;
  if (s == "interval") return Domain::interval;
  throw ConfigError("unknown domain '" + s + "' (expected circle or interval)");
}

ActiveScalarTrajectory active_scalar_evolve(const std::vector<double>& omega0, Domain domain, double t_end,
                                            const ActiveScalarOptions& opt) {
  const std::size_t n = omega0.size();
  if (n < 8) throw ConfigError("active scalar needs at least 8 samples");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  const double dx = domain == Domain::circle ? 2.0 * pi / static_cast<double>(n) : pi / static_cast<double>(n - 1);
  if (domain == Domain::circle) {
    double mean = 0.0;
    for (double x : omega0) mean += x;
    mean /= static_cast<double>(n);
    if (std::abs(mean) > 1e-12 * std::max(1.0, sup_abs(omega0)))
      throw ConfigError("circle data must have zero mean");
  }

  ActiveScalarTrajectory tr;
  std::vector<double> w = omega0;
  double t = 0.0, next_record = 0.0;
  const long max_steps = 20'000'000;
  for (long step = 0; step < max_steps; ++step) {
    Velocity1D vel;
    const std::vector<double> k1 = active_rhs(w, domain, dx, &vel);
    const double sup = sup_abs(w);
    if (t >= next_record - 1e-12) {
      tr.t.push_back(t);
      tr.sup_omega.push_back(sup);
      next_record += opt.record_dt;
    }
    if (!std::isfinite(sup) || sup > opt.blowup_threshold) {
      tr.blew_up = true;
      tr.t_blowup = t;
      break;
    }
    if (t >= t_end) break;
    const double umax = sup_abs(vel.u), uxmax = sup_abs(vel.ux);
    double dt = t_end - t;
    if (umax > 0.0) dt = std::min(dt, opt.cfl * dx / umax);
    if (uxmax > 0.0) dt = std::min(dt, opt.growth_step / uxmax);
    dt = std::min(dt, std::max(next_record - t, 1e-15));

    // Strong-stability-preserving third-order Runge-Kutta.
    std::vector<double> w1(n), w2(n);
    for (std::size_t k = 0; k < n; ++k) w1[k] = w[k] + dt * k1[k];
    const std::vector<double> k2 = active_rhs(w1, domain, dx, nullptr);
    for (std::size_t k = 0; k < n; ++k) w2[k] = 0.75 * w[k] + 0.25 * (w1[k] + dt * k2[k]);
    const std::vector<double> k3 = active_rhs(w2, domain, dx, nullptr);
    for (std::size_t k = 0; k < n; ++k) w[k] = w[k] / 3.0 + 2.0 / 3.0 * (w2[k] + dt * k3[k]);
    t += dt;
  }
  tr.omega = w;
  tr.t_end_reached = t;
  return tr;
}

RhoProfile parse_profile(const std::string& s) {
  if (s == "smooth_plane" || s == "case1") return RhoProfile::smooth_plane;
  if (s == "half_plane" || s == "case2") return RhoProfile::half_plane;
  if (s == "comparison") return RhoProfile::comparison;
  throw ConfigError("unknown profile '" + s + "'");
}

std::string to_string(RhoProfile p) {
  switch (p) {
    case RhoProfile::smooth_plane: return "smooth_plane";
    case RhoProfile::half_plane: return "half_plane";
    case RhoProfile::comparison: return "comparison";
  }
  return "unknown";
}

double cutoff(double s) {
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double a = psi(2.0 - s), b = psi(s - 1.0);
  return a / (a + b);
}

double hyperbolic_rate(RhoProfile profile, double mu) {
  if (profile == RhoProfile::comparison) return 0.1;
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  using boost::math::quadrature::gauss_kronrod;
  const bool smooth = profile == RhoProfile::smooth_plane;
  const double mu2 = mu * mu;

  // Polar coordinates in the rescaled variables, then tan(phi) = u / mu^2,
  // which removes the mu-dependent concentration of the angular factor.
  auto radial = [&](double c, double s) {
    const double m = std::max(c, s);
    auto f = [&](double r) { return (smooth ? r : 1.0) * cutoff(r * c) * cutoff(r * s); };
    const double inner = smooth ? 0.5 / (m * m) : 1.0 / m;
    return inner + boost::math::quadrature::gauss<double, 30>::integrate(f, 1.0 / m, 2.0 / m);
  };
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double t = u / mu2;
    const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
    const double q = 1.0 + u * u;
    if (smooth) return u * u / (mu2 * q * q * (1.0 + t * t)) * radial(c, s);
    return u / (q * q * std::sqrt(1.0 + t * t)) * radial(c, s);
  };
  return gauss_kronrod<double, 31>::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 12, 1e-10);
}

MuTrajectory hyperbolic_mu_ode(RhoProfile profile, double t_end, double dt, double overflow_mu) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("dt and t_end must be positive");
  MuTrajectory tr;
  double mu = 1.0, M = 0.0, t = 0.0;
  tr.t_nodes.push_back(t);
  tr.mu_vals.push_back(mu);
  tr.mu_integral.push_back(M);
  tr.mu_max = mu;
  auto rhs = [&](double m, double Mi, double& dm, double& dMi) {
    dm = m * Mi * hyperbolic_rate(profile, m);
    dMi = m;
  };
  while (t < t_end) {
    const double I = hyperbolic_rate(profile, mu);  // mu' / (mu int mu)
    const double rate = M * I;
    if (mu >= 1.0 && M > 0.0) tr.min_growth_ratio = tr.min_growth_ratio ? std::min(*tr.min_growth_ratio, I) : I;
    double h = std::min(dt, t_end - t);
    if (rate > 0.0) h = std::min(h, 0.02 / rate);
    if (M > 0.0) h = std::min(h, 0.02 * M / mu);
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(mu, M, a1, b1);
    rhs(mu + 0.5 * h * a1, M + 0.5 * h * b1, a2, b2);
    rhs(mu + 0.5 * h * a2, M + 0.5 * h * b2, a3, b3);
    rhs(mu + h * a3, M + h * b3, a4, b4);
    mu += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    M += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    t += h;
    tr.t_nodes.push_back(t);
    tr.mu_vals.push_back(mu);
    tr.mu_integral.push_back(M);
    tr.mu_max = std::max(tr.mu_max, mu);
    if (!std::isfinite(mu) || mu > overflow_mu) {
      tr.blew_up = true;
      tr.t_star = t;
      break;
    }
  }
  return tr;
}

double comparison_blowup_time(double c) { return pi / std::sqrt(2.0 * c); }

Nonlinearity parse_nonlinearity(const std::string& s) {
  if (s == "square") return Nonlinearity::square;
  if (s == "transport") return Nonlinearity::transport;
  if (s == "mixed") return Nonlinearity::mixed;
  throw ConfigError("unknown nonlinearity '" + s + "'");
}

std::string to_string(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::square: return "square";
    case Nonlinearity::transport: return "transport";
    case Nonlinearity::mixed: return "mixed";
  }
  return "unknown";
}

namespace {

struct Toy1D {
  std::vector<double> xi, z, fs, dz_fs, wq, w;  // wq: dz quadrature weights
  double h = 0.0;

  Toy1D(const OdeToyOptions& o) {
    const std::size_t n = o.n;
    h = (o.xi_max - o.xi_min) / static_cast<double>(n - 1);
    xi.resize(n);
    z.resize(n);
    fs.resize(n);
    dz_fs.resize(n);
    wq.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      xi[i] = o.xi_min + h * static_cast<double>(i);
      z[i] = std::exp(xi[i]);
      fs[i] = 1.0 / (1.0 + z[i]);
      dz_fs[i] = -z[i] / ((1.0 + z[i]) * (1.0 + z[i]));
      wq[i] = h * z[i] * (i == 0 || i + 1 == n ? 0.5 : 1.0);
      w[i] = (1.0 + z[i]) * (1.0 + z[i]) / (z[i] * z[i]);
    }
  }
  std::size_t n() const { return z.size(); }

  std::vector<double> dz(const std::vector<double>& f) const {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double inv = 0.5 / h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    return d;
  }
  // Outward transport: backward-biased.
  std::vector<double> dz_up(const std::vector<double>& f) const {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    for (std::size_t i = 2; i < n; ++i) d[i] = (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h);
    d[1] = (f[1] - f[0]) / h;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    return d;
  }
  double dot_x(const std::vector<double>& a, const std::vector<double>& b) const {
    const std::vector<double> da = dz(a), db = dz(b);
    double s = 0.0;
    for (std::size_t i = 0; i < n(); ++i) s += (a[i] * b[i] + da[i] * db[i]) * w[i] * w[i] * wq[i];
    return s;
  }
  double norm_x(const std::vector<double>& a) const { return std::sqrt(std::max(dot_x(a, a), 0.0)); }
};

std::vector<double> apply_N(Nonlinearity kind, const std::vector<double>& f, const std::vector<double>& dzf) {
  std::vector<double> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    switch (kind) {
      case Nonlinearity::square: r[i] = f[i] * f[i]; break;
      case Nonlinearity::transport: r[i] = f[i] * dzf[i]; break;
      case Nonlinearity::mixed: r[i] = f[i] * f[i] - f[i] * dzf[i]; break;
    }
  }
  return r;
}

// Value and z-derivative at z = 0 from the quadratic through the first three
// nodes.
void origin_jet(const std::vector<double>& z, const std::vector<double>& v, double& v0, double& v1) {
  const double z0 = z[0], z1 = z[1], z2 = z[2];
  const double d01 = (v[1] - v[0]) / (z1 - z0), d12 = (v[2] - v[1]) / (z2 - z1);
  const double c2 = (d12 - d01) / (z2 - z0);
  v1 = d01 - c2 * (z0 + z1);
  v0 = v[0] - v1 * z0 - c2 * z0 * z0;
}

struct ToyEval {
  std::vector<double> rhs;     // -L g + RHS, with the inflow row slaved
  std::vector<double> forcing;  // RHS without g^2
  std::vector<double> Lg;
  double mu = 0.0, k = 0.0, n0 = 0.0;
};

ToyEval toy_eval(const Toy1D& d, const std::vector<double>& g, double eps, Nonlinearity kind) {
  const std::size_t n = d.n();
  std::vector<double> F(n), dF(n);
  const std::vector<double> dg = d.dz(g), dg_up = d.dz_up(g);
  for (std::size_t i = 0; i < n; ++i) {
    F[i] = d.fs[i] + g[i];
    dF[i] = d.dz_fs[i] + dg[i];
  }
  const std::vector<double> N = apply_N(kind, F, dF);
  double n0 = 0.0, n1 = 0.0;
  origin_jet(d.z, N, n0, n1);
  ToyEval e;
  e.n0 = n0;
  e.mu = eps * n0;
  e.k = -e.mu - eps * n1;  // mu + lambda + lambda mu
  e.rhs.resize(n);
  e.forcing.resize(n);
  e.Lg.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    e.Lg[i] = g[i] + dg[i] - 2.0 * g[i] / (1.0 + d.z[i]);
    e.forcing[i] = -e.mu * d.fs[i] - e.k * d.dz_fs[i] - e.k * g[i] - e.k * dg[i] + eps * N[i];
    // The radial transport of L and of the k z g_z term are upwinded together.
    const double lin = (1.0 + e.k) * dg_up[i] + g[i] - 2.0 * g[i] / (1.0 + d.z[i]) + e.k * g[i];
    e.rhs[i] = -lin - e.mu * d.fs[i] - e.k * d.dz_fs[i] + eps * N[i] + g[i] * g[i];
  }
  const double q = (d.z[0] / d.z[1]) * (d.z[0] / d.z[1]);
  e.rhs[0] = q * e.rhs[1];
  return e;
}

}  // namespace

OdeToyResult ode_selfsimilar_solve(double epsilon, Nonlinearity kind, double tol, const OdeToyOptions& opt) {
  if (std::abs(epsilon) > 0.1) throw ConfigError("epsilon must satisfy |epsilon| <= 0.1");
  if (opt.n < 16) throw ConfigError("toy grid needs at least 16 nodes");
  const Toy1D d(opt);
  const std::size_t n = d.n();
  std::vector<double> g(n, 0.0);
  OdeToyResult res;
  const auto max_steps = static_cast<long>(std::ceil(opt.tau_max / opt.dtau));
  ToyEval e = toy_eval(d, g, epsilon, kind);
  for (long step = 0; step < max_steps; ++step) {
    res.residual = d.norm_x(e.rhs);
    res.iterations = static_cast<int>(step);
    if (res.residual < tol) {
      res.converged = true;
      break;
    }
    const double h = opt.dtau;
    auto stage = [&](const std::vector<double>& base, const std::vector<double>& k, double s) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = base[i] + s * k[i];
      return y;
    };
    const std::vector<double> k1 = e.rhs;
    const std::vector<double> k2 = toy_eval(d, stage(g, k1, 0.5 * h), epsilon, kind).rhs;
    const std::vector<double> k3 = toy_eval(d, stage(g, k2, 0.5 * h), epsilon, kind).rhs;
    const std::vector<double> k4 = toy_eval(d, stage(g, k3, h), epsilon, kind).rhs;
    for (std::size_t i = 0; i < n; ++i) g[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (double x : g)
      if (!std::isfinite(x)) throw std::runtime_error("toy relaxation produced non-finite values");
    e = toy_eval(d, g, epsilon, kind);
  }
  if (!res.converged) res.residual = d.norm_x(e.rhs);

  res.z = d.z;
  res.g = g;
  res.mu = e.mu;
  res.lambda = (e.k - e.mu) / (1.0 + e.mu);
  res.norm_x = d.norm_x(g);
  res.matching_defect = std::abs(e.mu - epsilon * e.n0);

  const double gg = res.norm_x * res.norm_x;
  res.coercivity = gg > 0.0 ? d.dot_x(e.Lg, g) / gg : 0.0;
  std::vector<double> g2(n);
  for (std::size_t i = 0; i < n; ++i) g2[i] = g[i] * g[i];
  res.cubic_pairing = std::abs(d.dot_x(g2, g));
  const double fa = d.norm_x(e.forcing);
  res.forcing_constant = epsilon != 0.0 ? fa / (std::abs(epsilon) * (1.0 + res.norm_x)) : 0.0;
  const double lhs = res.coercivity * gg;
  const double rhs = res.forcing_constant * std::abs(epsilon) * (res.norm_x + gg) + res.cubic_pairing;
  res.apriori_holds = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
  return res;
}

}  // namespace blowup::toy
