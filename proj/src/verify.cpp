#include "blowup/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "json.hpp"

#include "blowup/norms.hpp"
#include "blowup/operators.hpp"

namespace blowup {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Field broadcast(const RadialProfile& r, const GridPtr& g) {
  Field f(g, Bc::free);
  for (std::size_t i = 0; i < g->nr(); ++i)
    for (std::size_t j = 0; j < g->nt(); ++j) f(i, j) = r[i];
  return f;
}

RadialProfile random_radial(const GridPtr& g, std::uint64_t seed, std::size_t index, int modes) {
  std::mt19937_64 rng = sample_rng(seed, index);
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) a[static_cast<std::size_t>(m)] = nd(rng) / (m + 1.0);
  return sample_radial(g, [&](double z) {
    double s = 0.0;
    for (int m = 0; m < modes; ++m) s += a[static_cast<std::size_t>(m)] * std::pow(1.0 + z, -4.0 - 0.25 * m);
    return z * z * s;
  });
}

// Integral over the grid of f * h * ang(theta) * rad(z).
double grid_integral(const Field& f, const Field& h, const std::function<double(double)>& ang, bool weighted_w) {
  const Grid2D& g = *f.grid;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    double q = g.radial_quad_weights[i];
    if (weighted_w) {
      const double w = (1.0 + g.z[i]) * (1.0 + g.z[i]) / (g.z[i] * g.z[i]);
      q *= w * w;
    }
    double row = 0.0;
    for (std::size_t j = 0; j < g.nt(); ++j) row += f(i, j) * h(i, j) * ang(g.theta[j]) * g.theta_quad_weights[j];
    sum += row * q;
  }
  return sum;
}

struct Measure {
  std::string id;
  double bound;
  bool lower;
  bool asserted;
  SamplerOptions sampler;
  // Returns the ratio for one sample.
  std::function<double(const Field& f, std::size_t index)> ratio;
};

PropertyReport run_measure(const Measure& m, const GridPtr& g, const Params& p, std::size_t n, std::uint64_t seed) {
  PropertyReport r;
  r.property_id = m.id;
  r.alpha = p.alpha;
  r.n_samples = n;
  r.bound = m.bound;
  r.lower = m.lower;
  r.asserted = m.asserted;
  r.seed = seed;
  r.worst_ratio = m.lower ? inf : 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Field f = random_admissible_field(g, p, seed, k, m.sampler);
    const double q = m.ratio(f, k);
    if (!std::isfinite(q)) finite = false;
    r.worst_ratio = m.lower ? std::min(r.worst_ratio, q) : std::max(r.worst_ratio, q);
  }
  if (n == 0) r.worst_ratio = 0.0;
  if (!m.asserted) r.pass = finite;
  else if (m.lower) r.pass = finite && (m.bound == 0.0 ? r.worst_ratio > 0.0 : r.worst_ratio >= m.bound);
  else r.pass = finite && r.worst_ratio <= m.bound;
  return r;
}

Params unit_constants(Params p) {
  p.ip = InnerProductConstants::scaled(0.0);
  return p;
}

double rayleigh(const Field& f, int k, const Params& p) {
  const Field lf = apply_linear(LinearOpKind::L_gamma_T, f, p);
  return hk_inner(lf, f, k, p) / hk_inner(f, f, k, p);
}

std::vector<PropertyReport> sharp_hardy_reports(const GridPtr& g, const Params& p, std::size_t n,
                                                std::uint64_t seed) {
  const double eta = p.eta;
  const double c1 = 1.0 / ((eta + 1.0) * (eta + 1.0));
  Measure grid_form{"sharp_hardy", 1.0, false, true, {}, [&](const Field& f, std::size_t) {
                      const Field ft = partial_theta(f);
                      auto s = [](double t) { return std::sin(2.0 * t); };
                      const double lhs = grid_integral(f, f, [&](double t) { return std::pow(s(t), -2.0 - eta); }, false);
                      const double a = grid_integral(ft, ft, [&](double t) { return std::pow(s(t), -eta); }, false);
                      const double h1 = grid_integral(f, f, [](double) { return 1.0; }, false) +
                                        grid_integral(ft, ft, [](double) { return 1.0; }, false);
                      return lhs / (c1 * a + 100.0 * h1);
                    }};
  std::vector<PropertyReport> out{run_measure(grid_form, g, p, n, seed)};

  // Extremal family sin^beta on [0, pi]; the ratio must increase towards
  // the sharp constant without exceeding it.
  PropertyReport ex;
  ex.property_id = "sharp_hardy_extremal";
  ex.alpha = p.alpha;
  ex.bound = 4.0 / ((eta + 1.0) * (eta + 1.0));
  ex.seed = seed;
  const std::size_t levels = std::min<std::size_t>(std::max<std::size_t>(n, 1), 10);
  ex.n_samples = levels;
  bool monotone = true, below = true;
  double prev = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    const double beta = 0.5 * (1.0 + eta) + 0.05 * std::ldexp(1.0, -static_cast<int>(k));
    const double r = sharp_hardy_extremal_ratio(beta, eta);
    if (r < prev) monotone = false;
    if (r > ex.bound * (1.0 + 1e-9)) below = false;
    prev = r;
    ex.worst_ratio = std::max(ex.worst_ratio, r);
  }
  ex.pass = monotone && below;
  out.push_back(ex);
  return out;
}

std::vector<PropertyReport> run_one(const std::string& suite, const GridPtr& g, const Params& p, std::size_t n,
                                    std::uint64_t seed) {
  const double sg = std::sqrt(p.gamma - 1.0);
  const Params pu = unit_constants(p);
  SamplerOptions projected;
  projected.project = true;

  if (suite == "hardy_weight") {
    // L12(f) w is square integrable only when L12(f)(0) = 0.
    Measure m{suite, 4.0, false, true, projected, [&](const Field& f, std::size_t) {
                const Field l = broadcast(l12(f, p.tail), g);
                return weighted_l2(l, WeightSelector::w, p) / weighted_l2(f, WeightSelector::w, p);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "coercivity_L2") {
    Measure m{suite, 0.25 - 0.02, true, true, projected, [&](const Field& f, std::size_t) {
                const Field lf = apply_linear(LinearOpKind::L_gamma, f, p);
                return weighted_dot(lf, f, WeightSelector::w, p) / weighted_dot(f, f, WeightSelector::w, p);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "coercivity_H1" || suite == "coercivity_H4") {
    const int k = suite == "coercivity_H1" ? 1 : 4;
    Measure m{suite, 0.0, true, true, projected, [&, k](const Field& f, std::size_t) { return rayleigh(f, k, p); }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "angular_hardy") {
    Measure m{suite, 10.0, false, true, {}, [&](const Field& f, std::size_t) {
                const Field ft = partial_theta(f);
                const double lhs = grid_integral(f, f, [](double t) { return std::pow(std::sin(2.0 * t), -2.0); }, true);
                return lhs / grid_integral(ft, ft, [](double) { return 1.0; }, true);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "second_order_hardy") {
    Measure m{suite, 0.5, false, true, {}, [&](const Field& f, std::size_t) {
                Field q = f;
                for (std::size_t i = 0; i < g->nr(); ++i)
                  for (std::size_t j = 0; j < g->nt(); ++j) q(i, j) /= g->z[i];
                const Field dq = partial_z_pow(q, 1), f2 = partial_z_pow(f, 2);
                auto one = [](double) { return 1.0; };
                return grid_integral(dq, dq, one, false) / grid_integral(f2, f2, one, false);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "sharp_hardy") return sharp_hardy_reports(g, p, n, seed);
  if (suite == "ejdg_hardy") {
    // sin(2 theta) exp(-kappa xi) int_{-inf}^{xi} exp(kappa s) f ds, kappa = 5/alpha,
    // exact for f linear on each cell and f ~ z below the first node.
    Measure m{suite, 100.0, false, true, {}, [&](const Field&, std::size_t k) {
                const RadialProfile f = random_radial(g, seed, k, 4);
                const double kappa = 5.0 / p.alpha, h = g->dxi;
                const double E = std::exp(-kappa * h);
                const double c1 = -std::expm1(-kappa * h) / kappa;
                const double c2 = h / kappa - c1 / kappa;
                RadialProfile J(g);
                J[0] = f[0] / (kappa + 1.0);
                for (std::size_t i = 0; i + 1 < g->nr(); ++i)
                  J[i + 1] = E * J[i] + f[i] * c1 + (f[i + 1] - f[i]) / h * c2;
                Field t2(g);
                for (std::size_t i = 0; i < g->nr(); ++i)
                  for (std::size_t j = 0; j < g->nt(); ++j) t2(i, j) = std::sin(2.0 * g->theta[j]) * J[i];
                return hk_norm(t2, 2, p) / (p.alpha * hk_norm(broadcast(f, g), 2, p));
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "embedding") {
    Measure m{suite, inf, false, false, {}, [&](const Field& f, std::size_t) {
                return linf(f) * sg / hk_norm(f, 2, p);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "product") {
    Measure m{suite, inf, false, false, {}, [&](const Field& f, std::size_t k) {
                const Field h = random_admissible_field(g, p, seed ^ 0x9e3779b97f4a7c15ULL, k);
                return hk_norm(hadamard(f, h), 4, p) * sg / (hk_norm(f, 4, p) * hk_norm(h, 4, p));
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "transport") {
    Measure m{suite, inf, false, false, {}, [&](const Field& f, std::size_t k) {
                const Field h = random_admissible_field(g, p, seed ^ 0x9e3779b97f4a7c15ULL, k);
                const double a = std::abs(hk_inner(hadamard(f, diff(h, Dir::d_theta)), h, 4, pu));
                const double b = std::abs(hk_inner(hadamard(f, diff(h, Dir::d_z)), h, 4, pu));
                const double nh = hk_norm(h, 4, p);
                return (a + b) * sg / (hk_norm(f, 4, p) * nh * nh);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "division") {
    Measure m{suite, inf, false, false, {}, [&](const Field& f, std::size_t) {
                Field q(g, Bc::free);
                for (std::size_t i = 0; i < g->nr(); ++i)
                  for (std::size_t j = 0; j < g->nt(); ++j) q(i, j) = f(i, j) / std::sin(2.0 * g->theta[j]);
                Field ft = partial_theta(f);
                ft.bc = Bc::free;
                return hk_norm(q, 4, p) / hk_norm(ft, 4, p);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "l12_bounded") {
    Measure m{suite, inf, false, false, projected, [&](const Field& f, std::size_t) {
                return hk_norm(broadcast(l12(f, p.tail), g), 4, p) / hk_norm(f, 4, p);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  if (suite == "w_to_h") {
    Measure m{suite, inf, false, false, {}, [&](const Field& f, std::size_t) {
                Field s = f;
                for (std::size_t i = 0; i < g->nr(); ++i) {
                  const double z = g->z[i];
                  for (std::size_t j = 0; j < g->nt(); ++j) s(i, j) *= std::pow(1.0 + z, 3.0) / (z * z);
                }
                return hk_norm(f, 4, p) / wlinf_norm(s, 4, p);
              }};
    return {run_measure(m, g, p, n, seed)};
  }
  throw ConfigError("unknown suite '" + suite + "'");
}

}  // namespace

Field random_admissible_field(const GridPtr& g, const Params& p, std::uint64_t seed, std::size_t index,
                              const SamplerOptions& opt) {
  std::mt19937_64 rng = sample_rng(seed, index);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(opt.delta_min, opt.delta_max);
  const double delta = ud(rng);
  const auto M = static_cast<std::size_t>(opt.radial_modes), N = static_cast<std::size_t>(opt.angular_modes);
  std::vector<double> a(M * N);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < N; ++n) a[m * N + n] = nd(rng) / static_cast<double>(m + n + 1);

  std::vector<double> rad(M * g->nr()), ang(N * g->nt());
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t i = 0; i < g->nr(); ++i) {
      const double z = g->z[i];
      rad[m * g->nr() + i] = z * z * std::pow(1.0 + z, -4.0 - 0.25 * static_cast<double>(m));
    }
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t j = 0; j < g->nt(); ++j) {
      const double t = g->theta[j];
      ang[n * g->nt() + j] = std::sin(2.0 * static_cast<double>(n + 1) * t) * std::pow(std::sin(2.0 * t), delta);
    }
  Field f(g);
  for (std::size_t i = 0; i < g->nr(); ++i)
    for (std::size_t j = 0; j < g->nt(); ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) s += a[m * N + n] * rad[m * g->nr() + i] * ang[n * g->nt() + j];
      f(i, j) = s;
    }
  if (opt.project) {
    const double before = std::abs(l12_at_zero(f, p.tail));
    f = project_P(f, p);
    const double after = std::abs(l12_at_zero(f, p.tail));
    if (after > 1e-10 * std::max(1.0, before))
      throw InvariantError("projected sample keeps L12(f)(0) = " + std::to_string(after));
  }
  if (!f.finite() || linf(f) == 0.0) throw InvariantError("degenerate random sample");
  return f;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "hardy_weight", "coercivity_L2", "coercivity_H1", "coercivity_H4", "angular_hardy",
      "second_order_hardy", "sharp_hardy", "ejdg_hardy", "embedding", "product",
      "transport", "division", "l12_bounded", "w_to_h"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return name == "all" || std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<PropertyReport> run_suite(const std::string& suite, const GridPtr& g, const Params& p,
                                      std::size_t n_samples, std::uint64_t seed) {
  if (!is_suite(suite)) throw ConfigError("unknown suite '" + suite + "'");
  if (suite != "all") return run_one(suite, g, p, n_samples, seed);
  std::vector<PropertyReport> out;
  for (const auto& s : suite_names()) {
    auto r = run_one(s, g, p, n_samples, seed);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

double sharp_hardy_extremal_ratio(double beta, double eta) {
  const double pw = 2.0 * beta - 2.0 - eta;
  if (!(pw > -1.0)) throw std::invalid_argument("extremal exponent must exceed (1+eta)/2");
  // Both integrands are symmetric about pi/2. The theta^pw singularity is
  // integrated exactly; tanh-sinh handles the O(theta^(pw+2)) remainder.
  const double half = 0.5 * std::numbers::pi;
  const double sing = std::pow(half, pw + 1.0) / (pw + 1.0);
  auto rel = [pw](double t) { return t > 0.0 ? std::expm1(pw * std::log(std::sin(t) / t)) : 0.0; };
  boost::math::quadrature::tanh_sinh<double> q;
  const double num = sing + q.integrate([&](double t) { return std::pow(t, pw) * rel(t); }, 0.0, half);
  const double den = sing + q.integrate(
                                [&](double t) {
                                  const double s = std::sin(t);
                                  // theta^pw ((sin/theta)^pw cos^2 - 1), with cos^2 - 1 = -sin^2
                                  return std::pow(t, pw) * (rel(t) * (1.0 - s * s) - s * s);
                                },
                                0.0, half);
  return num / (beta * beta * den);
}

CalibrationResult calibrate_constants(const GridPtr& g, const Params& p, std::size_t n_samples,
                                      std::uint64_t seed) {
  SamplerOptions opt;
  opt.project = true;
  std::vector<Field> samples;
  for (std::size_t k = 0; k < n_samples; ++k) samples.push_back(random_admissible_field(g, p, seed, k, opt));
  CalibrationResult res;
  for (int step = 0; step <= 10; ++step) {
    Params q = p;
    q.ip = InnerProductConstants::scaled(0.1 * step);
    double mn = inf;
    for (const Field& f : samples) mn = std::min(mn, rayleigh(f, 1, q));
    if (mn > 0.0) {
      res.scale = 0.1 * step;
      res.min_quotient = mn;
      res.found = true;
      return res;
    }
    res.min_quotient = mn;
  }
  return res;
}

void write_jsonl(std::ostream& os, const PropertyReport& r) {
  nlohmann::ordered_json j;
  j["property_id"] = r.property_id;
  j["alpha"] = r.alpha;
  j["n_samples"] = r.n_samples;
  j["worst_ratio"] = r.worst_ratio;
  if (std::isfinite(r.bound)) j["bound"] = r.bound;
  else j["bound"] = nullptr;
  j["kind"] = r.lower ? "lower" : "upper";
  j["asserted"] = r.asserted;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  os << j.dump() << '\n';
}

}  // namespace blowup
