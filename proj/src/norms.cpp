#include "blowup/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blowup {

ConstantsMode parse_constants_mode(const std::string& s) {
  if (s == "paper") return ConstantsMode::paper;
  if (s == "calibrated") return ConstantsMode::calibrated;
  throw ConfigError("unknown constants mode: " + s);
}

std::string to_string(ConstantsMode m) { return m == ConstantsMode::paper ? "paper" : "calibrated"; }

InnerProductConstants InnerProductConstants::paper() { return {}; }

InnerProductConstants InnerProductConstants::scaled(double s) {
  InnerProductConstants c;
  c.dz = std::pow(10.0, s);
  c.l2_eta = std::pow(10.0, 10.0 * s);
  c.l2 = std::pow(10.0, 17.0 * s);
  c.theta = std::pow(10.0, 21.0 * s);
  return c;
}

double normalization_exact(double alpha) {
  const double p = 1.0 + alpha / 3.0;
  return 1.5 * std::beta(0.5 * (p + 1.0), p + 0.5);
}

Params make_params(double alpha, const Grid2D& g, ConstantsMode mode) {
  if (!(alpha > 0.0 && alpha <= 0.25)) throw ConfigError("alpha must lie in (0, 1/4]");
  Params p;
  p.alpha = alpha;
  p.gamma = 1.0 + alpha / 10.0;
  p.eta = 99.0 / 100.0;
  p.mode = mode;
  p.ip = mode == ConstantsMode::paper ? InnerProductConstants::paper() : InnerProductConstants::scaled(0.0);
  double c = 0.0;
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double s = std::sin(g.theta[j]), co = std::cos(g.theta[j]);
    const double sc2 = s * co * co;
    c += std::pow(sc2, alpha / 3.0) * 3.0 * sc2 * g.theta_quad_weights[j];
  }
  p.c = c;
  return p;
}

WeightSet WeightSet::make(const Grid2D& g, const Params& p) {
  WeightSet ws;
  ws.w.resize(g.nr());
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double z = g.z[i];
    ws.w[i] = (1.0 + z) * (1.0 + z) / (z * z);
  }
  ws.w_theta.resize(g.nt());
  ws.eta_weight.resize(g.nt());
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double s2 = std::sin(2.0 * g.theta[j]);
    ws.w_theta[j] = std::pow(s2, -0.5 * p.gamma);
    ws.eta_weight[j] = std::pow(s2, -0.5 * p.eta);
  }
  return ws;
}

namespace {

struct WeightTable {
  std::vector<double> radial;   // squared, times dz quadrature
  std::vector<double> angular;  // squared, times dtheta quadrature
};

WeightTable weight_table(const Grid2D& g, WeightSelector sel, const Params& p) {
  WeightTable t;
  t.radial = g.radial_quad_weights;
  t.angular = g.theta_quad_weights;
  const bool radial = sel == WeightSelector::w || sel == WeightSelector::W || sel == WeightSelector::w_eta;
  if (radial) {
    for (std::size_t i = 0; i < g.nr(); ++i) {
      const double z = g.z[i];
      const double w = (1.0 + z) * (1.0 + z) / (z * z);
      t.radial[i] *= w * w;
    }
  }
  double expo = 0.0;
  if (sel == WeightSelector::w_theta || sel == WeightSelector::W) expo = -p.gamma;
  if (sel == WeightSelector::w_eta) expo = -p.eta;
  if (expo != 0.0)
    for (std::size_t j = 0; j < g.nt(); ++j) t.angular[j] *= std::pow(std::sin(2.0 * g.theta[j]), expo);
  return t;
}

}  // namespace

double weighted_dot(const Field& f, const Field& g, WeightSelector weight, const Params& p) {
  require_same_grid(f, g);
  const Grid2D& gr = *f.grid;
  const WeightTable t = weight_table(gr, weight, p);
  const std::size_t nt = gr.nt();
  double sum = 0.0;
  for (std::size_t i = 0; i < gr.nr(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nt; ++j) row += f.v[i * nt + j] * g.v[i * nt + j] * t.angular[j];
    sum += row * t.radial[i];
  }
  return sum;
}

double weighted_l2(const Field& f, WeightSelector weight, const Params& p) {
  return std::sqrt(std::max(0.0, weighted_dot(f, f, weight, p)));
}

double linf(const Field& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double hk_norm(const Field& f, int k, const Params& p) {
  if (k < 0 || k > 4) throw std::invalid_argument("hk_norm supports orders 0..4");
  // dth[i] = D_theta^i f; mixed terms apply D_z afterwards.
  std::vector<Field> dth{f};
  for (int i = 1; i <= k; ++i) dth.push_back(diff(dth.back(), Dir::d_theta));

  double total = 0.0;
  Field dz = f;
  for (int i = 0; i <= k; ++i) {
    const double n = weighted_l2(dz, WeightSelector::w_eta, p);
    total += n * n;
    if (i < k) dz = diff(dz, Dir::d_z);
  }
  for (int i = 1; i <= k; ++i) {
    Field m = dth[static_cast<std::size_t>(i)];
    for (int j = 0; i + j <= k; ++j) {
      const double n = weighted_l2(m, WeightSelector::W, p);
      total += n * n;
      if (i + j < k) m = diff(m, Dir::d_z);
    }
  }
  return std::sqrt(total);
}

double wlinf_norm(const Field& f, int l, const Params& p) {
  if (l < 0 || l > 5) throw std::invalid_argument("wlinf_norm supports orders 0..5");
  const Grid2D& g = *f.grid;
  std::vector<double> ang(g.nt());
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double s2 = std::sin(2.0 * g.theta[j]);
    ang[j] = std::pow(s2, -p.alpha / 5.0) / (p.alpha + s2);
  }
  auto sup_term = [&](const Field& h, int k, bool angular) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
      const double rz = std::pow(g.z[i] + 1.0, k);
      for (std::size_t j = 0; j < g.nt(); ++j) {
        double v = std::abs(rz * h(i, j));
        if (angular) v *= ang[j];
        m = std::max(m, v);
      }
    }
    return m;
  };

  double total = 0.0;
  for (int k = 0; k <= l; ++k) total += sup_term(partial_z_pow(f, k), k, false);
  Field dth = f;
  for (int j = 1; j <= l; ++j) {
    dth = diff(dth, Dir::d_theta);
    for (int k = 0; k + j <= l; ++k) total += sup_term(partial_z_pow(dth, k), k, true);
  }
  return total;
}

namespace {

double h1_inner(const Field& f, const Field& g, const Params& p) {
  const auto& c = p.ip;
  const Field fz = diff(f, Dir::d_z), gz = diff(g, Dir::d_z);
  const Field ft = diff(f, Dir::d_theta), gt = diff(g, Dir::d_theta);
  return c.dz * weighted_dot(fz, gz, WeightSelector::w_eta, p) +
         c.l2_eta * weighted_dot(f, g, WeightSelector::w_eta, p) +
         c.l2 * weighted_dot(f, g, WeightSelector::w, p) +
         c.theta * weighted_dot(ft, gt, WeightSelector::W, p);
}

}  // namespace

double hk_inner(const Field& f, const Field& g, int k, const Params& p) {
  if (k < 1 || k > 4) throw std::invalid_argument("hk_inner supports orders 1..4");
  if (k == 1) return h1_inner(f, g, p);
  const auto ku = static_cast<std::size_t>(k);
  return hk_inner(f, g, k - 1, p) +
         p.ip.c1[ku] * hk_inner(diff(f, Dir::d_theta), diff(g, Dir::d_theta), k - 1, p) +
         p.ip.c2[ku] * hk_inner(diff(f, Dir::d_z), diff(g, Dir::d_z), k - 1, p);
}

}  // namespace blowup
