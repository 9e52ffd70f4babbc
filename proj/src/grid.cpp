#include "blowup/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace blowup {

GridPtr build_grid(std::size_t n_radial, std::size_t n_theta, double xi_min, double xi_max) {
  if (n_radial < 8 || n_theta < 8) throw ConfigError("grid needs at least 8 nodes per direction");
  if (!(xi_min < 0.0 && 0.0 < xi_max)) throw ConfigError("xi range must satisfy xi_min < 0 < xi_max");

  auto g = std::make_shared<Grid2D>();
  g->dxi = (xi_max - xi_min) / static_cast<double>(n_radial - 1);
  g->dtheta = 0.5 * std::numbers::pi / static_cast<double>(n_theta);

  g->xi.resize(n_radial);
  g->z.resize(n_radial);
  g->xi_quad_weights.assign(n_radial, g->dxi);
  g->radial_quad_weights.resize(n_radial);
  g->xi_quad_weights.front() *= 0.5;
  g->xi_quad_weights.back() *= 0.5;
  for (std::size_t i = 0; i < n_radial; ++i) {
    g->xi[i] = xi_min + g->dxi * static_cast<double>(i);
    if (i == n_radial - 1) g->xi[i] = xi_max;
    g->z[i] = std::exp(g->xi[i]);
    g->radial_quad_weights[i] = g->xi_quad_weights[i] * g->z[i];
  }

  g->theta.resize(n_theta);
  g->theta_quad_weights.assign(n_theta, g->dtheta);
  for (std::size_t j = 0; j < n_theta; ++j) g->theta[j] = (static_cast<double>(j) + 0.5) * g->dtheta;
  return g;
}

bool Field::finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid && (a.grid->nr() != b.grid->nr() || a.grid->nt() != b.grid->nt()))
    throw std::invalid_argument("fields live on different grids");
}

namespace {

// Ghost value beyond a theta endpoint. Dirichlet fields are odd about the
// endpoint, which sits half a cell outside the last node.
inline double theta_ghost(const Field& f, std::size_t i, bool low) {
  const std::size_t n = f.nt();
  if (f.bc == Bc::dirichlet_theta) return low ? -f(i, 0) : -f(i, n - 1);
  // Free fields: quadratic extrapolation.
  return low ? 3.0 * f(i, 0) - 3.0 * f(i, 1) + f(i, 2)
             : 3.0 * f(i, n - 1) - 3.0 * f(i, n - 2) + f(i, n - 3);
}

}  // namespace

Field partial_theta(const Field& f) {
  Field out(f.grid, f.bc);
  const std::size_t nr = f.nr(), nt = f.nt();
  const double inv = 0.5 / f.grid->dtheta;
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double lo = j == 0 ? theta_ghost(f, i, true) : f(i, j - 1);
      const double hi = j + 1 == nt ? theta_ghost(f, i, false) : f(i, j + 1);
      out(i, j) = (hi - lo) * inv;
    }
  }
  out.bc = Bc::free;
  return out;
}

Field partial_theta2(const Field& f) {
  Field out(f.grid, Bc::free);
  const std::size_t nr = f.nr(), nt = f.nt();
  const double inv = 1.0 / (f.grid->dtheta * f.grid->dtheta);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double lo = j == 0 ? theta_ghost(f, i, true) : f(i, j - 1);
      const double hi = j + 1 == nt ? theta_ghost(f, i, false) : f(i, j + 1);
      out(i, j) = (hi - 2.0 * f(i, j) + lo) * inv;
    }
  }
  return out;
}

namespace {

Field d_xi(const Field& f) {
  Field out(f.grid, f.bc);
  const std::size_t nr = f.nr(), nt = f.nt();
  const double inv = 0.5 / f.grid->dxi;
  for (std::size_t j = 0; j < nt; ++j) {
    out(0, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * inv;
    out(nr - 1, j) = (3.0 * f(nr - 1, j) - 4.0 * f(nr - 2, j) + f(nr - 3, j)) * inv;
  }
  for (std::size_t i = 1; i + 1 < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) out(i, j) = (f(i + 1, j) - f(i - 1, j)) * inv;
  return out;
}

}  // namespace

Field diff(const Field& f, Dir dir) {
  if (dir == Dir::d_z) return d_xi(f);
  Field out = partial_theta(f);
  const auto& th = f.grid->theta;
  for (std::size_t i = 0; i < f.nr(); ++i)
    for (std::size_t j = 0; j < f.nt(); ++j) out(i, j) *= std::sin(2.0 * th[j]);
  // sin(2 theta) vanishes at both endpoints.
  out.bc = Bc::dirichlet_theta;
  return out;
}

namespace {

// Value at theta index j in [-2, nt + 1], continuing past the endpoints by
// odd reflection (Dirichlet) or quadratic extrapolation (free).
double theta_ext(const Field& f, std::size_t i, long j) {
  const long n = static_cast<long>(f.nt());
  if (j >= 0 && j < n) return f(i, static_cast<std::size_t>(j));
  if (f.bc == Bc::dirichlet_theta) {
    const long m = j < 0 ? -1 - j : 2 * n - 1 - j;
    return -f(i, static_cast<std::size_t>(m));
  }
  const bool low = j < 0;
  const long k0 = low ? 0 : n - 1, s = low ? 1 : -1;
  const double d = static_cast<double>(low ? -j : j - (n - 1));
  const double f0 = f(i, static_cast<std::size_t>(k0)), f1 = f(i, static_cast<std::size_t>(k0 + s)),
               f2 = f(i, static_cast<std::size_t>(k0 + 2 * s));
  // Newton form through the three nearest nodes, evaluated at distance d.
  return f0 + d * (f0 - f1) + 0.5 * d * (d + 1.0) * (f0 - 2.0 * f1 + f2);
}

}  // namespace

Field diff_upwind(const Field& f, Dir dir, bool toward_high) {
  const std::size_t nr = f.nr(), nt = f.nt();
  Field out(f.grid, f.bc);
  if (dir == Dir::d_z) {
    const double h = f.grid->dxi;
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nt; ++j) {
        if (toward_high) {
          if (i >= 2) out(i, j) = (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * h);
          else if (i == 1) out(i, j) = (f(1, j) - f(0, j)) / h;
          else out(i, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * h);
        } else {
          if (i + 2 < nr) out(i, j) = (-3.0 * f(i, j) + 4.0 * f(i + 1, j) - f(i + 2, j)) / (2.0 * h);
          else if (i + 2 == nr) out(i, j) = (f(i + 1, j) - f(i, j)) / h;
          else out(i, j) = (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * h);
        }
      }
    return out;
  }
  const double h = f.grid->dtheta;
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      const long jj = static_cast<long>(j);
      const double d = toward_high
                           ? (3.0 * f(i, j) - 4.0 * theta_ext(f, i, jj - 1) + theta_ext(f, i, jj - 2)) / (2.0 * h)
                           : (-3.0 * f(i, j) + 4.0 * theta_ext(f, i, jj + 1) - theta_ext(f, i, jj + 2)) / (2.0 * h);
      out(i, j) = std::sin(2.0 * f.grid->theta[j]) * d;
    }
  out.bc = Bc::dirichlet_theta;
  return out;
}

namespace {

// Below this z each pass divides O(1) values by z, so rounding grows like
// (dxi z)^{-k}; derivatives there are continued from larger z instead,
// which assumes the field is smooth in z at the origin.
constexpr double kContinuationCut = 0.02;

// Replaces out(i, .) for i < first by the Lagrange polynomial in z through
// the given source nodes.
void continue_in_z(Field& out, std::size_t first, const std::vector<std::size_t>& src) {
  const auto& z = out.grid->z;
  for (std::size_t i = 0; i < first; ++i) {
    std::vector<double> l(src.size(), 1.0);
    for (std::size_t a = 0; a < src.size(); ++a)
      for (std::size_t b = 0; b < src.size(); ++b)
        if (a != b) l[a] *= (z[i] - z[src[b]]) / (z[src[a]] - z[src[b]]);
    for (std::size_t j = 0; j < out.nt(); ++j) {
      double v = 0.0;
      for (std::size_t a = 0; a < src.size(); ++a) v += l[a] * out(src[a], j);
      out(i, j) = v;
    }
  }
}

}  // namespace

Field partial_z_pow(const Field& f, int k) {
  const Grid2D& g = *f.grid;
  const std::size_t nr = g.nr();
  // Cubic continuation through nodes near z_c, 2 z_c, 4 z_c, 8 z_c.
  const auto cut = static_cast<std::size_t>(std::lower_bound(g.z.begin(), g.z.end(), kContinuationCut) - g.z.begin());
  const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::log(2.0) / g.dxi)));
  const bool cubic = cut >= 2 && cut + 3 * step < nr;

  Field out = f;
  for (int m = 0; m < k; ++m) {
    out = d_xi(out);
    for (std::size_t i = 0; i < nr; ++i) {
      const double iz = 1.0 / g.z[i];
      for (std::size_t j = 0; j < out.nt(); ++j) out(i, j) *= iz;
    }
    // The one-sided stencil error at the first two nodes is also amplified
    // by 1/z; continue them from nodes 2..4.
    if (!cubic && nr >= 5) continue_in_z(out, 2, {2, 3, 4});
  }
  // Noise from the small-z nodes travels one node per pass, so the source
  // nodes above the cut stay clean. Continuing once at the end avoids a kink
  // at the cut that later passes would amplify.
  if (cubic && k > 0) continue_in_z(out, cut, {cut, cut + step, cut + 2 * step, cut + 3 * step});
  return out;
}

RadialProfile diff_z(const RadialProfile& r) {
  RadialProfile out(r.grid);
  const std::size_t n = r.size();
  const double inv = 0.5 / r.grid->dxi;
  out[0] = (-3.0 * r[0] + 4.0 * r[1] - r[2]) * inv;
  out[n - 1] = (3.0 * r[n - 1] - 4.0 * r[n - 2] + r[n - 3]) * inv;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (r[i + 1] - r[i - 1]) * inv;
  return out;
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += b.v[k];
  if (a.bc != b.bc) out.bc = Bc::free;
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] -= b.v[k];
  if (a.bc != b.bc) out.bc = Bc::free;
  return out;
}

Field operator*(double s, const Field& a) {
  Field out = a;
  for (double& x : out.v) x *= s;
  return out;
}

Field hadamard(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] *= b.v[k];
  // A product vanishes at the endpoints if either factor does.
  out.bc = (a.bc == Bc::dirichlet_theta || b.bc == Bc::dirichlet_theta) ? Bc::dirichlet_theta : Bc::free;
  return out;
}

Field scale_radial(const Field& a, const RadialProfile& r) {
  Field out = a;
  const std::size_t nt = a.nt();
  for (std::size_t i = 0; i < a.nr(); ++i)
    for (std::size_t j = 0; j < nt; ++j) out.v[i * nt + j] *= r[i];
  return out;
}

Field& axpy(double s, const Field& x, Field& y) {
  require_same_grid(x, y);
  for (std::size_t k = 0; k < y.v.size(); ++k) y.v[k] += s * x.v[k];
  return y;
}

RadialProfile operator+(const RadialProfile& a, const RadialProfile& b) {
  RadialProfile out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

RadialProfile operator-(const RadialProfile& a, const RadialProfile& b) {
  RadialProfile out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

RadialProfile operator*(double s, const RadialProfile& a) {
  RadialProfile out = a;
  for (double& x : out.v) x *= s;
  return out;
}

RadialProfile theta_moment(const Field& f, const std::vector<double>& k) {
  RadialProfile out(f.grid);
  const auto& wq = f.grid->theta_quad_weights;
  for (std::size_t i = 0; i < f.nr(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.nt(); ++j) s += f(i, j) * k[j] * wq[j];
    out[i] = s;
  }
  return out;
}

}  // namespace blowup
