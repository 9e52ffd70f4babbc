#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace blowup {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor grid on (z, theta). Radial nodes are uniform in xi = log z; theta
// nodes are cell centres of a uniform partition of [0, pi/2], so neither
// endpoint is ever sampled.
struct Grid2D {
  std::vector<double> xi;
  std::vector<double> z;
  std::vector<double> theta;
  std::vector<double> xi_quad_weights;      // trapezoid in xi
  std::vector<double> radial_quad_weights;  // dz = z dxi
  std::vector<double> theta_quad_weights;   // midpoint in theta
  double dxi = 0.0;
  double dtheta = 0.0;

  std::size_t nr() const { return z.size(); }
  std::size_t nt() const { return theta.size(); }
  std::size_t size() const { return nr() * nt(); }
};

using GridPtr = std::shared_ptr<const Grid2D>;

GridPtr build_grid(std::size_t n_radial, std::size_t n_theta, double xi_min, double xi_max);

enum class Bc { dirichlet_theta, free };

// Values stored radial-major: v[i * nt + j] is the sample at (z_i, theta_j).
struct Field {
  GridPtr grid;
  std::vector<double> v;
  Bc bc = Bc::dirichlet_theta;

  Field() = default;
  explicit Field(GridPtr g, Bc b = Bc::dirichlet_theta)
      : grid(std::move(g)), v(grid->size(), 0.0), bc(b) {}

  double& operator()(std::size_t i, std::size_t j) { return v[i * grid->nt() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * grid->nt() + j]; }

  std::size_t nr() const { return grid->nr(); }
  std::size_t nt() const { return grid->nt(); }
  bool finite() const;
};

struct RadialProfile {
  GridPtr grid;
  std::vector<double> v;

  RadialProfile() = default;
  explicit RadialProfile(GridPtr g) : grid(std::move(g)), v(grid->nr(), 0.0) {}

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

template <class Fn>
Field sample(const GridPtr& g, Fn&& fn, Bc bc = Bc::dirichlet_theta) {
  Field f(g, bc);
  for (std::size_t i = 0; i < g->nr(); ++i)
    for (std::size_t j = 0; j < g->nt(); ++j) f(i, j) = fn(g->z[i], g->theta[j]);
  return f;
}

template <class Fn>
RadialProfile sample_radial(const GridPtr& g, Fn&& fn) {
  RadialProfile r(g);
  for (std::size_t i = 0; i < g->nr(); ++i) r[i] = fn(g->z[i]);
  return r;
}

enum class Dir { d_theta, d_z };

// d_theta is sin(2 theta) d/dtheta, d_z is z d/dz = d/dxi. Both use centred
// second-order stencils; the radial ends are one-sided.
Field diff(const Field& f, Dir dir);

// Second-order upwind-biased version of diff for transport with velocity
// pointing towards increasing (toward_high) or decreasing index.
Field diff_upwind(const Field& f, Dir dir, bool toward_high);

// Plain d/dtheta and d^2/dtheta^2 with the same boundary handling as diff.
Field partial_theta(const Field& f);
Field partial_theta2(const Field& f);

// d/dz applied k times, i.e. (z^{-1} d/dxi)^k.
Field partial_z_pow(const Field& f, int k);

RadialProfile diff_z(const RadialProfile& r);

// Pointwise algebra.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field hadamard(const Field& a, const Field& b);
// a(z, theta) * r(z)
Field scale_radial(const Field& a, const RadialProfile& r);
Field& axpy(double s, const Field& x, Field& y);

RadialProfile operator+(const RadialProfile& a, const RadialProfile& b);
RadialProfile operator-(const RadialProfile& a, const RadialProfile& b);
RadialProfile operator*(double s, const RadialProfile& a);

// Integral over theta of f * k(theta) per radial node, with k sampled at the
// theta nodes.
RadialProfile theta_moment(const Field& f, const std::vector<double>& k);

void require_same_grid(const Field& a, const Field& b);

}  // namespace blowup
