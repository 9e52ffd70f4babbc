#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/grid.hpp"
#include "blowup/params.hpp"

namespace blowup {

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AngularProfiles {
  std::vector<double> gamma_vals;   // (sin cos^2)^(alpha/3)
  std::vector<double> kernel_vals;  // 3 sin cos^2
  double c = 1.0;                   // quadrature of gamma * kernel
  double kernel_mass = 1.0;         // quadrature of kernel
  double l2_defect = 0.0;           // |gamma/c - K|_{L^2(0, pi/2)}
  double transport_ratio = 0.0;     // max |sin(2 theta) gamma'| / (alpha gamma)
};

// Samples Gamma and K. With validate set, throws InvariantError when either
// angular assumption fails (the ratio bound 2 or the L2 defect bound 7/10).
AngularProfiles angular_profiles(const Params& p, const Grid2D& g, bool validate = true);

std::vector<double> kernel_values(const Grid2D& g);
std::vector<double> gamma_values(double alpha, const Grid2D& g);

// Reverse cumulative integral int_{xi_i}^{xi_max} m dxi with a sixth-order
// local interpolation rule, plus the tail contribution.
RadialProfile l12_from_moment(const RadialProfile& m, TailModel tail = TailModel::zero);
RadialProfile l12(const Field& f, TailModel tail = TailModel::zero);

// Value at z = 0: the first node value plus int_0^{z_min} m dr / r under the
// model m ~ r (profiles vanish at least linearly at the origin).
double l12_at_zero(const Field& f, TailModel tail = TailModel::zero);
double l12_at_zero(const RadialProfile& l12_vals, const RadialProfile& moment);

Field f_star(const Params& p, const GridPtr& g);

enum class LinearOpKind { L, L_gamma, L_gamma_T };

Field apply_linear(LinearOpKind kind, const Field& f, const Params& p);
// Same operator with upwind-biased transport stencils, as used by the
// pseudo-time iteration.
Field apply_linear_upwind(LinearOpKind kind, const Field& f, const Params& p);
RadialProfile apply_L_radial(const RadialProfile& r);

// (Gamma/c) 2z^2/(1+z)^3, the profile removed by the projector.
Field projector_profile(const Params& p, const GridPtr& g);
Field project_P(const Field& f, const Params& p);

}  // namespace blowup
