#pragma once

#include <vector>

#include "blowup/grid.hpp"
#include "blowup/params.hpp"

namespace blowup {

// Radial weight (1+z)^2/z^2 and the angular weights sin(2 theta)^(-gamma/2)
// and sin(2 theta)^(-eta/2), sampled at the grid nodes.
struct WeightSet {
  std::vector<double> w;
  std::vector<double> w_theta;
  std::vector<double> eta_weight;

  static WeightSet make(const Grid2D& g, const Params& p);
};

enum class WeightSelector {
  none,
  w,        // w(z)
  w_theta,  // sin(2 theta)^(-gamma/2)
  W,        // w * w_theta
  w_eta,    // w * sin(2 theta)^(-eta/2)
};

// sqrt( int int f^2 weight^2 dz dtheta ).
double weighted_l2(const Field& f, WeightSelector weight, const Params& p);

// int int f g weight^2 dz dtheta.
double weighted_dot(const Field& f, const Field& g, WeightSelector weight, const Params& p);

double hk_norm(const Field& f, int k, const Params& p);
double wlinf_norm(const Field& f, int l, const Params& p);

// Coercive inner product: the four-term first-order form, then
// (f,g)_k = (f,g)_{k-1} + c1_k (D_theta f, D_theta g)_{k-1} + c2_k (D_z f, D_z g)_{k-1}.
double hk_inner(const Field& f, const Field& g, int k, const Params& p);

double linf(const Field& f);

}  // namespace blowup
