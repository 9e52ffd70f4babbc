#pragma once

#include <array>
#include <string>

#include "blowup/grid.hpp"

namespace blowup {

enum class ConstantsMode { paper, calibrated };

ConstantsMode parse_constants_mode(const std::string& s);
std::string to_string(ConstantsMode m);

// Constants of the first-order coercive inner product and the inductive
// step weights for orders 2..4 (index k holds c_{1,k}, c_{2,k}).
struct InnerProductConstants {
  double dz = 10.0;
  double l2_eta = 1e10;
  double l2 = 1e17;
  double theta = 1e21;
  std::array<double, 5> c1{1.0, 1.0, 1.0, 1.0, 1.0};
  std::array<double, 5> c2{1.0, 1.0, 1.0, 1.0, 1.0};

  static InnerProductConstants paper();
  // Geometric interpolation between all-ones (s = 0) and the reference values
  // (s = 1).
  static InnerProductConstants scaled(double s);
};

// Behaviour of the radial integral beyond the last node.
enum class TailModel { zero, inverse_z };

struct Params {
  double alpha = 0.05;
  double gamma = 1.0 + 0.05 / 10.0;
  double eta = 0.99;
  double c = 1.0;
  TailModel tail = TailModel::zero;
  ConstantsMode mode = ConstantsMode::paper;
  InnerProductConstants ip = InnerProductConstants::paper();

  double tol_solver = 1e-9;
};

// c from the closed form 3/2 * B((p+1)/2, p+1/2) with p = 1 + alpha/3.
double normalization_exact(double alpha);

// Params whose c is the theta-quadrature of Gamma K on the given grid, so
// that the discrete operators see an exactly normalized profile.
Params make_params(double alpha, const Grid2D& g, ConstantsMode mode = ConstantsMode::paper);

}  // namespace blowup
