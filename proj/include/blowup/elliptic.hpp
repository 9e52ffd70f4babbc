#pragma once

#include <vector>

#include <Eigen/Dense>

#include "blowup/grid.hpp"
#include "blowup/params.hpp"

namespace blowup {

// Discrete form of
//   -a^2 R^2 Psi_RR - a(5+a) R Psi_R - Psi_tt + d_t(tan t Psi) - 6 Psi = F
// with Psi = 0 at t = 0, pi/2. In xi = log R the radial part is
// -a^2 Psi_xixi - 5a Psi_xi. The angular part is written in flux form
// -d_t[(1/cos t) d_t(cos t Psi)] - 6 Psi and shifted by a diagonal term
// so that sin(2t) is an exact null vector and sin t cos^2 t an exact left
// null vector. It is then diagonalized once; each angular mode is a
// tridiagonal problem in xi.
//
// Radial boundary conditions: at xi_min a ghost value consistent with the
// discrete regular-branch root plus a component growing like z, which
// removes the R^{-5/alpha} mode.
// At xi_max either Psi = 0 (zero tail) or a ghost decaying like 1/R
// (inverse-z tail), matching the tail model of L12.
class BslSolver {
 public:
  BslSolver(GridPtr g, double alpha, TailModel tail = TailModel::zero);

  Field solve(const Field& F) const;
  // Discrete operator, including the inner boundary closure.
  Field apply(const Field& psi) const;

  const Eigen::MatrixXd& angular_matrix() const { return ang_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  double alpha() const { return alpha_; }
  TailModel tail() const { return tail_; }
  const GridPtr& grid() const { return grid_; }

 private:
  Eigen::MatrixXd to_modes(const Field& f) const;
  Field from_modes(const Eigen::MatrixXd& m) const;
  void radial_apply(const Eigen::MatrixXd& m, Eigen::MatrixXd& out) const;

  GridPtr grid_;
  double alpha_;
  TailModel tail_;
  std::size_t m_ = 0;    // number of radial unknowns
  double outer_ = 0.0;   // ghost ratio beyond xi_max
  double a_ = 0.0, b_ = 0.0;
  Eigen::MatrixXd ang_;     // deflated angular matrix
  Eigen::MatrixXd fwd_;     // modes = fwd_ * values (per radial row)
  Eigen::MatrixXd inv_;     // values = inv_ * modes
  Eigen::VectorXd lambda_;
  std::vector<double> root_;            // regular-branch root per mode
  std::vector<double> ghost_self_;      // inner ghost = self * Psi_0 + next * Psi_1
  std::vector<double> ghost_next_;
  std::vector<std::vector<double>> cp_;  // Thomas factors per mode
  std::vector<std::vector<double>> piv_;
};

struct EllipticSolution {
  Field psi;
  Field psi_regular;          // Psi + G sin(2 theta)
  RadialProfile g_singular;   // G
  RadialProfile g_bar;        // G + L12(F) / (4 alpha)
  RadialProfile f_star_avg;   // int F cos^2 sin dtheta
  double residual_norm = 0.0;
};

// sin(theta) cos^2(theta) moment of F.
RadialProfile orthogonal_moment(const Field& F);

EllipticSolution solve_bsl(const Field& F, const Params& p);
EllipticSolution solve_bsl(const BslSolver& solver, const Field& F);

// G = -L12(F)/(4 alpha) - (3/(4 alpha)) R^{-5/alpha} int_0^R s^{(5-alpha)/alpha} F_star ds,
// with the second term advanced as an exponentially weighted running sum.
EllipticSolution extract_singular(const Field& F, EllipticSolution sol, const Params& p);

struct Velocity {
  Field U;
  Field V;
  Field R;
};

// U = -3 Phi - alpha D_z Phi, V = Phi_t - tan t Phi,
// R = (2 sin Phi + alpha sin D_z Phi + cos Phi_t) / cos.
Velocity velocity_functionals(const Field& phi, const Params& p);

// Manufactured solution (sin 2t + sin 4t) z^2/(1+z)^3 solved on levels
// (nr0, nt0) * 2^l with the inverse-z tail; errors in unweighted L2.
struct MmsLevel {
  std::size_t nr = 0;
  std::size_t nt = 0;
  double error = 0.0;
  double residual = 0.0;
  double order = 0.0;  // log2(previous error / error); 0 on the first level
};
std::vector<MmsLevel> elliptic_mms(double alpha, int levels, std::size_t nr0, std::size_t nt0, double xi_min,
                                   double xi_max);

// max_z |int Psi sin cos^2 dtheta| for a forcing with that moment removed.
double orthogonal_response(const GridPtr& g, const Params& p);

}  // namespace blowup
