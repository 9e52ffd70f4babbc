#include "blowup/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "blowup/norms.hpp"
#include "blowup/operators.hpp"

namespace blowup {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd angular_operator(const Grid2D& g) {
  const std::size_t n = g.nt();
  const double h = g.dtheta;
  const double ih2 = 1.0 / (h * h);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = std::cos(g.theta[j]);
  for (std::size_t j = 0; j < n; ++j) {
    const auto J = static_cast<Eigen::Index>(j);
    // Face above. At pi/2 the flux (1/cos) d(cos Psi) tends to -2 dPsi/ds,
    // with the slope taken from the odd reflection.
    if (j + 1 == n) {
      A(J, J) += 4.0 * ih2;
    } else {
      const double p = 1.0 / std::cos(g.theta[j] + 0.5 * h);
      A(J, J + 1) -= p * c[j + 1] * ih2;
      A(J, J) += p * c[j] * ih2;
    }
    // Face below.
    if (j == 0) {
      A(J, J) += 2.0 * c[0] * ih2;
    } else {
      const double p = 1.0 / std::cos(g.theta[j] - 0.5 * h);
      A(J, J) += p * c[j] * ih2;
      A(J, J - 1) -= p * c[j - 1] * ih2;
    }
    A(J, J) -= 6.0;
  }
  // Diagonal shift so that sin(2 theta) is annihilated exactly.
  Eigen::VectorXd s(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) s(static_cast<Eigen::Index>(j)) = std::sin(2.0 * g.theta[j]);
  const Eigen::VectorXd As = A * s;
  for (Eigen::Index j = 0; j < A.rows(); ++j) A(j, j) -= As(j) / s(j);
  return A;
}

}  // namespace

BslSolver::BslSolver(GridPtr g, double alpha, TailModel tail)
    : grid_(std::move(g)), alpha_(alpha), tail_(tail) {
  if (!(alpha > 0.0)) throw ConfigError("elliptic solve needs alpha > 0");
  const Grid2D& gr = *grid_;
  const auto n = static_cast<Eigen::Index>(gr.nt());
  ang_ = angular_operator(gr);

  // cos(theta) * A is symmetric, so C^{1/2} A C^{-1/2} is too.
  Eigen::VectorXd sq(n);
  for (Eigen::Index j = 0; j < n; ++j) sq(j) = std::sqrt(std::cos(gr.theta[static_cast<std::size_t>(j)]));
  Eigen::MatrixXd B = sq.asDiagonal() * ang_ * sq.cwiseInverse().asDiagonal();
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success) throw std::runtime_error("angular eigen-decomposition failed");
  lambda_ = es.eigenvalues();
  const Eigen::MatrixXd& Q = es.eigenvectors();
  fwd_ = Q.transpose() * sq.asDiagonal();
  inv_ = sq.cwiseInverse().asDiagonal() * Q;

  const double h = gr.dxi;
  a_ = alpha * alpha / (h * h);
  b_ = 2.5 * alpha / h;
  // With a zero tail the last node is a Dirichlet node; otherwise every node
  // is unknown and the ghost beyond xi_max decays like exp(-xi).
  m_ = tail == TailModel::zero ? gr.nr() - 1 : gr.nr();
  outer_ = tail == TailModel::zero ? 0.0 : std::exp(-h);
  const std::size_t m = m_;
  root_.resize(static_cast<std::size_t>(n));
  ghost_self_.resize(static_cast<std::size_t>(n));
  ghost_next_.resize(static_cast<std::size_t>(n));
  cp_.assign(static_cast<std::size_t>(n), std::vector<double>(m));
  piv_.assign(static_cast<std::size_t>(n), std::vector<double>(m));
  const double lo = -a_ + b_, up = -a_ - b_;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lam = lambda_(k);
    const double q = 2.0 * a_ + lam;
    const double r = (q + std::sqrt(q * q - 4.0 * (a_ + b_) * (a_ - b_))) / (2.0 * (a_ + b_));
    const auto ku = static_cast<std::size_t>(k);
    root_[ku] = r;
    // Inner ghost exact for A r^i + P exp(xi_i): the forcing vanishes like z
    // at the origin, and a closure exact only for the homogeneous branch
    // excites the alternating parasitic root of the null mode.
    const double eh = std::exp(h);
    const double cpar = std::abs(eh - r) > 1e-8 * eh ? (1.0 / r - 1.0 / eh) / (eh - r) : 0.0;
    ghost_self_[ku] = 1.0 / r + cpar * r;
    ghost_next_[ku] = -cpar;
    auto& cp = cp_[ku];
    auto& piv = piv_[ku];
    piv[0] = q + lo * ghost_self_[ku];
    cp[0] = (up + lo * ghost_next_[ku]) / piv[0];
    for (std::size_t i = 1; i < m; ++i) {
      const double d = i + 1 == m ? q + up * outer_ : q;
      piv[i] = d - lo * cp[i - 1];
      cp[i] = up / piv[i];
    }
  }
}

Eigen::MatrixXd BslSolver::to_modes(const Field& f) const {
  Eigen::Map<const RowMat> V(f.v.data(), static_cast<Eigen::Index>(f.nr()), static_cast<Eigen::Index>(f.nt()));
  return V * fwd_.transpose();
}

Field BslSolver::from_modes(const Eigen::MatrixXd& m) const {
  Field out(grid_, Bc::dirichlet_theta);
  Eigen::Map<RowMat> V(out.v.data(), static_cast<Eigen::Index>(out.nr()), static_cast<Eigen::Index>(out.nt()));
  V = m * inv_.transpose();
  return out;
}

Field BslSolver::solve(const Field& F) const {
  if (F.nr() != grid_->nr() || F.nt() != grid_->nt()) throw std::invalid_argument("forcing grid mismatch");
  const Eigen::MatrixXd rhs = to_modes(F);
  Eigen::MatrixXd sol = Eigen::MatrixXd::Zero(rhs.rows(), rhs.cols());
  const std::size_t m = m_;
  const double lo = -a_ + b_;
  std::vector<double> y(m);
  for (Eigen::Index k = 0; k < rhs.cols(); ++k) {
    const auto& cp = cp_[static_cast<std::size_t>(k)];
    const auto& piv = piv_[static_cast<std::size_t>(k)];
    y[0] = rhs(0, k) / piv[0];
    for (std::size_t i = 1; i < m; ++i) y[i] = (rhs(static_cast<Eigen::Index>(i), k) - lo * y[i - 1]) / piv[i];
    for (std::size_t i = m - 1; i-- > 0;) y[i] -= cp[i] * y[i + 1];
    for (std::size_t i = 0; i < m; ++i) sol(static_cast<Eigen::Index>(i), k) = y[i];
  }
  return from_modes(sol);
}

void BslSolver::radial_apply(const Eigen::MatrixXd& M, Eigen::MatrixXd& out) const {
  const Eigen::Index nr = M.rows();
  out.resize(M.rows(), M.cols());
  const double lo = -a_ + b_, up = -a_ - b_;
  const auto m = static_cast<Eigen::Index>(m_);
  for (Eigen::Index k = 0; k < M.cols(); ++k) {
    const double q = 2.0 * a_ + lambda_(k);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto ku = static_cast<std::size_t>(k);
      const double below =
          i == 0 ? ghost_self_[ku] * M(0, k) + (nr > 1 ? ghost_next_[ku] * M(1, k) : 0.0) : M(i - 1, k);
      double above = 0.0;
      if (i + 1 < nr) above = i + 1 < m ? M(i + 1, k) : 0.0;
      else above = outer_ * M(i, k);
      out(i, k) = lo * below + q * M(i, k) + up * above;
    }
    if (m < nr) out(nr - 1, k) = M(nr - 1, k);
  }
}

Field BslSolver::apply(const Field& psi) const {
  Eigen::MatrixXd out;
  radial_apply(to_modes(psi), out);
  return from_modes(out);
}

RadialProfile orthogonal_moment(const Field& F) {
  std::vector<double> k(F.nt());
  for (std::size_t j = 0; j < F.nt(); ++j) {
    const double s = std::sin(F.grid->theta[j]), c = std::cos(F.grid->theta[j]);
    k[j] = s * c * c;
  }
  return theta_moment(F, k);
}

EllipticSolution solve_bsl(const BslSolver& solver, const Field& F) {
  EllipticSolution sol;
  sol.psi = solver.solve(F);
  const Field r = solver.apply(sol.psi);
  double num = 0.0, den = 0.0;
  const std::size_t nt = F.nt();
  const std::size_t rows = solver.tail() == TailModel::zero ? F.nr() - 1 : F.nr();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      num = std::max(num, std::abs(r(i, j) - F(i, j)));
      den = std::max(den, std::abs(F(i, j)));
    }
  sol.residual_norm = den > 0.0 ? num / den : num;
  sol.f_star_avg = orthogonal_moment(F);
  return sol;
}

EllipticSolution solve_bsl(const Field& F, const Params& p) {
  const BslSolver solver(F.grid, p.alpha, p.tail);
  EllipticSolution sol = solve_bsl(solver, F);
  if (!sol.psi.finite()) throw std::runtime_error("elliptic solve produced non-finite values");
  if (sol.residual_norm > p.tol_solver)
    throw std::runtime_error("elliptic residual above tolerance: " + std::to_string(sol.residual_norm));
  return sol;
}

EllipticSolution extract_singular(const Field& F, EllipticSolution sol, const Params& p) {
  const Grid2D& g = *F.grid;
  const double a = p.alpha;
  if (sol.f_star_avg.size() != g.nr()) sol.f_star_avg = orthogonal_moment(F);
  const RadialProfile& fs = sol.f_star_avg;
  const RadialProfile l = l12(F, p.tail);

  // J(xi) = int_{-inf}^{xi} exp(kappa (s - xi)) F_star(s) ds, kappa = 5/alpha,
  // with F_star linear on each cell and F_star ~ z below the first node.
  const double kappa = 5.0 / a;
  const double h = g.dxi;
  const double E = std::exp(-kappa * h);
  const double c1 = -std::expm1(-kappa * h) / kappa;
  const double c2 = h / kappa - c1 / kappa;
  RadialProfile J(F.grid);
  J[0] = fs[0] / (kappa + 1.0);
  for (std::size_t i = 0; i + 1 < g.nr(); ++i)
    J[i + 1] = E * J[i] + fs[i] * c1 + (fs[i + 1] - fs[i]) / h * c2;

  sol.g_bar = RadialProfile(F.grid);
  sol.g_singular = RadialProfile(F.grid);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    sol.g_bar[i] = -0.75 / a * J[i];
    sol.g_singular[i] = -0.25 / a * l[i] + sol.g_bar[i];
  }
  sol.psi_regular = sol.psi;
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nt(); ++j)
      sol.psi_regular(i, j) += sol.g_singular[i] * std::sin(2.0 * g.theta[j]);
  return sol;
}

Velocity velocity_functionals(const Field& phi, const Params& p) {
  const Grid2D& g = *phi.grid;
  const Field dz = diff(phi, Dir::d_z);
  const Field dt = partial_theta(phi);
  Velocity v{Field(phi.grid, Bc::dirichlet_theta), Field(phi.grid, Bc::free), Field(phi.grid, Bc::free)};
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const double t = std::tan(g.theta[j]);
    for (std::size_t i = 0; i < g.nr(); ++i) {
      const double f = phi(i, j);
      v.U(i, j) = -3.0 * f - p.alpha * dz(i, j);
      v.V(i, j) = dt(i, j) - t * f;
      v.R(i, j) = 2.0 * t * f + p.alpha * t * dz(i, j) + dt(i, j);
    }
  }
  return v;
}

std::vector<MmsLevel> elliptic_mms(double alpha, int levels, std::size_t nr0, std::size_t nt0, double xi_min,
                                   double xi_max) {
  if (levels < 1) throw ConfigError("mms needs at least one level");
  std::vector<MmsLevel> out;
  for (int l = 0; l < levels; ++l) {
    const GridPtr g = build_grid(nr0 << l, nt0 << l, xi_min, xi_max);
    Params p = make_params(alpha, *g);
    p.tail = TailModel::inverse_z;
    // Radial factor q = z^2/(1+z)^3 with its xi-derivatives.
    const Field F = sample(g, [alpha](double z, double t) {
      const double q = z * z / std::pow(1.0 + z, 3);
      const double d1 = 2.0 * z / std::pow(1.0 + z, 3) - 3.0 * z * z / std::pow(1.0 + z, 4);
      const double d2 = 2.0 / std::pow(1.0 + z, 3) - 12.0 * z / std::pow(1.0 + z, 4) + 12.0 * z * z / std::pow(1.0 + z, 5);
      const double qx = z * d1, qxx = z * d1 + z * z * d2;
      const double radial = -alpha * alpha * qxx - 5.0 * alpha * qx;
      const double s2 = std::sin(2.0 * t), s4 = std::sin(4.0 * t), c = std::cos(t);
      // The angular operator annihilates sin 2t; on sin 4t it gives this.
      const double ang = 10.0 * s4 + s4 / (c * c) + 4.0 * std::tan(t) * std::cos(4.0 * t);
      return radial * (s2 + s4) + q * ang;
    });
    const EllipticSolution sol = solve_bsl(F, p);
    const Field exact =
        sample(g, [](double z, double t) { return (std::sin(2.0 * t) + std::sin(4.0 * t)) * z * z / std::pow(1.0 + z, 3); });
    MmsLevel lv;
    lv.nr = g->nr();
    lv.nt = g->nt();
    lv.error = weighted_l2(sol.psi - exact, WeightSelector::none, p);
    lv.residual = sol.residual_norm;
    if (!out.empty()) lv.order = std::log2(out.back().error / lv.error);
    out.push_back(lv);
  }
  return out;
}

double orthogonal_response(const GridPtr& g, const Params& p) {
  Field F = sample(g, [](double z, double t) { return z / ((1.0 + z) * (1.0 + z)) * std::sin(4.0 * t) * (1.0 + std::cos(t)); });
  const RadialProfile m = orthogonal_moment(F);
  std::vector<double> k(g->nt());
  double kk = 0.0;
  for (std::size_t j = 0; j < g->nt(); ++j) {
    const double s = std::sin(g->theta[j]), c = std::cos(g->theta[j]);
    k[j] = s * c * c;
    kk += k[j] * k[j] * g->theta_quad_weights[j];
  }
  for (std::size_t i = 0; i < g->nr(); ++i)
    for (std::size_t j = 0; j < g->nt(); ++j) F(i, j) -= m[i] / kk * k[j];
  const EllipticSolution sol = solve_bsl(F, p);
  const RadialProfile r = orthogonal_moment(sol.psi);
  double mx = 0.0;
  for (double x : r.v) mx = std::max(mx, std::abs(x));
  return mx;
}

}  // namespace blowup
