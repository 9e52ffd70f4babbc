#pragma once

#include <optional>
#include <string>
#include <vector>

namespace blowup::toy {

// Active scalar model: w_t + u w_x = w u_x with -u_xx = w.

enum class Domain { circle, interval };
Domain parse_domain(const std::string& s);

struct ActiveScalarOptions {
  double cfl = 0.4;
  double growth_step = 0.05;      // max relative growth of sup|w| per step
  double blowup_threshold = 1e6;  // sup|w| beyond which the run stops
  double record_dt = 0.1;
};

struct ActiveScalarTrajectory {
  std::vector<double> t;
  std::vector<double> sup_omega;
  std::vector<double> omega;  // final samples
  bool blew_up = false;
  std::optional<double> t_blowup;
  double t_end_reached = 0.0;
};

// Circle: samples at x_k = 2 pi k / n on [0, 2 pi), Poisson solved by FFT,
// mean of w0 must vanish. Interval: samples at x_k = pi k / (n - 1) on
// [0, pi] with u = 0 at both walls, Poisson solved as a tridiagonal system.
ActiveScalarTrajectory active_scalar_evolve(const std::vector<double>& omega0, Domain domain, double t_end,
                                            const ActiveScalarOptions& opt = {});

// Hyperbolic-point model with w0 = 0:
//   mu'/mu = (int_0^t mu) * I(mu),
//   I(mu) = int_0^inf int_0^inf y1 y2 / |y|^4 d1rho0(mu y1, y2 / mu) dy.
enum class RhoProfile {
  smooth_plane,   // d1rho0 = x1 x2 chi(x1) chi(x2), C^2 on the plane
  half_plane,     // d1rho0 = x1 chi(x1) chi(x2), nonzero on x2 = 0
  comparison,     // I(mu) = 1/10, the reference ODE mu' = mu int mu / 10
};
RhoProfile parse_profile(const std::string& s);
std::string to_string(RhoProfile p);

// Smooth cutoff: 1 on [0, 1], 0 on [2, inf).
double cutoff(double s);

// I(mu) by adaptive Gauss-Kronrod quadrature in polar coordinates.
double hyperbolic_rate(RhoProfile profile, double mu);

struct MuTrajectory {
  std::vector<double> t_nodes;
  std::vector<double> mu_vals;
  std::vector<double> mu_integral;  // int_0^t mu
  bool blew_up = false;
  std::optional<double> t_star;
  double mu_max = 0.0;
  // min over steps with mu >= 1 of mu' / (mu int mu); the half-plane case
  // must keep this at or above 1/10.
  std::optional<double> min_growth_ratio;
};

// RK4 on (mu, int mu) with the step shrunk as mu grows; stops when mu
// exceeds overflow_mu and records t_star.
MuTrajectory hyperbolic_mu_ode(RhoProfile profile, double t_end, double dt, double overflow_mu = 1e12);

// Closed-form blow-up time of mu' = c mu int mu, mu(0) = 1: the integral M
// solves M' = 1 + c M^2 / 2, so t_star = pi / sqrt(2 c).
double comparison_blowup_time(double c);

// Stationary self-similar problem for f_t = f^2 + eps N(f) around
// F_* = 1/(1+z), in the log-radial variable.
enum class Nonlinearity {
  square,     // N(f) = f^2
  transport,  // N(f) = f z f_z
  mixed,      // N(f) = f^2 - f z f_z
};
Nonlinearity parse_nonlinearity(const std::string& s);
std::string to_string(Nonlinearity n);

struct OdeToyOptions {
  std::size_t n = 256;
  double xi_min = -10.0;
  double xi_max = 10.0;
  double dtau = 0.02;
  double tau_max = 200.0;
};

struct OdeToyResult {
  std::vector<double> z;
  std::vector<double> g;
  double mu = 0.0;
  double lambda = 0.0;
  double norm_x = 0.0;           // (int (g^2 + (z g_z)^2) w^2 dz)^{1/2}, w = (1+z)^2/z^2
  double matching_defect = 0.0;  // |mu - eps N(F_* + g)(0)|
  double coercivity = 0.0;       // (L g, g)_X / |g|_X^2
  double forcing_constant = 0.0;  // |RHS - g^2|_X / (eps (1 + |g|_X))
  double cubic_pairing = 0.0;     // |(g^2, g)_X|
  bool apriori_holds = false;     // c|g|^2 <= C eps (|g| + |g|^2) + |(g^2,g)|
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

OdeToyResult ode_selfsimilar_solve(double epsilon, Nonlinearity kind, double tol, const OdeToyOptions& opt = {});

}  // namespace blowup::toy
