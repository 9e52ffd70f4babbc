#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "blowup/grid.hpp"
#include "blowup/operators.hpp"
#include "blowup/params.hpp"

namespace blowup {

// Model df/dt = f * L12(f).

struct BlowupReached : std::runtime_error {
  double t_star;
  BlowupReached(const std::string& what, double ts) : std::runtime_error(what), t_star(ts) {}
};

struct InstabilityError : std::runtime_error {
  double last_valid_t;
  InstabilityError(const std::string& what, double t) : std::runtime_error(what), last_valid_t(t) {}
};

struct FMState {
  Field f;
  double t = 0.0;
  double l12_at_zero = 0.0;
  bool halted = false;  // growth guardrail tripped before t_end
  std::vector<double> t_hist;
  std::vector<double> l12_hist;
};

// 2 / sup_z L12(f0)(z), including z = 0; infinity if L12(f0) <= 0.
double blowup_time(const Field& f0, TailModel tail = TailModel::zero);

Field evolve_exact(const Field& f0, double t, TailModel tail = TailModel::zero);

// Classical RK4 with L12 recomputed at every stage. Halts when max f exceeds
// growth_cap times the initial maximum.
FMState evolve_numeric(const Field& f0, double dt, double t_end, TailModel tail = TailModel::zero,
                       double growth_cap = 1e8);

// Max-node residual of F + z dF/dz - L12(F) F for F = (Gamma/c) F_rad(z),
// c = int Gamma K. The radial factor defaults to 2z/(1+z)^2.
double profile_residual(const AngularProfiles& gamma_choice, const GridPtr& g,
                        const std::function<double(double)>& radial = {});

}  // namespace blowup
