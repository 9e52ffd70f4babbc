#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "blowup/grid.hpp"
#include "blowup/params.hpp"

namespace blowup {

// Randomized checks of the weighted functional inequalities. Each suite
// draws admissible fields, evaluates both sides with the discrete norms and
// reports the worst ratio against the stated constant. Suites without a
// stated constant record the measured one and only require it finite.

struct PropertyReport {
  std::string property_id;
  double alpha = 0.0;
  std::size_t n_samples = 0;
  double worst_ratio = 0.0;
  double bound = 0.0;
  bool lower = false;     // ratio must stay at or above bound
  bool asserted = true;   // false: bound is informational only
  bool pass = false;
  std::uint64_t seed = 0;
};

struct SamplerOptions {
  int radial_modes = 4;   // m = 0..radial_modes-1
  int angular_modes = 4;  // n = 1..angular_modes
  double delta_min = 0.25;
  double delta_max = 1.0;
  bool project = false;   // apply P so that L12(f)(0) = 0
};

// sum a_mn sin(2n theta) sin(2 theta)^delta z^2 (1+z)^(-4-m/4) with
// a_mn ~ N(0, 1) / (m + n) from a per-sample generator seeded by
// (seed, index).
Field random_admissible_field(const GridPtr& g, const Params& p, std::uint64_t seed, std::size_t index,
                              const SamplerOptions& opt = {});

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// "all" runs every registered suite.
std::vector<PropertyReport> run_suite(const std::string& suite, const GridPtr& g, const Params& p,
                                      std::size_t n_samples, std::uint64_t seed);

// Ratio of int sin^p / (beta^2 int sin^p cos^2) over [0, pi] for
// f = sin(theta)^beta, p = 2 beta - 2 - eta, by tanh-sinh quadrature. It
// increases to 4/(eta+1)^2 as beta decreases to (1+eta)/2.
double sharp_hardy_extremal_ratio(double beta, double eta);

struct CalibrationResult {
  double scale = 1.0;       // s in InnerProductConstants::scaled(s)
  double min_quotient = 0.0;
  bool found = false;
};

// Smallest s on a grid of 11 values in [0, 1] for which the H1 Rayleigh
// quotient of L_Gamma^T stays positive on every sample.
CalibrationResult calibrate_constants(const GridPtr& g, const Params& p, std::size_t n_samples, std::uint64_t seed);

void write_jsonl(std::ostream& os, const PropertyReport& r);

}  // namespace blowup
