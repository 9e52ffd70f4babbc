#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "blowup/elliptic.hpp"
#include "blowup/fundamental_model.hpp"
#include "blowup/io.hpp"
#include "blowup/norms.hpp"
#include "blowup/operators.hpp"
#include "blowup/selfsimilar.hpp"
#include "blowup/toy_models.hpp"
#include "blowup/verify.hpp"

namespace fs = std::filesystem;
using blowup::io::Json;

namespace {

struct RunConfig {
  std::string command;
  double alpha = 0.05;
  std::vector<std::size_t> grid{128, 32};
  std::vector<double> xi_range{-10.0, 10.0};
  double dtau = 0.01;
  double tau_max = 40.0;
  double tol = 1e-6;
  std::size_t samples = 200;
  std::uint64_t seed = 7;
  std::string out = "out";
  std::string suite = "all";
  std::string constants_mode = "paper";
  std::string tail = "zero";
  std::string config;

  // fm-evolve, fm-profile, elliptic-mms
  double dt = 1e-4;
  double t_frac = 0.5;
  int levels = 4;
  // elliptic-solve
  std::string forcing = "f_star";
  // toy
  std::string model = "hyperbolic";
  std::string domain = "interval";
  std::string profile = "half_plane";
  double t_end = 10.0;
  double epsilon = 0.05;
  std::string nonlinearity = "transport";
  std::size_t n = 256;
};

struct SuiteFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Keys of the JSON config file; every other key is a schema error.
void apply_config_file(RunConfig& c) {
  std::ifstream is(c.config);
  if (!is) throw blowup::ConfigError("cannot read config file " + c.config);
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw blowup::ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw blowup::ConfigError("config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    try {
      if (k == "alpha") c.alpha = v.get<double>();
      else if (k == "grid") c.grid = v.get<std::vector<std::size_t>>();
      else if (k == "xi_range") c.xi_range = v.get<std::vector<double>>();
      else if (k == "dtau") c.dtau = v.get<double>();
      else if (k == "tau_max") c.tau_max = v.get<double>();
      else if (k == "tol") c.tol = v.get<double>();
      else if (k == "samples") c.samples = v.get<std::size_t>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "suite") c.suite = v.get<std::string>();
      else if (k == "constants_mode") c.constants_mode = v.get<std::string>();
      else if (k == "tail") c.tail = v.get<std::string>();
      else if (k == "dt") c.dt = v.get<double>();
      else if (k == "t_frac") c.t_frac = v.get<double>();
      else if (k == "levels") c.levels = v.get<int>();
      else if (k == "forcing") c.forcing = v.get<std::string>();
      else if (k == "model") c.model = v.get<std::string>();
      else if (k == "domain") c.domain = v.get<std::string>();
      else if (k == "profile") c.profile = v.get<std::string>();
      else if (k == "t_end") c.t_end = v.get<double>();
      else if (k == "epsilon") c.epsilon = v.get<double>();
      else if (k == "nonlinearity") c.nonlinearity = v.get<std::string>();
      else if (k == "n") c.n = v.get<std::size_t>();
      else throw blowup::ConfigError("unknown config key '" + k + "'");
    } catch (const Json::type_error&) {
      throw blowup::ConfigError("config key '" + k + "' has the wrong type");
    }
  }
}

void validate(const RunConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha <= 0.25)) throw blowup::ConfigError("alpha must lie in (0, 1/4]");
  if (c.grid.size() != 2 || c.grid[0] < 8 || c.grid[1] < 8) throw blowup::ConfigError("grid must be NR,NT with both >= 8");
  if (c.xi_range.size() != 2 || !(c.xi_range[0] < c.xi_range[1])) throw blowup::ConfigError("xi-range must be a,b with a < b");
  if (!(c.dtau > 0.0) || !(c.tau_max > 0.0) || !(c.tol > 0.0)) throw blowup::ConfigError("dtau, tau-max and tol must be positive");
  if (!(c.dt > 0.0)) throw blowup::ConfigError("dt must be positive");
  if (c.levels < 1 || c.levels > 6) throw blowup::ConfigError("levels must lie in 1..6");
  if (c.tail != "zero" && c.tail != "inverse_z") throw blowup::ConfigError("tail must be zero or inverse_z");
  blowup::parse_constants_mode(c.constants_mode);
  fs::create_directories(c.out);
  const fs::path probe = fs::path(c.out) / ".write_probe";
  {
    std::ofstream os(probe);
    if (!os) throw blowup::ConfigError("output directory is not writable: " + c.out);
  }
  fs::remove(probe);
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["alpha"] = c.alpha;
  j["grid"] = c.grid;
  j["xi_range"] = c.xi_range;
  j["dtau"] = c.dtau;
  j["tau_max"] = c.tau_max;
  j["tol"] = c.tol;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["suite"] = c.suite;
  j["constants_mode"] = c.constants_mode;
  j["tail"] = c.tail;
  j["dt"] = c.dt;
  j["t_frac"] = c.t_frac;
  j["levels"] = c.levels;
  j["forcing"] = c.forcing;
  j["model"] = c.model;
  j["domain"] = c.domain;
  j["profile"] = c.profile;
  j["t_end"] = c.t_end;
  j["epsilon"] = c.epsilon;
  j["nonlinearity"] = c.nonlinearity;
  j["n"] = c.n;
  return j;
}

blowup::GridPtr make_grid(const RunConfig& c) {
  return blowup::build_grid(c.grid[0], c.grid[1], c.xi_range[0], c.xi_range[1]);
}

blowup::Params make_params(const RunConfig& c, const blowup::Grid2D& g) {
  blowup::Params p = blowup::make_params(c.alpha, g, blowup::parse_constants_mode(c.constants_mode));
  p.tail = c.tail == "zero" ? blowup::TailModel::zero : blowup::TailModel::inverse_z;
  return p;
}

void write_summary(const fs::path& dir, const Json& summary) {
  blowup::io::write_json(dir / "summary.json", summary);
  std::ofstream os(dir / "summary.txt");
  for (auto it = summary.begin(); it != summary.end(); ++it) os << it.key() << ": " << it.value().dump() << '\n';
}

std::vector<double> column(const std::vector<blowup::HistoryRow>& h, double blowup::HistoryRow::*m) {
  std::vector<double> out;
  out.reserve(h.size());
  for (const auto& r : h) out.push_back(r.*m);
  return out;
}

// 2 K(theta) z/(1+z)^2, with L12(f0)(0) = 9 pi / 16 and T* = 32 / (9 pi) up to
// the radial truncation.
blowup::Field fm_initial(const blowup::GridPtr& g) {
  return blowup::sample(g, [](double z, double t) {
    const double s = std::sin(t), c = std::cos(t);
    return 6.0 * s * c * c * z / ((1.0 + z) * (1.0 + z));
  });
}

Json run_fm_evolve(const RunConfig& c, const fs::path& dir) {
  const auto g = make_grid(c);
  const auto p = make_params(c, *g);
  const blowup::Field f0 = fm_initial(g);
  const double T = blowup::blowup_time(f0, p.tail);
  const double t_end = c.t_frac * T;
  const blowup::FMState st = blowup::evolve_numeric(f0, c.dt, t_end, p.tail);
  const blowup::Field ex = blowup::evolve_exact(f0, st.t, p.tail);
  double rel = 0.0;
  for (std::size_t k = 0; k < ex.v.size(); ++k)
    if (ex.v[k] != 0.0) rel = std::max(rel, std::abs(st.f.v[k] - ex.v[k]) / std::abs(ex.v[k]));
  blowup::io::write_csv(dir / "fm_history.csv", {"t", "l12_at_zero"}, {st.t_hist, st.l12_hist});
  const std::size_t j = g->nt() / 2;
  std::vector<double> fn(g->nr()), fe(g->nr());
  for (std::size_t i = 0; i < g->nr(); ++i) {
    fn[i] = st.f(i, j);
    fe[i] = ex(i, j);
  }
  blowup::io::write_csv(dir / "fm_slice.csv", {"z", "numeric", "exact"}, {g->z, fn, fe});
  blowup::io::write_field_bin(dir / "field.bin", st.f);
  blowup::io::write_grid(dir, *g);
  Json s;
  s["blowup_time"] = T;
  s["t_end"] = st.t;
  s["halted"] = st.halted;
  s["l12_at_zero"] = st.l12_at_zero;
  s["max_relative_error"] = rel;
  return s;
}

Json run_fm_profile(const RunConfig& c, const fs::path& dir) {
  std::vector<double> nr, nt, res, order;
  for (int l = 0; l < c.levels; ++l) {
    const auto g = blowup::build_grid(c.grid[0] << l, c.grid[1] << l, c.xi_range[0], c.xi_range[1]);
    const auto p = make_params(c, *g);
    const double r = blowup::profile_residual(blowup::angular_profiles(p, *g, false), g);
    order.push_back(res.empty() ? 0.0 : std::log2(res.back() / r));
    nr.push_back(static_cast<double>(g->nr()));
    nt.push_back(static_cast<double>(g->nt()));
    res.push_back(r);
  }
  blowup::io::write_csv(dir / "profile_residual.csv", {"nr", "nt", "residual", "order"}, {nr, nt, res, order});
  Json s;
  s["levels"] = c.levels;
  s["finest_residual"] = res.back();
  s["last_order"] = order.back();
  return s;
}

Json run_elliptic_solve(const RunConfig& c, const fs::path& dir) {
  const auto g = make_grid(c);
  const auto p = make_params(c, *g);
  blowup::Field F;
  if (c.forcing == "f_star") {
    F = blowup::f_star(p, g);
  } else if (c.forcing == "orthogonal") {
    F = blowup::sample(g, [](double z, double t) { return z / ((1.0 + z) * (1.0 + z)) * std::sin(4.0 * t); });
  } else {
    throw blowup::ConfigError("forcing must be f_star or orthogonal");
  }
  const auto sol = blowup::extract_singular(F, blowup::solve_bsl(F, p), p);
  blowup::io::write_field_bin(dir / "field.bin", sol.psi);
  blowup::io::write_field_bin(dir / "psi_regular.bin", sol.psi_regular);
  blowup::io::write_csv(dir / "singular.csv", {"xi", "z", "g_singular", "g_bar", "f_star_avg"},
                        {g->xi, g->z, sol.g_singular.v, sol.g_bar.v, sol.f_star_avg.v});
  blowup::io::write_grid(dir, *g);
  const double nf = blowup::hk_norm(F, 2, p);
  Json s;
  s["residual"] = sol.residual_norm;
  s["theta2_psi_over_F_H2"] = blowup::hk_norm(blowup::partial_theta2(sol.psi), 2, p) / nf;
  s["theta2_regular_over_F_H2"] = blowup::hk_norm(blowup::partial_theta2(sol.psi_regular), 2, p) / nf;
  double ps = 0.0;
  for (double x : blowup::orthogonal_moment(sol.psi).v) ps = std::max(ps, std::abs(x));
  s["max_orthogonal_moment_psi"] = ps;
  return s;
}

Json run_elliptic_mms(const RunConfig& c, const fs::path& dir) {
  const auto levels = blowup::elliptic_mms(c.alpha, c.levels, c.grid[0], c.grid[1], c.xi_range[0], c.xi_range[1]);
  std::vector<double> nr, nt, err, res, order;
  for (const auto& l : levels) {
    nr.push_back(static_cast<double>(l.nr));
    nt.push_back(static_cast<double>(l.nt));
    err.push_back(l.error);
    res.push_back(l.residual);
    order.push_back(l.order);
  }
  blowup::io::write_csv(dir / "mms.csv", {"nr", "nt", "l2_error", "residual", "order"}, {nr, nt, err, res, order});
  std::cout << "   nr    nt      L2 error   order\n";
  for (const auto& l : levels) {
    char line[96];
    std::snprintf(line, sizeof line, "%5zu %5zu  %12.4e  %6.3f\n", l.nr, l.nt, l.error, l.order);
    std::cout << line;
  }
  Json s;
  s["levels"] = c.levels;
  s["finest_error"] = levels.back().error;
  s["last_order"] = levels.back().order;
  return s;
}

blowup::ModulationState relax_state(const RunConfig& c, const blowup::GridPtr& g, const blowup::Params& p) {
  blowup::RelaxOptions o;
  o.dtau = c.dtau;
  o.tau_max = c.tau_max;
  o.tol = c.tol;
  return blowup::relax(g, p, o);
}

Json relax_summary(const blowup::ModulationState& s, const blowup::Params& p) {
  Json j;
  j["status"] = blowup::to_string(s.status);
  j["message"] = s.message;
  j["tau"] = s.tau;
  j["mu"] = s.mu;
  j["lambda"] = s.lambda;
  j["mu_bar"] = s.mu_bar;
  j["dtau_norm"] = s.dtau_norm;
  const double h4 = blowup::hk_norm(s.g, 4, p);
  j["g_H4"] = h4;
  j["g_H4_over_alpha2"] = h4 / (p.alpha * p.alpha);
  j["guardrail_breached"] = s.guardrail_breached;
  j["stationary_residual"] = blowup::stationary_residual(s, p);
  const auto rate = blowup::fitted_decay_rate(s);
  if (rate) j["decay_rate"] = *rate;
  else j["decay_rate"] = nullptr;
  return j;
}

void write_relax_files(const blowup::ModulationState& s, const blowup::GridPtr& g, const fs::path& dir) {
  const auto& h = s.history;
  using R = blowup::HistoryRow;
  blowup::io::write_csv(dir / "history.csv", {"tau", "g_H4", "mu", "lambda", "residual_H3", "l12_zero", "dissipation"},
                        {column(h, &R::tau), column(h, &R::h4), column(h, &R::mu), column(h, &R::lambda),
                         column(h, &R::residual), column(h, &R::l12_zero), column(h, &R::dissipation)});
  blowup::io::write_field_bin(dir / "field.bin", s.g);
  const std::size_t j = g->nt() / 2;
  std::vector<double> slice(g->nr());
  for (std::size_t i = 0; i < g->nr(); ++i) slice[i] = s.g(i, j);
  blowup::io::write_csv(dir / "profile_slice.csv", {"z", "g"}, {g->z, slice});
  blowup::io::write_grid(dir, *g);
}

Json run_relax(const RunConfig& c, const fs::path& dir) {
  const auto g = make_grid(c);
  const auto p = make_params(c, *g);
  const auto s = relax_state(c, g, p);
  write_relax_files(s, g, dir);
  return relax_summary(s, p);
}

Json run_assemble(const RunConfig& c, const fs::path& dir) {
  const auto g = make_grid(c);
  const auto p = make_params(c, *g);
  const auto s = relax_state(c, g, p);
  write_relax_files(s, g, dir);
  const blowup::BlowupSolution sol = blowup::blowup_solution(s, p);
  const double t = c.t_frac * sol.t_star;
  std::vector<double> rho, theta, omega;
  const int nrho = 64, nth = 16;
  for (int a = 0; a < nrho; ++a) {
    const double r = std::pow(10.0, -3.0 + 6.0 * a / (nrho - 1));
    for (int b = 0; b < nth; ++b) {
      const double th = (b + 0.5) * 0.5 * std::numbers::pi / nth;
      rho.push_back(r);
      theta.push_back(th);
      omega.push_back(blowup::assemble_physical(sol, p, t, r, th));
    }
  }
  blowup::io::write_csv(dir / "physical.csv", {"rho", "theta", "omega"}, {rho, theta, omega});
  Json j = relax_summary(s, p);
  j["t_star"] = sol.t_star;
  j["t"] = t;
  j["xi_exponent"] = sol.xi_exponent;
  j["lower_bound"] = sol.lower_bound;
  return j;
}

Json run_verify(const RunConfig& c, const fs::path& dir, bool& failed) {
  const auto g = make_grid(c);
  const auto p = make_params(c, *g);
  const auto reports = blowup::run_suite(c.suite, g, p, c.samples, c.seed);
  std::ofstream os(dir / "report.jsonl");
  Json s;
  std::size_t n_fail = 0;
  for (const auto& r : reports) {
    blowup::write_jsonl(os, r);
    if (!r.pass) ++n_fail;
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %-5s worst %.6g (bound %s)\n", r.property_id.c_str(), r.pass ? "PASS" : "FAIL",
                  r.worst_ratio, std::isfinite(r.bound) ? blowup::io::format_double(r.bound).c_str() : "none");
    std::cout << line;
  }
  if (p.mode == blowup::ConstantsMode::calibrated) {
    const auto cal = blowup::calibrate_constants(g, p, std::min<std::size_t>(c.samples, 50), c.seed);
    s["calibrated_scale"] = cal.scale;
    s["calibrated_min_quotient"] = cal.min_quotient;
    s["calibration_found"] = cal.found;
  }
  s["n_reports"] = reports.size();
  s["n_failed"] = n_fail;
  failed = n_fail > 0;
  return s;
}

Json run_toy(const RunConfig& c, const fs::path& dir) {
  using namespace blowup::toy;
  Json s;
  if (c.model == "active-scalar") {
    const Domain d = parse_domain(c.domain);
    std::vector<double> w0(c.n);
    for (std::size_t k = 0; k < c.n; ++k) {
      if (d == Domain::circle) {
        w0[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(c.n));
      } else {
        w0[k] = 1.0 + 0.5 * std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(c.n - 1));
      }
    }
    const auto tr = active_scalar_evolve(w0, d, c.t_end);
    blowup::io::write_csv(dir / "trajectory.csv", {"t", "sup_omega"}, {tr.t, tr.sup_omega});
    s["case"] = "active_scalar_" + c.domain;
    s["blew_up"] = tr.blew_up;
    if (tr.t_blowup) s["t_star"] = *tr.t_blowup;
    else s["bound"] = *std::max_element(tr.sup_omega.begin(), tr.sup_omega.end());
  } else if (c.model == "hyperbolic") {
    const RhoProfile prof = parse_profile(c.profile);
    const auto tr = hyperbolic_mu_ode(prof, c.t_end, c.dt);
    blowup::io::write_csv(dir / "trajectory.csv", {"t", "mu", "mu_integral"}, {tr.t_nodes, tr.mu_vals, tr.mu_integral});
    s["case"] = to_string(prof);
    s["blew_up"] = tr.blew_up;
    if (tr.t_star) s["t_star"] = *tr.t_star;
    else s["bound"] = tr.mu_max;
    if (tr.min_growth_ratio) s["min_growth_ratio"] = *tr.min_growth_ratio;
    if (prof == RhoProfile::comparison) s["t_star_closed_form"] = comparison_blowup_time(0.1);
  } else if (c.model == "ode") {
    const Nonlinearity kind = parse_nonlinearity(c.nonlinearity);
    OdeToyOptions o;
    o.n = c.n;
    o.xi_min = c.xi_range[0];
    o.xi_max = c.xi_range[1];
    const auto r = ode_selfsimilar_solve(c.epsilon, kind, c.tol, o);
    blowup::io::write_csv(dir / "profile.csv", {"z", "g"}, {r.z, r.g});
    s["case"] = "ode_" + to_string(kind);
    s["epsilon"] = c.epsilon;
    s["converged"] = r.converged;
    s["iterations"] = r.iterations;
    s["residual"] = r.residual;
    s["mu"] = r.mu;
    s["lambda"] = r.lambda;
    s["norm_x"] = r.norm_x;
    s["norm_x_over_epsilon"] = c.epsilon != 0.0 ? r.norm_x / std::abs(c.epsilon) : 0.0;
    s["matching_defect"] = r.matching_defect;
    s["coercivity"] = r.coercivity;
    s["forcing_constant"] = r.forcing_constant;
    s["apriori_holds"] = r.apriori_holds;
  } else {
    throw blowup::ConfigError("model must be active-scalar, hyperbolic or ode");
  }
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int dispatch(RunConfig c) {
  if (!c.config.empty()) apply_config_file(c);
  validate(c);
  const fs::path dir(c.out);
  const auto t0 = std::chrono::steady_clock::now();
  Json summary;
  bool failed = false;
  if (c.command == "fm-evolve") summary = run_fm_evolve(c, dir);
  else if (c.command == "fm-profile") summary = run_fm_profile(c, dir);
  else if (c.command == "elliptic-solve") summary = run_elliptic_solve(c, dir);
  else if (c.command == "elliptic-mms") summary = run_elliptic_mms(c, dir);
  else if (c.command == "relax") summary = run_relax(c, dir);
  else if (c.command == "assemble") summary = run_assemble(c, dir);
  else if (c.command == "verify") summary = run_verify(c, dir, failed);
  else if (c.command == "toy") summary = run_toy(c, dir);
  else throw blowup::ConfigError("unknown command " + c.command);
  write_summary(dir, summary);

  Json meta;
  meta["config"] = config_json(c);
  meta["created_utc"] = utc_timestamp();
  meta["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  meta["field_bin"] = "8-byte magic BLWFLD01, uint32 nr, uint32 nt, nr*nt float64, little-endian, radial-major";
  blowup::io::write_json(dir / "meta.json", meta);
  if (c.command != "verify" && c.command != "elliptic-mms") std::cout << summary.dump(2) << '\n';
  if (failed) throw SuiteFailure("one or more asserted properties failed");
  return 0;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alpha, "alpha in (0, 1/4]");
  sub->add_option("--grid", c.grid, "radial and angular node counts NR,NT")->delimiter(',')->expected(2);
  sub->add_option("--xi-range", c.xi_range, "log-radial range a,b")->delimiter(',')->expected(2);
  sub->add_option("--dtau", c.dtau, "pseudo-time step");
  sub->add_option("--tau-max", c.tau_max, "pseudo-time budget");
  sub->add_option("--tol", c.tol, "convergence tolerance");
  sub->add_option("--samples", c.samples, "random samples per suite");
  sub->add_option("--seed", c.seed, "base seed");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--suite", c.suite, "verify suite name or 'all'");
  sub->add_option("--constants-mode", c.constants_mode, "paper or calibrated");
  sub->add_option("--tail", c.tail, "radial tail model: zero or inverse_z");
  sub->add_option("--config", c.config, "JSON config file; its keys override flags");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar blow-up experiments"};
  app.require_subcommand(1);
  RunConfig c;

  auto* fme = app.add_subcommand("fm-evolve", "numeric vs closed-form evolution of the fundamental model");
  add_common(fme, c);
  fme->add_option("--dt", c.dt, "time step");
  fme->add_option("--t-frac", c.t_frac, "final time as a fraction of the blow-up time");

  auto* fmp = app.add_subcommand("fm-profile", "self-similar profile residual under refinement");
  add_common(fmp, c);
  fmp->add_option("--levels", c.levels, "refinement levels");

  auto* es = app.add_subcommand("elliptic-solve", "solve the polar Biot-Savart problem and split off the singular part");
  add_common(es, c);
  es->add_option("--forcing", c.forcing, "f_star or orthogonal");

  auto* mms = app.add_subcommand("elliptic-mms", "manufactured-solution convergence table");
  add_common(mms, c);
  mms->add_option("--levels", c.levels, "refinement levels");

  auto* rl = app.add_subcommand("relax", "pseudo-time relaxation to the stationary profile");
  add_common(rl, c);

  auto* as = app.add_subcommand("assemble", "relax, then evaluate the physical vorticity");
  add_common(as, c);
  as->add_option("--t-frac", c.t_frac, "physical time as a fraction of the blow-up time");

  auto* vf = app.add_subcommand("verify", "randomized inequality suites");
  add_common(vf, c);

  auto* ty = app.add_subcommand("toy", "pedagogical models");
  add_common(ty, c);
  ty->add_option("--model", c.model, "active-scalar, hyperbolic or ode");
  ty->add_option("--domain", c.domain, "circle or interval");
  ty->add_option("--profile", c.profile, "smooth_plane, half_plane or comparison");
  ty->add_option("--t-end", c.t_end, "final time");
  ty->add_option("--dt", c.dt, "time step");
  ty->add_option("--epsilon", c.epsilon, "perturbation size");
  ty->add_option("--nonlinearity", c.nonlinearity, "square, transport or mixed");
  ty->add_option("--n", c.n, "number of samples");

  CLI11_PARSE(app, argc, argv);
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  // The toy hyperbolic model steps in physical time; keep its own default.
  if (c.command == "toy" && ty->count("--dt") == 0) c.dt = 0.01;

  try {
    return dispatch(c);
  } catch (const SuiteFailure& e) {
    std::cerr << "verify: " << e.what() << '\n';
    return 3;
  } catch (const blowup::ConfigError& e) {
    std::cerr << c.command << ": configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << c.command << ": " << e.what() << '\n';
    return 1;
  }
}
