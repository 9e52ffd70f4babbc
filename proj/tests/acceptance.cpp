// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <scratch-dir> [criterion-number]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "blowup/elliptic.hpp"
#include "blowup/fundamental_model.hpp"
#include "blowup/norms.hpp"
#include "blowup/operators.hpp"
#include "blowup/selfsimilar.hpp"
#include "blowup/toy_models.hpp"
#include "blowup/verify.hpp"

using namespace blowup;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

GridPtr grid(std::size_t nr, std::size_t nt) { return build_grid(nr, nt, -10.0, 10.0); }

Outcome fm_exactness() {
  const auto t0 = Clock::now();
  const auto g = grid(256, 64);
  const Field f0 = sample(g, [](double z, double t) {
    const double s = std::sin(t), c = std::cos(t);
    return 6.0 * s * c * c * z / ((1.0 + z) * (1.0 + z));
  });
  const double T = blowup_time(f0);
  const FMState st = evolve_numeric(f0, 1e-4, 0.5 * T);
  const Field ex = evolve_exact(f0, st.t);
  double err = 0.0;
  for (std::size_t k = 0; k < ex.v.size(); ++k)
    if (ex.v[k] != 0.0) err = std::max(err, std::abs(st.f.v[k] - ex.v[k]) / std::abs(ex.v[k]));
  const double sec = seconds_since(t0);
  return {err <= 1e-6 && sec < 60.0 && !st.halted,
          fmt("max rel error %.3e", err) + fmt(" at t = %.4f", st.t) + fmt(" (T* = %.4f)", T) + fmt(", %.2f s", sec)};
}

Outcome profile_order() {
  std::vector<double> r;
  for (std::size_t l = 0; l < 3; ++l) {
    const auto g = grid(64u << l, 16u << l);
    const Params p = make_params(0.05, *g);
    r.push_back(profile_residual(angular_profiles(p, *g, false), g));
  }
  const double o1 = std::log2(r[0] / r[1]), o2 = std::log2(r[1] / r[2]);
  return {o1 >= 1.8 && o2 >= 1.8, fmt("residuals %.3e", r[0]) + fmt(" %.3e", r[1]) + fmt(" %.3e", r[2]) +
                                      fmt(", orders %.3f", o1) + fmt(" %.3f", o2)};
}

Outcome elliptic_mms_gate() {
  const auto t0 = Clock::now();
  const auto lv = elliptic_mms(0.05, 4, 64, 16, -10.0, 10.0);
  bool ok = true;
  std::string d = "orders";
  for (std::size_t k = 1; k < lv.size(); ++k) {
    ok = ok && lv[k].order >= 1.8;
    d += fmt(" %.3f", lv[k].order);
  }
  const auto g = grid(512, 128);
  const double orth = orthogonal_response(g, make_params(0.05, *g));
  const double sec = seconds_since(t0);
  ok = ok && orth <= 1e-8 && sec < 300.0;
  return {ok, d + fmt(", finest error %.3e", lv.back().error) + fmt(", orthogonal moment %.3e", orth) +
                  fmt(", %.2f s", sec)};
}

Outcome removing_l12() {
  std::vector<double> psi, reg;
  std::string d;
  for (double a : {0.2, 0.1, 0.05, 0.025}) {
    const auto g = grid(128, 32);
    const Params p = make_params(a, *g);
    const Field F = f_star(p, g);
    const EllipticSolution sol = extract_singular(F, solve_bsl(F, p), p);
    const double nf = hk_norm(F, 2, p);
    psi.push_back(hk_norm(partial_theta2(sol.psi), 2, p) / nf);
    reg.push_back(hk_norm(partial_theta2(sol.psi_regular), 2, p) / nf);
  }
  const double reg_var = *std::max_element(reg.begin(), reg.end()) / *std::min_element(reg.begin(), reg.end());
  const double psi_growth = psi.back() / psi.front();
  return {reg_var < 4.0 && psi_growth >= 4.0,
          fmt("regular variation %.3f", reg_var) + fmt(", full growth %.3f", psi_growth)};
}

Outcome hardy_coercivity() {
  const auto t0 = Clock::now();
  const auto g = grid(128, 32);
  const Params p = make_params(0.01, *g);
  bool ok = true;
  std::string d;
  for (const char* s : {"hardy_weight", "coercivity_L2", "coercivity_H1", "coercivity_H4"}) {
    for (const auto& r : run_suite(s, g, p, 200, 7)) {
      ok = ok && r.pass && r.n_samples == 200;
      d += r.property_id + fmt(" %.4g; ", r.worst_ratio);
    }
  }
  const double sec = seconds_since(t0);
  return {ok && sec < 600.0, d + fmt("%.2f s", sec)};
}

Outcome relaxation_scaling() {
  std::vector<double> ratios;
  bool ok = true;
  std::string d;
  for (double a : {0.1, 0.05, 0.025}) {
    const auto g = grid(128, 32);
    const Params p = make_params(a, *g);
    RelaxOptions o;
    const ModulationState s = relax(g, p, o);
    if (s.status != RelaxStatus::converged) {
      d += fmt("alpha %.3g: ", a) + to_string(s.status) + " (" + s.message + "); ";
      continue;
    }
    double l12max = 0.0;
    for (const auto& h : s.history) l12max = std::max(l12max, std::abs(h.l12_zero));
    const double res = stationary_residual(s, p);
    const double ratio = hk_norm(s.g, 4, p) / (a * a);
    ratios.push_back(ratio);
    ok = ok && l12max <= 1e-8 && std::abs(s.mu) <= 10 * a && std::abs(s.lambda) <= 10 * a && res <= 10 * o.tol;
    d += fmt("alpha %.3g: ", a) + fmt("ratio %.2f", ratio) + fmt(" mu %.3g", s.mu) + fmt(" lambda %.3g", s.lambda) +
         fmt(" residual %.2e", res) + fmt(" max|L12(0)| %.1e; ", l12max);
  }
  if (ratios.empty()) return {false, d + "no alpha converged"};
  const double var = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  return {ok && var < 4.0, d + fmt("variation %.3f", var)};
}

Outcome toy_models() {
  using namespace blowup::toy;
  const auto blow = hyperbolic_mu_ode(RhoProfile::half_plane, 10.0, 0.01);
  const auto bounded = hyperbolic_mu_ode(RhoProfile::smooth_plane, 10.0, 0.01);
  bool ok = blow.blew_up && blow.t_star.has_value() && !bounded.blew_up && std::isfinite(bounded.mu_max);
  std::string d = fmt("half-plane t* %.4f", blow.t_star.value_or(NAN)) + fmt(", smooth max mu %.3f", bounded.mu_max);
  std::vector<double> c;
  for (double e : {0.01, 0.05}) {
    const auto r = ode_selfsimilar_solve(e, Nonlinearity::transport, 1e-10);
    ok = ok && r.converged && r.matching_defect <= 1e-6;
    c.push_back(r.norm_x / e);
    d += fmt(", eps %.2f", e) + fmt(": |g|/eps %.3f", r.norm_x / e) + fmt(" defect %.1e", r.matching_defect);
  }
  const double C = std::max(c[0], c[1]);
  ok = ok && C <= 2.0 * std::min(c[0], c[1]);
  return {ok, d + fmt(", common C %.3f", C)};
}

std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism(const fs::path& scratch) {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"fm", "fm-evolve --grid 64,16 --dt 1e-3"},
      {"fm_profile", "fm-profile --grid 32,8 --levels 3"},
      {"elliptic", "elliptic-solve --grid 64,16 --alpha 0.1"},
      {"mms", "elliptic-mms --grid 32,8 --levels 3"},
      {"relax", "relax --grid 64,16 --alpha 0.1 --tau-max 2"},
      {"assemble", "assemble --grid 64,16 --alpha 0.1 --tau-max 2"},
      {"verify", "verify --grid 64,16 --alpha 0.1 --samples 10"},
      {"toy_ode", "toy --model ode --epsilon 0.05"},
      {"toy_hyp", "toy --model hyperbolic --profile half_plane"},
      {"toy_as", "toy --model active-scalar --domain interval --t-end 2"},
  };
  std::size_t files = 0;
  for (const auto& [name, args] : runs) {
    fs::path dirs[2] = {scratch / "det_a" / name, scratch / "det_b" / name};
    for (const auto& d : dirs) {
      fs::remove_all(d);
      const std::string cmd = std::string(BLOWUP_CLI_PATH) + " " + args + " --out " + d.string() + " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, "run failed: " + args};
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      const std::string fname = e.path().filename().string();
      if (fname == "meta.json") continue;
      if (!fs::exists(dirs[1] / fname) || read_bytes(e.path()) != read_bytes(dirs[1] / fname))
        return {false, "differs: " + name + "/" + fname};
      ++files;
    }
  }
  return {files > 0, std::to_string(runs.size()) + " commands, " + std::to_string(files) + " files identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "blowup_acceptance";
  fs::create_directories(scratch);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> gates = {
      {"1 fundamental-model exactness", fm_exactness},
      {"2 self-similar profile order", profile_order},
      {"3 elliptic MMS and orthogonal data", elliptic_mms_gate},
      {"4 singular-part separation", removing_l12},
      {"5 Hardy and coercivity suites", hardy_coercivity},
      {"6 relaxation scaling", relaxation_scaling},
      {"7 toy models", toy_models},
      {"8 determinism", [&] { return determinism(scratch); }},
  };
  const int only = argc > 2 ? std::atoi(argv[2]) : 0;
  if (only < 0 || only > static_cast<int>(gates.size())) {
    std::fprintf(stderr, "criterion number must lie in 1..%zu\n", gates.size());
    return 2;
  }
  int failed = 0;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    const auto& [name, fn] = gates[k];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
