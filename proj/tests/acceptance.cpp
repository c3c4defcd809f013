// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dynnorm/cli.hpp"
#include "dynnorm/core_math.hpp"
#include "dynnorm/fitting.hpp"
#include "dynnorm/random.hpp"
#include "dynnorm/simulation.hpp"
#include "dynnorm/verification.hpp"

namespace fs = std::filesystem;
using namespace dynnorm;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Outcome from_check(const CheckResult& c, double metric) {
  return {c.passed, fmt("%s trials=%zu max_abs=%.3e max_rel=%.3e metric=%.3e tol=%.1e", c.name.c_str(),
                        c.trials, c.max_abs_error, c.max_rel_error, metric, c.tolerance)};
}

const std::vector<double> kGrid = uniform_grid(-100.0, 100.0, 2001);
const std::vector<std::size_t> kOdeChannels{2, 50, 100};

Outcome ln_derivative() {
  const std::vector<std::size_t> cs{2, 3, 10, 100};
  const auto c = check_ln_derivative(1, 100, cs, Execution::Parallel);
  return from_check(c, c.max_rel_error);
}

Outcome dyt_ode() {
  const std::vector<double> alphas{0.049, 0.5, 2.0};
  const auto c = check_dyt_ode(alphas, kOdeChannels, kGrid, Execution::Parallel);
  return from_check(c, c.max_abs_error);
}

Outcome dyisru_ode() {
  const std::vector<double> betas{1.0, 30.0, 301.1};
  const std::vector<double> mus{0.0, 0.37};
  const auto c = check_dyisru_ode(betas, kOdeChannels, mus, kGrid, Execution::Parallel);
  return from_check(c, c.max_rel_error);
}

Outcome channel_beta() {
  const auto c = check_channel_beta(7, 500, 100, Execution::Parallel);
  return from_check(c, c.max_rel_error);
}

Outcome isru_identity() {
  const auto c = check_isru_equivalence(3, 10000, Execution::Parallel);
  return from_check(c, c.max_rel_error);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome outlier_reproduction() {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  const auto fits = sweep_seeds(SimulationConfig{}, seeds, Execution::Parallel);
  std::vector<double> alpha, beta, dyt_mae, dyisru_mae;
  double worst_ratio = INFINITY;
  for (const auto& f : fits) {
    alpha.push_back(f.dyt.parameter);
    beta.push_back(f.dyisru.parameter);
    const double a = residual_stats(f.dyt).mae;
    const double b = residual_stats(f.dyisru).mae;
    dyt_mae.push_back(a);
    dyisru_mae.push_back(b);
    worst_ratio = std::min(worst_ratio, a / b);
  }
  const double ma = median(alpha), mb = median(beta), md = median(dyt_mae), mi = median(dyisru_mae);
  const bool ok = ma >= 0.03 && ma <= 0.07 && mb >= 150 && mb <= 600 && md >= 0.15 && md <= 0.6 &&
                  mi <= 0.02 && worst_ratio >= 10.0;
  return {ok, fmt("20 seeds: median alpha=%.4f beta=%.1f dyt_mae=%.3f dyisru_mae=%.4f; "
                  "min dyt/dyisru mae ratio=%.1f",
                  ma, mb, md, mi, worst_ratio)};
}

Outcome ln_invariants() {
  CounterRng root(2024);
  double worst_mean = 0, worst_var = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    CounterRng rng = root.split("vector", t);
    const auto c = rng.uniform_int(2, 256);
    const double scale = std::pow(10.0, rng.uniform(-2, 2));
    const double offset = scale * rng.uniform(-3, 3);  // conditioning bounded: |offset| <= 3 sd
    std::vector<double> v(c);
    for (auto& e : v) e = offset + scale * rng.normal();
    const auto s = norm_stats(layer_norm(ChannelVector(std::move(v))));
    worst_mean = std::max(worst_mean, std::abs(s.mean));
    worst_var = std::max(worst_var, std::abs(s.variance - 1.0));
  }
  return {worst_mean <= 1e-12 && worst_var <= 1e-9,
          fmt("10000 vectors: max |mean|=%.3e (tol 1e-12), max |var-1|=%.3e (tol 1e-9)", worst_mean, worst_var)};
}

Outcome fitter_self_consistency() {
  CounterRng root(77);
  double worst_rel[2] = {0, 0}, worst_sse[2] = {0, 0};
  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng = root.split("trial", t);
    const auto c = rng.uniform_int(2, 400);
    const int n = static_cast<int>(rng.uniform_int(3, 30));
    const double params[2] = {std::pow(10.0, rng.uniform(-2.5, 0)), std::pow(10.0, rng.uniform(-1, 3.5))};
    for (int k = 0; k < 2; ++k) {
      const auto kind = k == 0 ? FunctionKind::DyT : FunctionKind::DyISRU;
      const double lo = k == 0 ? 0.1 / params[0] : std::sqrt(params[1]) / 5;
      const double hi = k == 0 ? rng.uniform(2.0, 4.0) / params[0] : 5 * std::sqrt(params[1]);
      std::vector<FitPoint> pts;
      for (int j = 0; j < n; ++j) {
        const double x = lo + (hi - lo) * j / (n - 1);
        pts.push_back({x, model_value(kind, params[k], c, x)});
      }
      const auto r = fit(mirror_augment(pts, c), kind);
      worst_rel[k] = std::max(worst_rel[k], std::abs(r.parameter - params[k]) / params[k]);
      worst_sse[k] = std::max(worst_sse[k], r.sse);
    }
  }
  const bool ok = worst_rel[0] <= 1e-4 && worst_rel[1] <= 1e-4 && worst_sse[0] <= 1e-12 && worst_sse[1] <= 1e-12;
  return {ok, fmt("100 trials/family: dyt max rel=%.2e sse=%.2e; dyisru max rel=%.2e sse=%.2e", worst_rel[0],
                  worst_sse[0], worst_rel[1], worst_sse[1])};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dynnorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "dynnorm_acceptance_determinism";
  fs::remove_all(root);
  int codes = 0;
  for (const char* run : {"a", "b"}) {
    codes |= cli({"simulate", "--seed", "11", "--out", (root / run / "sim").string()});
    codes |= cli({"figures", "--seed", "11", "--out", (root / run / "fig").string()});
  }
  std::size_t compared = 0, differing = 0;
  for (const char* sub : {"sim", "fig"}) {
    for (const auto& e : fs::directory_iterator(root / "a" / sub)) {
      if (e.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(e.path()) != slurp(root / "b" / sub / e.path().filename())) ++differing;
    }
  }
  fs::remove_all(root);
  return {codes == 0 && compared >= 4 && differing == 0,
          fmt("exit codes ok=%s, %zu CSVs compared, %zu differ", codes == 0 ? "yes" : "no", compared, differing)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "LN derivative vs central differences", 1.0, ln_derivative},
      {2, "scaled DyT ODE identity", 1.0, dyt_ode},
      {3, "general DyISRU ODE identity", 0.0, dyisru_ode},
      {4, "channel-exact beta reproduces LN", 0.0, channel_beta},
      {5, "DyISRU / ISRU identity", 0.0, isru_identity},
      {6, "outlier experiment reproduction", 10.0, outlier_reproduction},
      {7, "LN mean / variance invariants", 0.0, ln_invariants},
      {8, "fitter self-consistency", 0.0, fitter_self_consistency},
      {9, "byte-identical CSVs for a fixed seed", 0.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.passed = false;
      o.detail += fmt(" [runtime %.3fs exceeds %.0fs]", secs, c.time_limit_s);
    }
    std::printf("[%s] AC%d %s (%.3fs): %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.detail.c_str());
    failures += o.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
