#include "dynnorm/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dynnorm/activations.hpp"
#include "dynnorm/core_math.hpp"
#include "dynnorm/random.hpp"

namespace dynnorm {

namespace {

constexpr double kRedrawVariance = 1e-12;

struct ErrorMax {
  double abs = 0.0;
  double rel = 0.0;

  void add(double abs_err, double rel_err) {
    // NaN must never look like a pass.
    if (std::isnan(abs_err)) abs_err = std::numeric_limits<double>::infinity();
    if (std::isnan(rel_err)) rel_err = std::numeric_limits<double>::infinity();
    abs = std::max(abs, abs_err);
    rel = std::max(rel, rel_err);
  }
  void merge(const ErrorMax& other) { add(other.abs, other.rel); }
};

// Runs body(k, acc) for k in [0, n). The serial branch is the reference
// implementation; the OpenMP branch must agree with it bit for bit.
template <typename Body>
ErrorMax for_each_trial(std::size_t n, Execution exec, Body&& body) {
  ErrorMax total;
  if (exec == Execution::Serial) {
    for (std::size_t k = 0; k < n; ++k) body(k, total);
    return total;
  }
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    ErrorMax local;
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < count; ++k) body(static_cast<std::size_t>(k), local);
#pragma omp critical(dynnorm_error_merge)
    total.merge(local);
  }
  return total;
}

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

CheckResult finish(std::string name, std::size_t trials, const ErrorMax& err, double tol,
                   bool use_relative) {
  CheckResult r;
  r.name = std::move(name);
  r.trials = trials;
  r.max_abs_error = err.abs;
  r.max_rel_error = err.rel;
  r.tolerance = tol;
  r.passed = (use_relative ? err.rel : err.abs) <= tol;
  return r;
}

// Standard normal sample scaled by a random sigma in [0.1, 10]; redrawn if
// its variance is (numerically) zero.
ChannelVector random_vector(CounterRng& rng, std::size_t channels) {
  for (;;) {
    const double scale = rng.uniform(0.1, 10.0);
    std::vector<double> v(channels);
    for (auto& e : v) e = scale * rng.normal();
    ChannelVector x(std::move(v));
    if (norm_stats(x).variance >= kRedrawVariance) return x;
  }
}

void require_trials(std::size_t trials, const char* who) {
  if (trials < 1) throw std::invalid_argument(std::string(who) + ": trials must be >= 1");
}

void require_channels(std::span<const std::size_t> counts, const char* who) {
  if (counts.empty()) throw std::invalid_argument(std::string(who) + ": no channel counts");
  for (auto c : counts) {
    if (c < 2) throw std::invalid_argument(std::string(who) + ": channel count must be >= 2");
  }
}

}  // namespace

bool VerificationReport::verdict() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("uniform_grid needs at least 2 points");
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;
  return grid;
}

CheckResult check_ln_derivative(std::uint64_t seed, std::size_t trials_per_channel_count,
                                std::span<const std::size_t> channel_counts, Execution exec) {
  require_trials(trials_per_channel_count, "check_ln_derivative");
  require_channels(channel_counts, "check_ln_derivative");
  const CounterRng root = CounterRng(seed).split("ln_derivative");
  const std::size_t n = trials_per_channel_count * channel_counts.size();

  const auto err = for_each_trial(n, exec, [&](std::size_t k, ErrorMax& acc) {
    const std::size_t channels = channel_counts[k / trials_per_channel_count];
    CounterRng rng = root.split("trial", k);
    const auto x = random_vector(rng, channels);
    for (std::size_t i = 0; i < channels; ++i) {
      const double analytic = ln_derivative_analytic(x, i);
      const double fd = ln_derivative_central_difference(x, i);
      const double diff = std::abs(analytic - fd);
      acc.add(diff, diff / std::max(std::abs(analytic), tolerance::kLnDerivativeNearZero));
    }
  });
  return finish("ln_derivative", n, err, tolerance::kLnDerivativeRel, true);
}

CheckResult check_dyt_ode(std::span<const double> alphas, std::span<const std::size_t> channel_counts,
                          std::span<const double> grid, Execution exec) {
  require_channels(channel_counts, "check_dyt_ode");
  if (alphas.empty() || grid.empty()) throw std::invalid_argument("check_dyt_ode: empty input");
  const std::size_t per_param = grid.size();
  const std::size_t n = alphas.size() * channel_counts.size() * per_param;
  const double h = kFiniteDifferenceStep;

  const auto err = for_each_trial(n, exec, [&](std::size_t k, ErrorMax& acc) {
    const std::size_t combo = k / per_param;
    const DyTParams p(alphas[combo / channel_counts.size()],
                      channel_counts[combo % channel_counts.size()]);
    const double x = grid[k % per_param];
    const double c = static_cast<double>(p.channels);
    const double f = p.alpha / std::sqrt(c - 1.0);
    const double y = scaled_dyt(x, p);
    const double rhs = f * (c - 1.0 - y * y);
    const double fd = (scaled_dyt(x + h, p) - scaled_dyt(x - h, p)) / (2.0 * h);
    const double residual =
        std::max(std::abs(scaled_dyt_derivative(x, p) - rhs), std::abs(fd - rhs));
    acc.add(residual, residual / std::max(std::abs(rhs), 1.0));
  });
  return finish("dyt_ode", n, err, tolerance::kDytOdeAbs, false);
}

CheckResult check_dyisru_ode(std::span<const double> betas, std::span<const std::size_t> channel_counts,
                             std::span<const double> mus, std::span<const double> grid,
                             Execution exec) {
  require_channels(channel_counts, "check_dyisru_ode");
  if (betas.empty() || mus.empty() || grid.empty()) {
    throw std::invalid_argument("check_dyisru_ode: empty input");
  }
  const std::size_t per_param = grid.size();
  const std::size_t combos = betas.size() * channel_counts.size() * mus.size();
  const std::size_t n = combos * per_param;

  // Grid points sitting on mu are excluded (removable singularity of y/u).
  auto on_center = [](double x, double mu) {
    return std::abs(x - mu) <= 1e-12 * std::max(1.0, std::abs(mu));
  };
  std::size_t evaluated = 0;
  for (double mu : mus) {
    for (double x : grid) evaluated += on_center(x, mu) ? 0 : 1;
  }
  evaluated *= betas.size() * channel_counts.size();

  const auto err = for_each_trial(n, exec, [&](std::size_t k, ErrorMax& acc) {
    std::size_t combo = k / per_param;
    const double mu = mus[combo % mus.size()];
    combo /= mus.size();
    const std::size_t channels = channel_counts[combo % channel_counts.size()];
    const double beta = betas[combo / channel_counts.size()];
    const double x = grid[k % per_param];
    if (on_center(x, mu)) return;

    const DyISRUParams p(beta, channels, mu);
    const double c = static_cast<double>(channels);
    const double u = x - mu;
    const double y = dyisru_general(x, p);
    const double lhs = dyisru_general_derivative(x, p) * (c - 1.0) / c;
    const double rhs = (y / u) * (c - 1.0 - y * y) / c;
    acc.add(std::abs(lhs - rhs), relative(lhs, rhs));
  });
  return finish("dyisru_ode", evaluated, err, tolerance::kDyisruOdeRel, true);
}

CheckResult check_channel_beta(std::uint64_t seed, std::size_t trials, std::size_t max_channels,
                               Execution exec) {
  require_trials(trials, "check_channel_beta");
  if (max_channels < 2) throw std::invalid_argument("check_channel_beta: max_channels must be >= 2");
  const CounterRng root = CounterRng(seed).split("channel_beta");

  const auto err = for_each_trial(trials, exec, [&](std::size_t k, ErrorMax& acc) {
    CounterRng rng = root.split("trial", k);
    const std::size_t channels = rng.uniform_int(2, max_channels);
    const auto x = random_vector(rng, channels);
    const double mean = norm_stats(x).mean;
    const auto y = layer_norm(x);
    for (std::size_t i = 0; i < channels; ++i) {
      const auto p = DyISRUParams::clamped(beta_exact(x, i), channels, mean);
      const double z = dyisru_general(x[i], p);
      acc.add(std::abs(z - y[i]), relative(z, y[i]));
    }
  });
  return finish("channel_beta", trials, err, tolerance::kChannelBetaRel, true);
}

CheckResult check_isru_equivalence(std::uint64_t seed, std::size_t trials, Execution exec) {
  require_trials(trials, "check_isru_equivalence");
  const CounterRng root = CounterRng(seed).split("isru_equivalence");

  const auto err = for_each_trial(trials, exec, [&](std::size_t k, ErrorMax& acc) {
    CounterRng rng = root.split("trial", k);
    const std::size_t channels = rng.uniform_int(2, 1000);
    const double beta = std::pow(10.0, rng.uniform(-3.0, 4.0));
    const double x = std::pow(10.0, rng.uniform(-2.0, 2.0)) * rng.normal();
    const DyISRUParams p(beta, channels);
    const double lhs = std::sqrt(beta) * dyisru(x, p);
    const double rhs = channel_bound(channels) * isru(x, 1.0 / beta);
    acc.add(std::abs(lhs - rhs), relative(lhs, rhs));
  });
  return finish("isru_equivalence", trials, err, tolerance::kIsruRel, true);
}

void VerificationConfig::set_trials(std::size_t trials) {
  ln_trials_per_channel_count = trials;
  beta_trials = trials;
  isru_trials = trials;
}

VerificationReport run_verification(const VerificationConfig& config, Execution exec) {
  VerificationReport report;
  report.seed = config.seed;
  report.checks.push_back(check_ln_derivative(config.seed, config.ln_trials_per_channel_count,
                                              config.ln_channel_counts, exec));
  report.checks.push_back(
      check_dyt_ode(config.dyt_alphas, config.ode_channel_counts, config.grid, exec));
  report.checks.push_back(check_dyisru_ode(config.dyisru_betas, config.ode_channel_counts,
                                           config.dyisru_mus, config.grid, exec));
  report.checks.push_back(
      check_channel_beta(config.seed, config.beta_trials, config.beta_max_channels, exec));
  report.checks.push_back(check_isru_equivalence(config.seed, config.isru_trials, exec));
  return report;
}

}  // namespace dynnorm
