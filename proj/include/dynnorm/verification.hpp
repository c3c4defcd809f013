#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dynnorm {

/// Selects the serial reference loop or the OpenMP kernel. Both produce
/// bit-identical results: every trial owns a counter-based RNG stream and the
/// only cross-trial reduction is max, which is order independent.
enum class Execution { Serial, Parallel };

struct CheckResult {
  std::string name;
  std::size_t trials = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  /// True iff every check passed (and there is at least one).
  bool verdict() const;
};

/// Tolerances pinned for each check. The metric a tolerance applies to is
/// documented on the corresponding check function.
namespace tolerance {
inline constexpr double kLnDerivativeRel = 1e-6;
/// Below this |derivative| the relative metric switches to absolute / this,
/// making the effective absolute bound kLnDerivativeRel * 1e-2 = 1e-8.
inline constexpr double kLnDerivativeNearZero = 1e-2;
inline constexpr double kDytOdeAbs = 1e-8;
inline constexpr double kDyisruOdeRel = 1e-10;
inline constexpr double kChannelBetaRel = 1e-10;
inline constexpr double kIsruRel = 1e-12;
}  // namespace tolerance

/// Evenly spaced grid of `points` values on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// Draws random vectors (standard normal scaled by a sigma drawn from
/// [0.1, 10]) and compares ln_derivative_analytic with a central difference
/// for every channel. Metric: |analytic - fd| / max(|analytic|, 1e-2),
/// i.e. relative error, degrading to absolute/1e-2 near zero derivatives.
/// `trials_per_channel_count` vectors are drawn for each C in `channel_counts`.
CheckResult check_ln_derivative(std::uint64_t seed, std::size_t trials_per_channel_count,
                                std::span<const std::size_t> channel_counts,
                                Execution exec = Execution::Serial);

/// Scaled DyT against dy/dx = F * (C - 1 - y^2) with F = alpha / sqrt(C - 1).
/// Metric: absolute residual; both the analytic derivative and a central
/// difference of scaled_dyt must satisfy the ODE.
CheckResult check_dyt_ode(std::span<const double> alphas, std::span<const std::size_t> channel_counts,
                          std::span<const double> grid, Execution exec = Execution::Serial);

/// General DyISRU against the chain-factored ODE
///   dy/du * (C - 1) / C == (1 / C) * (y / u) * (C - 1 - y^2),  u = x - mu,
/// at every grid point with x != mu. Metric: relative residual.
CheckResult check_dyisru_ode(std::span<const double> betas, std::span<const std::size_t> channel_counts,
                             std::span<const double> mus, std::span<const double> grid,
                             Execution exec = Execution::Serial);

/// For random vectors with C drawn from [2, max_channels], every channel i:
/// dyisru_general(x_i; beta_exact(x, i), mean(x)) vs layer_norm(x)_i.
/// Metric: relative error.
CheckResult check_channel_beta(std::uint64_t seed, std::size_t trials, std::size_t max_channels,
                               Execution exec = Execution::Serial);

/// sqrt(beta) * dyisru(x; beta, C) vs sqrt(C - 1) * isru(x; 1 / beta) over
/// random (x, beta, C). Metric: relative error.
CheckResult check_isru_equivalence(std::uint64_t seed, std::size_t trials,
                                   Execution exec = Execution::Serial);

struct VerificationConfig {
  std::uint64_t seed = 1;
  std::size_t ln_trials_per_channel_count = 100;
  std::vector<std::size_t> ln_channel_counts{2, 3, 10, 100};
  std::vector<double> dyt_alphas{0.049, 0.5, 2.0};
  std::vector<double> dyisru_betas{1.0, 30.0, 301.1};
  std::vector<std::size_t> ode_channel_counts{2, 50, 100};
  std::vector<double> dyisru_mus{0.0, 0.37};
  std::vector<double> grid = uniform_grid(-100.0, 100.0, 2001);
  std::size_t beta_trials = 500;
  std::size_t beta_max_channels = 100;
  std::size_t isru_trials = 1000;

  /// Sets every randomized trial count at once.
  void set_trials(std::size_t trials);
};

/// Runs the five checks in a fixed order.
VerificationReport run_verification(const VerificationConfig& config,
                                    Execution exec = Execution::Serial);

}  // namespace dynnorm
