#pragma once

#include <cstddef>

#include "dynnorm/core_math.hpp"

namespace dynnorm {

/// Smallest beta accepted by DyISRUParams; callers building parameters from
/// beta_exact (which may be exactly 0) clamp to this.
inline constexpr double kBetaMin = 1e-18;

/// Slope alpha of scaled DyT for a C-channel layer.
struct DyTParams {
  double alpha;
  std::size_t channels;

  DyTParams(double alpha, std::size_t channels);
};

/// Offset beta and center mu of the DyISRU family.
struct DyISRUParams {
  double beta;
  std::size_t channels;
  double mu = 0.0;

  DyISRUParams(double beta, std::size_t channels, double mu = 0.0);

  /// Builds parameters from an analytic beta that may be zero.
  static DyISRUParams clamped(double beta, std::size_t channels, double mu = 0.0);
};

/// sqrt(C - 1), the asymptote shared by LN, DyT and DyISRU.
double channel_bound(std::size_t channels);

/// sqrt(C - 1) * tanh(alpha * x)
double scaled_dyt(double x, const DyTParams& p);

/// d/dx scaled_dyt = alpha * sqrt(C - 1) * (1 - tanh^2(alpha * x))
double scaled_dyt_derivative(double x, const DyTParams& p);

/// sqrt(C - 1) * (x - mu) / sqrt(beta + (x - mu)^2)
double dyisru_general(double x, const DyISRUParams& p);

/// d/d(x - mu) of dyisru_general = sqrt(C - 1) * beta / (beta + (x - mu)^2)^{3/2}
double dyisru_general_derivative(double x, const DyISRUParams& p);

/// dyisru_general with mu forced to 0.
double dyisru(double x, const DyISRUParams& p);

/// x / sqrt(1 + alpha * x^2). Throws std::invalid_argument unless alpha > 0.
double isru(double x, double alpha);

/// Channel-specific beta that makes dyisru_general reproduce layer_norm(x)_i:
/// (C - 1) * var_without_i - var, where var_without_i sums the other channels'
/// squared deviations from the full mean with divisor C - 1. Always >= 0 up to
/// rounding. `i` is zero-based.
double beta_exact(const ChannelVector& x, std::size_t i);

}  // namespace dynnorm
