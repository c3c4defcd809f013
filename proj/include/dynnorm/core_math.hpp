#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dynnorm {

/// Variance floor below which normalization refuses to divide.
inline constexpr double kVarianceFloor = 1e-24;

/// Central finite-difference step used by every derivative oracle.
inline constexpr double kFiniteDifferenceStep = 1e-5;

/// One token representation: C >= 2 finite activations.
///
/// Construction validates the invariants and throws std::invalid_argument
/// when they are violated, so every ChannelVector in flight is usable by
/// the normalization routines.
class ChannelVector {
public:
  explicit ChannelVector(std::vector<double> values);
  ChannelVector(std::initializer_list<double> values)
      : ChannelVector(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& to_vector() const noexcept { return values_; }

  /// Copy with channel `i` replaced by `value`.
  ChannelVector with(std::size_t i, double value) const;

  bool operator==(const ChannelVector&) const = default;

private:
  std::vector<double> values_;
};

struct NormStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance, divisor C
};

NormStats norm_stats(const ChannelVector& x);

/// (x - mean) / sqrt(variance). Throws DegenerateVariance if variance <= kVarianceFloor.
ChannelVector layer_norm(const ChannelVector& x);

/// x / rms(x) without centering. Throws DegenerateVariance if the mean square <= kVarianceFloor.
ChannelVector rms_norm(const ChannelVector& x);

/// F(x) = 1 / (C * sqrt(variance)), the common factor of the diagonal LN Jacobian.
double ln_jacobian_factor(const ChannelVector& x);

/// Closed-form d y_i / d x_i of layer normalization, F(x) * (C - 1 - y_i^2).
/// `i` is zero-based; throws IndexOutOfRange or DegenerateVariance.
double ln_derivative_analytic(const ChannelVector& x, std::size_t i);

/// Central difference of layer_norm(x)_i with respect to x_i.
double ln_derivative_central_difference(const ChannelVector& x, std::size_t i,
                                        double h = kFiniteDifferenceStep);

}  // namespace dynnorm
