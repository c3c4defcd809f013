#include "dynnorm/core_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dynnorm/errors.hpp"

namespace dynnorm {

ChannelVector::ChannelVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("ChannelVector needs at least 2 channels, got " +
                                std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw std::invalid_argument("ChannelVector entry " + std::to_string(k) + " is not finite");
    }
  }
}

ChannelVector ChannelVector::with(std::size_t i, double value) const {
  if (i >= values_.size()) {
    throw IndexOutOfRange("channel " + std::to_string(i) + " out of range for C=" +
                          std::to_string(values_.size()));
  }
  auto copy = values_;
  copy[i] = value;
  return ChannelVector(std::move(copy));
}

NormStats norm_stats(const ChannelVector& x) {
  const auto c = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x.values()) sum += v;
  double mean = sum / c;
  // Second pass folds the rounding error of the first mean back in.
  double residual = 0.0;
  for (double v : x.values()) residual += v - mean;
  mean += residual / c;
  double ss = 0.0;
  for (double v : x.values()) ss += (v - mean) * (v - mean);
  return {mean, ss / c};
}

namespace {

void check_index(const ChannelVector& x, std::size_t i) {
  if (i >= x.size()) {
    throw IndexOutOfRange("channel " + std::to_string(i) + " out of range for C=" +
                          std::to_string(x.size()));
  }
}

double checked_sd(double variance, const char* who) {
  if (!(variance > kVarianceFloor)) {
    throw DegenerateVariance(std::string(who) + ": variance " + std::to_string(variance) +
                             " is at or below the degeneracy floor");
  }
  return std::sqrt(variance);
}

}  // namespace

ChannelVector layer_norm(const ChannelVector& x) {
  const auto stats = norm_stats(x);
  const double sd = checked_sd(stats.variance, "layer_norm");
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = (x[k] - stats.mean) / sd;
  return ChannelVector(std::move(y));
}

ChannelVector rms_norm(const ChannelVector& x) {
  double ss = 0.0;
  for (double v : x.values()) ss += v * v;
  const double rms = checked_sd(ss / static_cast<double>(x.size()), "rms_norm");
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] / rms;
  return ChannelVector(std::move(y));
}

double ln_jacobian_factor(const ChannelVector& x) {
  const auto stats = norm_stats(x);
  return 1.0 / (static_cast<double>(x.size()) * checked_sd(stats.variance, "ln_jacobian_factor"));
}

double ln_derivative_analytic(const ChannelVector& x, std::size_t i) {
  check_index(x, i);
  const auto stats = norm_stats(x);
  const double sd = checked_sd(stats.variance, "ln_derivative_analytic");
  const double c = static_cast<double>(x.size());
  const double yi = (x[i] - stats.mean) / sd;
  return (c - 1.0 - yi * yi) / (c * sd);
}

double ln_derivative_central_difference(const ChannelVector& x, std::size_t i, double h) {
  check_index(x, i);
  const double up = layer_norm(x.with(i, x[i] + h))[i];
  const double down = layer_norm(x.with(i, x[i] - h))[i];
  return (up - down) / (2.0 * h);
}

}  // namespace dynnorm
