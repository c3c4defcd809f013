#include "dynnorm/activations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dynnorm/errors.hpp"

namespace dynnorm {

namespace {

void require_channels(std::size_t channels) {
  if (channels < 2) {
    throw std::invalid_argument("channel count must be >= 2, got " + std::to_string(channels));
  }
}

}  // namespace

DyTParams::DyTParams(double alpha_, std::size_t channels_) : alpha(alpha_), channels(channels_) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("DyT alpha must be finite and > 0");
  }
  require_channels(channels);
}

DyISRUParams::DyISRUParams(double beta_, std::size_t channels_, double mu_)
    : beta(beta_), channels(channels_), mu(mu_) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("DyISRU beta must be finite and > 0");
  }
  if (!std::isfinite(mu)) throw std::invalid_argument("DyISRU mu must be finite");
  require_channels(channels);
}

DyISRUParams DyISRUParams::clamped(double beta, std::size_t channels, double mu) {
  return DyISRUParams(beta < kBetaMin ? kBetaMin : beta, channels, mu);
}

double channel_bound(std::size_t channels) {
  return std::sqrt(static_cast<double>(channels) - 1.0);
}

double scaled_dyt(double x, const DyTParams& p) {
  return channel_bound(p.channels) * std::tanh(p.alpha * x);
}

double scaled_dyt_derivative(double x, const DyTParams& p) {
  const double t = std::tanh(p.alpha * x);
  return p.alpha * channel_bound(p.channels) * (1.0 - t * t);
}

double dyisru_general(double x, const DyISRUParams& p) {
  const double u = x - p.mu;
  return channel_bound(p.channels) * u / std::sqrt(p.beta + u * u);
}

double dyisru_general_derivative(double x, const DyISRUParams& p) {
  const double u = x - p.mu;
  const double d = p.beta + u * u;
  return channel_bound(p.channels) * p.beta / (d * std::sqrt(d));
}

double dyisru(double x, const DyISRUParams& p) {
  return channel_bound(p.channels) * x / std::sqrt(p.beta + x * x);
}

double isru(double x, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("ISRU alpha must be finite and > 0");
  }
  return x / std::sqrt(1.0 + alpha * x * x);
}

double beta_exact(const ChannelVector& x, std::size_t i) {
  if (i >= x.size()) {
    throw IndexOutOfRange("channel " + std::to_string(i) + " out of range for C=" +
                          std::to_string(x.size()));
  }
  const auto stats = norm_stats(x);
  double others = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k == i) continue;
    const double d = x[k] - stats.mean;
    others += d * d;
  }
  // (C - 1) * var_without_i == sum of the other squared deviations
  return others - stats.variance;
}

}  // namespace dynnorm
