#include "dynnorm/fitting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "dynnorm/activations.hpp"
#include "dynnorm/errors.hpp"

namespace dynnorm {

std::string to_string(FunctionKind kind) {
  return kind == FunctionKind::DyT ? "dyt" : "dyisru";
}

FunctionKind parse_function_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "dyt") return FunctionKind::DyT;
  if (lower == "dyisru") return FunctionKind::DyISRU;
  throw std::invalid_argument("unknown function kind '" + std::string(text) +
                              "' (expected dyt or dyisru)");
}

FitDataset::FitDataset(std::vector<FitPoint> points, std::size_t channels, bool mirrored,
                       std::size_t original_count)
    : points_(std::move(points)),
      channels_(channels),
      mirrored_(mirrored),
      original_count_(mirrored ? original_count : points_.size()) {
  if (channels_ < 2) throw std::invalid_argument("FitDataset: channel count must be >= 2");
  if (original_count_ > points_.size()) {
    throw std::invalid_argument("FitDataset: original_count exceeds point count");
  }
  const double bound = channel_bound(channels_);
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("FitDataset: non-finite point");
    }
    if (std::abs(p.y) >= bound) {
      throw std::invalid_argument("FitDataset: target |y| must stay below sqrt(C - 1)");
    }
  }
}

FitDataset mirror_augment(std::span<const FitPoint> points, std::size_t channels) {
  if (points.empty()) throw std::invalid_argument("mirror_augment: no points");
  std::vector<FitPoint> out(points.begin(), points.end());
  for (const auto& p : points) {
    if (p.x == 0.0 && p.y == 0.0) continue;
    out.push_back({-p.x, -p.y});
  }
  return FitDataset(std::move(out), channels, true, points.size());
}

double model_value(FunctionKind kind, double parameter, std::size_t channels, double x) {
  if (kind == FunctionKind::DyT) return scaled_dyt(x, DyTParams(parameter, channels));
  return dyisru(x, DyISRUParams(parameter, channels));
}

double sum_squared_error(const FitDataset& data, FunctionKind kind, double parameter) {
  const double bound = channel_bound(data.channels());
  double sse = 0.0;
  // Inlined model forms; the parameter is already known to be positive here.
  if (kind == FunctionKind::DyT) {
    for (const auto& p : data.points()) {
      const double r = p.y - bound * std::tanh(parameter * p.x);
      sse += r * r;
    }
  } else {
    for (const auto& p : data.points()) {
      const double r = p.y - bound * p.x / std::sqrt(parameter + p.x * p.x);
      sse += r * r;
    }
  }
  return sse;
}

namespace {

double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

FitResult run_fit(const FitDataset& data, FunctionKind kind) {
  if (data.size() < 2) throw std::invalid_argument("fit: need at least 2 points");

  double max_abs_x = 0.0;
  std::vector<double> squares;
  squares.reserve(data.size());
  for (const auto& p : data.points()) {
    max_abs_x = std::max(max_abs_x, std::abs(p.x));
    squares.push_back(p.x * p.x);
  }
  if (max_abs_x == 0.0) throw BracketFailure("fit: every x is zero, parameter is unidentifiable");

  MinimizeOptions opts;
  double start = 0.0;
  if (kind == FunctionKind::DyT) {
    start = 1.0 / max_abs_x;
    opts.lower = std::log(kAlphaMin);
    opts.upper = std::log(kAlphaMax);
  } else {
    start = median(squares);
    if (start == 0.0) start = max_abs_x * max_abs_x;
    opts.lower = std::log(kBetaSearchMin);
    opts.upper = std::log(kBetaSearchMax);
  }
  const double log_start = std::clamp(std::log(start), opts.lower + 1.0, opts.upper - 1.0);

  const auto objective = [&](double t) { return sum_squared_error(data, kind, std::exp(t)); };
  const auto found = minimize_scalar(objective, log_start, opts);

  FitResult r;
  r.function_kind = kind;
  r.parameter = std::exp(found.x);
  r.bracket = found.bracket;
  r.iterations = found.iterations;
  r.n_points = data.size();
  r.original_count = data.original_count();
  r.residuals.reserve(data.size());
  double abs_sum = 0.0;
  for (const auto& p : data.points()) {
    const double res = p.y - model_value(kind, r.parameter, data.channels(), p.x);
    r.residuals.push_back(res);
    r.sse += res * res;
    abs_sum += std::abs(res);
  }
  r.mae = abs_sum / static_cast<double>(data.size());
  return r;
}

}  // namespace

FitResult fit_dyt(const FitDataset& data) { return run_fit(data, FunctionKind::DyT); }
FitResult fit_dyisru(const FitDataset& data) { return run_fit(data, FunctionKind::DyISRU); }

FitResult fit(const FitDataset& data, FunctionKind kind) { return run_fit(data, kind); }

ResidualStats residual_stats(const FitResult& result) {
  const std::size_t n = std::min(result.original_count, result.residuals.size());
  ResidualStats s;
  if (n == 0) return s;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(result.residuals[k]);
    sum += a;
    s.max_abs = std::max(s.max_abs, a);
  }
  s.mae = sum / static_cast<double>(n);
  return s;
}

}  // namespace dynnorm
