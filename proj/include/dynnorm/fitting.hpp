#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynnorm/scalar_minimize.hpp"

namespace dynnorm {

enum class FunctionKind { DyT, DyISRU };

std::string to_string(FunctionKind kind);
/// Accepts "dyt" / "dyisru" (case-insensitive); throws std::invalid_argument otherwise.
FunctionKind parse_function_kind(std::string_view text);

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const FitPoint&) const = default;
};

/// Points to fit plus the channel count that fixes the sqrt(C - 1) bound.
/// When `mirrored`, the first original_count() points are the measured ones
/// and the rest are their (-x, -y) images.
class FitDataset {
public:
  /// Throws std::invalid_argument on C < 2, non-finite points, or a target
  /// with |y| >= sqrt(C - 1).
  FitDataset(std::vector<FitPoint> points, std::size_t channels, bool mirrored = false,
             std::size_t original_count = 0);

  std::span<const FitPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t channels() const noexcept { return channels_; }
  bool mirrored() const noexcept { return mirrored_; }
  std::size_t original_count() const noexcept { return original_count_; }

private:
  std::vector<FitPoint> points_;
  std::size_t channels_;
  bool mirrored_;
  std::size_t original_count_;
};

/// Appends (-x, -y) for every point; (0, 0) is its own image and is kept once.
FitDataset mirror_augment(std::span<const FitPoint> points, std::size_t channels);

struct FitResult {
  FunctionKind function_kind = FunctionKind::DyT;
  double parameter = 0.0;  // alpha for DyT, beta for DyISRU
  double sse = 0.0;
  double mae = 0.0;        // mean |residual| over all points
  std::vector<double> residuals;
  std::size_t n_points = 0;
  std::size_t original_count = 0;
  Bracket bracket;         // in log(parameter)
  std::size_t iterations = 0;
};

/// Search ranges for the fitted parameter; the search runs on its logarithm.
inline constexpr double kAlphaMin = 1e-12;
inline constexpr double kAlphaMax = 1e6;
inline constexpr double kBetaSearchMin = 1e-9;
inline constexpr double kBetaSearchMax = 1e12;

double model_value(FunctionKind kind, double parameter, std::size_t channels, double x);
double sum_squared_error(const FitDataset& data, FunctionKind kind, double parameter);

/// Least-squares alpha of scaled DyT. Throws BracketFailure on degenerate data.
FitResult fit_dyt(const FitDataset& data);
/// Least-squares beta of DyISRU (mu = 0). Throws BracketFailure on degenerate data.
FitResult fit_dyisru(const FitDataset& data);
FitResult fit(const FitDataset& data, FunctionKind kind);

struct ResidualStats {
  double mae = 0.0;
  double max_abs = 0.0;
};

/// Residual summary over the measured (non-mirrored) points only.
ResidualStats residual_stats(const FitResult& result);

}  // namespace dynnorm
