#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynnorm/core_math.hpp"
#include "dynnorm/fitting.hpp"
#include "dynnorm/verification.hpp"

namespace dynnorm {

struct SimulationConfig {
  std::size_t channels = 100;
  double sigma = 2.0;
  double mu = 0.0;
  double step = 5.0;
  std::size_t s_max = 9;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on C < 2, sigma <= 0, step <= 0 or non-finite values.
  void validate() const;
};

struct Frame {
  std::size_t s;
  ChannelVector x;
  ChannelVector y;  // layer_norm(x)
};

struct OutlierScenario {
  ChannelVector base_sample;
  std::size_t outlier_index;  // argmax of base_sample, lowest index on ties
  std::vector<Frame> frames;  // s = 0 .. s_max
};

/// C draws from N(mu, sigma^2): CounterRng(seed).split("base_sample") feeds
/// Box-Muller normals in draw order.
ChannelVector sample_base(const SimulationConfig& config);

/// argmax over channels, lowest index on ties.
std::size_t outlier_channel(const ChannelVector& x);

/// Frame s raises the base argmax channel by step * s (always from the base
/// sample, never cumulatively) and layer-normalizes the result.
OutlierScenario run_scenario(const SimulationConfig& config);

/// (x_o, y_o) of frames s = 1 .. s_max. Throws EmptyOutliers when s_max = 0.
std::vector<FitPoint> outlier_points(const OutlierScenario& scenario);

/// Mirrored outlier dataset, the fit input used for both function families.
FitDataset outlier_dataset(const OutlierScenario& scenario);

struct OutlierFits {
  std::uint64_t seed = 0;
  FitResult dyt;
  FitResult dyisru;
};

/// Scenario plus both fits for one configuration.
OutlierFits fit_outliers(const SimulationConfig& config);

/// fit_outliers for each seed, in seed order. The parallel path distributes
/// seeds over OpenMP threads and returns the same values as the serial one.
std::vector<OutlierFits> sweep_seeds(const SimulationConfig& config,
                                     std::span<const std::uint64_t> seeds,
                                     Execution exec = Execution::Serial);

/// Least-squares slope of y on x over the non-outlier channels of one frame.
double non_outlier_slope(const Frame& frame, std::size_t outlier_index);

}  // namespace dynnorm
