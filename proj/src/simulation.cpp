#include "dynnorm/simulation.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include "dynnorm/errors.hpp"
#include "dynnorm/random.hpp"

namespace dynnorm {

void SimulationConfig::validate() const {
  if (channels < 2) throw std::invalid_argument("channels must be >= 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be > 0");
}

ChannelVector sample_base(const SimulationConfig& config) {
  config.validate();
  CounterRng rng = CounterRng(config.seed).split("base_sample");
  std::vector<double> v(config.channels);
  for (auto& e : v) e = rng.normal(config.mu, config.sigma);
  return ChannelVector(std::move(v));
}

std::size_t outlier_channel(const ChannelVector& x) {
  std::size_t o = 0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (x[k] > x[o]) o = k;
  }
  return o;
}

OutlierScenario run_scenario(const SimulationConfig& config) {
  auto base = sample_base(config);
  const std::size_t o = outlier_channel(base);
  std::vector<Frame> frames;
  frames.reserve(config.s_max + 1);
  for (std::size_t s = 0; s <= config.s_max; ++s) {
    auto x = base.with(o, base[o] + config.step * static_cast<double>(s));
    auto y = layer_norm(x);
    frames.push_back({s, std::move(x), std::move(y)});
  }
  return {std::move(base), o, std::move(frames)};
}

std::vector<FitPoint> outlier_points(const OutlierScenario& scenario) {
  std::vector<FitPoint> pts;
  for (const auto& f : scenario.frames) {
    if (f.s == 0) continue;
    pts.push_back({f.x[scenario.outlier_index], f.y[scenario.outlier_index]});
  }
  if (pts.empty()) throw EmptyOutliers("scenario has no outlier frames (s_max = 0)");
  return pts;
}

FitDataset outlier_dataset(const OutlierScenario& scenario) {
  return mirror_augment(outlier_points(scenario), scenario.base_sample.size());
}

OutlierFits fit_outliers(const SimulationConfig& config) {
  const auto data = outlier_dataset(run_scenario(config));
  return {config.seed, fit_dyt(data), fit_dyisru(data)};
}

std::vector<OutlierFits> sweep_seeds(const SimulationConfig& config,
                                     std::span<const std::uint64_t> seeds, Execution exec) {
  std::vector<OutlierFits> out(seeds.size());
  auto one = [&](std::size_t k) {
    auto c = config;
    c.seed = seeds[k];
    out[k] = fit_outliers(c);
  };
  if (exec == Execution::Serial) {
    for (std::size_t k = 0; k < seeds.size(); ++k) one(k);
    return out;
  }
  // Exceptions may not cross the parallel region; rethrow the first one after it.
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      one(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(dynnorm_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double non_outlier_slope(const Frame& frame, std::size_t outlier_index) {
  double sx = 0, sy = 0, n = 0;
  for (std::size_t k = 0; k < frame.x.size(); ++k) {
    if (k == outlier_index) continue;
    sx += frame.x[k];
    sy += frame.y[k];
    n += 1;
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < frame.x.size(); ++k) {
    if (k == outlier_index) continue;
    sxy += (frame.x[k] - mx) * (frame.y[k] - my);
    sxx += (frame.x[k] - mx) * (frame.x[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace dynnorm
