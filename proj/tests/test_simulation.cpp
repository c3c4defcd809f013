#include <cmath>

#include <gtest/gtest.h>

#include "dynnorm/activations.hpp"
#include "dynnorm/errors.hpp"
#include "dynnorm/simulation.hpp"

namespace dynnorm {
namespace {

TEST(SampleBaseTest, DeterministicPerSeed) {
  SimulationConfig c;
  c.seed = 17;
  EXPECT_EQ(sample_base(c), sample_base(c));
  auto d = c;
  d.seed = 18;
  EXPECT_NE(sample_base(c), sample_base(d));
}

TEST(SampleBaseTest, AggregatedMomentsMatchConfig) {
  SimulationConfig c;  // C = 100, sigma = 2, mu = 0
  double s = 0, ss = 0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    c.seed = seed;
    const auto sample = sample_base(c);
    for (double v : sample.values()) {
      s += v;
      ss += v * v;
      ++n;
    }
  }
  const double mean = s / n;
  const double sd = std::sqrt(ss / n - mean * mean);
  EXPECT_LT(std::abs(mean), 3.0 * 2.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(sd, 2.0, 0.02 * 2.0);
}

TEST(SampleBaseTest, ConfigValidation) {
  SimulationConfig c;
  c.sigma = 0;
  EXPECT_THROW(sample_base(c), std::invalid_argument);
  c = {};
  c.channels = 1;
  EXPECT_THROW(sample_base(c), std::invalid_argument);
  c = {};
  c.step = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunScenarioTest, BaselineOnly) {
  SimulationConfig c;
  c.s_max = 0;
  const auto sc = run_scenario(c);
  ASSERT_EQ(sc.frames.size(), 1u);
  EXPECT_EQ(sc.frames[0].x, sc.base_sample);
  EXPECT_THROW(outlier_points(sc), EmptyOutliers);
}

TEST(RunScenarioTest, DefaultFramesAndOutlierSteps) {
  const SimulationConfig c;
  const auto sc = run_scenario(c);
  ASSERT_EQ(sc.frames.size(), 10u);
  const auto o = sc.outlier_index;
  for (std::size_t k = 0; k < sc.base_sample.size(); ++k) {
    EXPECT_LE(sc.base_sample[k], sc.base_sample[o]);
  }
  EXPECT_EQ(sc.frames[9].x[o], sc.base_sample[o] + 45.0);
  for (const auto& f : sc.frames) {
    EXPECT_EQ(f.x[o], sc.base_sample[o] + 5.0 * static_cast<double>(f.s));
    for (std::size_t k = 0; k < f.x.size(); ++k) {
      if (k != o) EXPECT_EQ(f.x[k], sc.base_sample[k]);
    }
    EXPECT_EQ(f.y, layer_norm(f.x));
  }
}

TEST(OutlierChannelTest, TiesTakeLowestIndex) {
  EXPECT_EQ(outlier_channel(ChannelVector{1, 3, 3, 2}), 1u);
  EXPECT_EQ(outlier_channel(ChannelVector{5, 5}), 0u);
  EXPECT_EQ(outlier_channel(ChannelVector{-2, -1}), 1u);
}

TEST(OutlierPointsTest, CountsAndPlacement) {
  SimulationConfig c;
  const auto sc = run_scenario(c);
  const auto pts = outlier_points(sc);
  ASSERT_EQ(pts.size(), 9u);
  const double base_max = sc.base_sample[sc.outlier_index];
  for (const auto& p : pts) EXPECT_GT(p.x, base_max);

  c.s_max = 1;
  EXPECT_EQ(outlier_points(run_scenario(c)).size(), 1u);
  EXPECT_EQ(outlier_dataset(run_scenario(c)).size(), 2u);
}

class ScenarioProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ScenarioProperty, FrameInvariants) {
  SimulationConfig c;
  c.seed = GetParam();
  const auto sc = run_scenario(c);
  const auto o = sc.outlier_index;
  const double bound = channel_bound(c.channels);
  double prev_slope = INFINITY, prev_ratio = INFINITY;
  for (const auto& f : sc.frames) {
    const auto st = norm_stats(f.y);
    EXPECT_LE(std::abs(st.mean), 1e-12);
    EXPECT_LE(std::abs(st.variance - 1.0), 1e-9);
    EXPECT_LT(f.y[o], bound);

    const double slope = non_outlier_slope(f, o);
    EXPECT_LT(slope, prev_slope) << "s=" << f.s;
    prev_slope = slope;

    if (f.s > 0) {
      const double ratio = f.y[o] / f.x[o];
      EXPECT_LT(ratio, prev_ratio) << "s=" << f.s;
      prev_ratio = ratio;
    }

    // Non-outlier channels lie on one line: R^2 >= 1 - 1e-12.
    double mx = 0, my = 0, n = 0;
    for (std::size_t k = 0; k < f.x.size(); ++k) {
      if (k == o) continue;
      mx += f.x[k];
      my += f.y[k];
      n += 1;
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < f.x.size(); ++k) {
      if (k == o) continue;
      sxx += (f.x[k] - mx) * (f.x[k] - mx);
      syy += (f.y[k] - my) * (f.y[k] - my);
      sxy += (f.x[k] - mx) * (f.y[k] - my);
    }
    EXPECT_GE(sxy * sxy / (sxx * syy), 1.0 - 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ScenarioProperty, ::testing::Range<std::uint64_t>(1, 21));

TEST(SweepSeedsTest, ParallelMatchesSerial) {
  const SimulationConfig c;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 12; ++s) seeds.push_back(s);
  const auto serial = sweep_seeds(c, seeds, Execution::Serial);
  const auto parallel = sweep_seeds(c, seeds, Execution::Parallel);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    EXPECT_EQ(serial[k].seed, seeds[k]);
    EXPECT_EQ(serial[k].dyt.parameter, parallel[k].dyt.parameter);
    EXPECT_EQ(serial[k].dyisru.parameter, parallel[k].dyisru.parameter);
    EXPECT_EQ(serial[k].dyisru.residuals, parallel[k].dyisru.residuals);
  }
}

TEST(SweepSeedsTest, ErrorsPropagateFromParallelRegion) {
  SimulationConfig c;
  c.s_max = 0;
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  EXPECT_THROW(sweep_seeds(c, seeds, Execution::Parallel), EmptyOutliers);
}

TEST(FitOutliersTest, DyisruBeatsDytOnDefaultScenario) {
  const auto fits = fit_outliers(SimulationConfig{});
  const double dyt_mae = residual_stats(fits.dyt).mae;
  const double dyisru_mae = residual_stats(fits.dyisru).mae;
  EXPECT_GT(dyt_mae, 10.0 * dyisru_mae);
}

}  // namespace
}  // namespace dynnorm
