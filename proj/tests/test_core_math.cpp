#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "dynnorm/core_math.hpp"
#include "dynnorm/errors.hpp"
#include "test_helpers.hpp"

namespace dynnorm {
namespace {

using testing::random_activations;
using testing::reference_fd;

TEST(ChannelVectorTest, RejectsSingleChannelAndNonFinite) {
  EXPECT_THROW(ChannelVector({1.0}), std::invalid_argument);
  EXPECT_THROW(ChannelVector({1.0, NAN}), std::invalid_argument);
  EXPECT_THROW(ChannelVector({INFINITY, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(ChannelVector({1.0, 2.0}));
}

TEST(NormStatsTest, Examples) {
  auto s = norm_stats(ChannelVector{1, 1, 1});
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_EQ(s.variance, 0.0);

  s = norm_stats(ChannelVector{1, -1});
  EXPECT_EQ(s.mean, 0.0);
  EXPECT_EQ(s.variance, 1.0);

  // population divisor: (4 + 1 + 1) / 3
  s = norm_stats(ChannelVector{3, 0, 0});
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.variance, 2.0);
}

TEST(LayerNormTest, Examples) {
  EXPECT_EQ(layer_norm(ChannelVector{1, -1}), (ChannelVector{1, -1}));
  EXPECT_EQ(layer_norm(ChannelVector{2, 0}), (ChannelVector{1, -1}));
  EXPECT_THROW(layer_norm(ChannelVector{1, 1, 1}), DegenerateVariance);
  // 1e-13 spread has variance 2.5e-27, under the floor
  EXPECT_THROW(layer_norm(ChannelVector{1.0, 1.0 + 1e-13}), DegenerateVariance);
}

TEST(RmsNormTest, Examples) {
  EXPECT_EQ(rms_norm(ChannelVector{1, -1}), (ChannelVector{1, -1}));
  EXPECT_EQ(rms_norm(ChannelVector{2, 2}), (ChannelVector{1, 1}));
  const auto y = rms_norm(ChannelVector{3, 4});
  EXPECT_NEAR(y[0], 3.0 / std::sqrt(12.5), 1e-15);
  EXPECT_NEAR(y[1], 4.0 / std::sqrt(12.5), 1e-15);
  EXPECT_NEAR(y[0], 0.8485, 1e-4);
  EXPECT_NEAR(y[1], 1.1314, 1e-4);
  EXPECT_THROW(rms_norm(ChannelVector{0, 0}), DegenerateVariance);
}

TEST(LnDerivativeTest, Examples) {
  // y_0 = 1 = sqrt(C - 1): the derivative vanishes
  EXPECT_EQ(ln_derivative_analytic(ChannelVector{1, -1}, 0), 0.0);
  EXPECT_LE(std::abs(reference_fd({1, -1}, 0)), 1e-8);

  // F = 1 / (3 sqrt(2/3)), y_0^2 = 1.5 -> F * 0.5
  const ChannelVector x{1, -1, 0};
  const double analytic = ln_derivative_analytic(x, 0);
  EXPECT_NEAR(analytic, 0.5 / (3.0 * std::sqrt(2.0 / 3.0)), 1e-15);
  EXPECT_NEAR(analytic, 0.2041, 1e-4);
  EXPECT_NEAR(analytic, reference_fd({1, -1, 0}, 0), 1e-9);

  // (3, 0, 0): y_0 = sqrt(2) = sqrt(C - 1)
  EXPECT_NEAR(ln_derivative_analytic(ChannelVector{3, 0, 0}, 0), 0.0, 1e-15);
}

TEST(LnDerivativeTest, Errors) {
  EXPECT_THROW(ln_derivative_analytic(ChannelVector{1, 2}, 2), IndexOutOfRange);
  EXPECT_THROW(ln_derivative_analytic(ChannelVector{2, 2}, 0), DegenerateVariance);
}

TEST(LayerNormProperty, ZeroMeanUnitVariance) {
  CounterRng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const auto c = rng.uniform_int(2, 200);
    const auto y = layer_norm(ChannelVector(random_activations(rng, c)));
    const auto s = norm_stats(y);
    EXPECT_LE(std::abs(s.mean), 1e-12);
    EXPECT_LE(std::abs(s.variance - 1.0), 1e-9);
  }
}

TEST(LayerNormProperty, ShiftInvariantAndScaleEquivariant) {
  CounterRng rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto c = rng.uniform_int(2, 64);
    const auto v = random_activations(rng, c);
    const double shift = rng.uniform(-50, 50);
    const double scale = std::pow(10.0, rng.uniform(-2, 2));
    std::vector<double> shifted(v), scaled(v);
    for (auto& e : shifted) e += shift;
    for (auto& e : scaled) e *= scale;
    const auto y = layer_norm(ChannelVector(v));
    const auto ys = layer_norm(ChannelVector(shifted));
    const auto yc = layer_norm(ChannelVector(scaled));
    for (std::size_t k = 0; k < c; ++k) {
      EXPECT_NEAR(ys[k], y[k], 1e-10);
      EXPECT_NEAR(yc[k], y[k], 1e-10);
    }
  }
}

TEST(LnDerivativeProperty, MatchesIndependentCentralDifference) {
  CounterRng rng(13);
  for (std::size_t c : {2u, 3u, 10u, 100u}) {
    for (int t = 0; t < 100; ++t) {
      const auto v = random_activations(rng, c);
      const ChannelVector x(v);
      for (std::size_t i = 0; i < c; ++i) {
        const double a = ln_derivative_analytic(x, i);
        const double fd = reference_fd(v, i);
        if (std::abs(a) < 1e-2) {
          EXPECT_LE(std::abs(a - fd), 1e-8) << "C=" << c << " i=" << i;
        } else {
          EXPECT_LE(std::abs(a - fd) / std::abs(a), 1e-6) << "C=" << c << " i=" << i;
        }
      }
    }
  }
}

TEST(LnDerivativeProperty, SignStructure) {
  CounterRng rng(14);
  for (int t = 0; t < 300; ++t) {
    const auto c = rng.uniform_int(3, 50);
    const ChannelVector x(random_activations(rng, c));
    const auto y = layer_norm(x);
    for (std::size_t i = 0; i < c; ++i) {
      ASSERT_LT(std::abs(y[i]), std::sqrt(c - 1.0));
      EXPECT_GT(ln_derivative_analytic(x, i), 0.0);
    }
  }
  // C = 2 always sits on the bound
  for (int t = 0; t < 50; ++t) {
    const ChannelVector x({rng.uniform(-5, 5), rng.uniform(6, 9)});
    EXPECT_NEAR(ln_derivative_analytic(x, 0), 0.0, 1e-15);
    EXPECT_NEAR(ln_derivative_analytic(x, 1), 0.0, 1e-15);
  }
}

TEST(LnDerivativeTest, LibraryCentralDifferenceAgreesWithReference) {
  const std::vector<double> v{0.3, -1.7, 2.2, 0.9};
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(ln_derivative_central_difference(ChannelVector(v), i), reference_fd(v, i), 1e-9);
  }
}

}  // namespace
}  // namespace dynnorm
