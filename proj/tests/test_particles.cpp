#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "halfspec/exact_s1.hpp"
#include "halfspec/io.hpp"
#include "halfspec/particles.hpp"

using namespace halfspec;

namespace {

constexpr double kPi = std::numbers::pi;

ParticleEnsemble grid_ensemble(int n, double period) {
  ParticleEnsemble e{{period}, {}, 0};
  for (int i = 0; i < n; ++i) e.positions.push_back(period * (i + 0.5) / n);
  return e;
}

}  // namespace

TEST(CounterRng, PureFunctionOfSeedStreamCounter) {
  const CounterRng a(42), b(42), c(43);
  EXPECT_EQ(a.bits(3, 7), b.bits(3, 7));
  EXPECT_NE(a.bits(3, 7), c.bits(3, 7));
  EXPECT_NE(a.bits(3, 7), a.bits(4, 7));
  EXPECT_NE(a.bits(3, 7), a.bits(3, 8));
  double mean = 0.0, var = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = a.uniform(0, i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = a.normal(1, i);
    mean += z;
    var += z * z;
  }
  mean /= n;
  var = var / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(WrappedGaussian, DeterministicAndInsideTheTorus) {
  const auto a = sample_wrapped_gaussian({0, 0, 0}, {0.2, 0.3, 0.3}, 1000, 7, {1, 1, 1});
  const auto b = sample_wrapped_gaussian({0, 0, 0}, {0.2, 0.3, 0.3}, 1000, 7, {1, 1, 1});
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_EQ(a.count(), 1000u);
  for (double x : a.positions) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  const auto c = sample_wrapped_gaussian({0, 0, 0}, {0.2, 0.3, 0.3}, 1000, 8, {1, 1, 1});
  EXPECT_NE(a.positions, c.positions);
}

TEST(WrappedGaussian, TinySigmaCollapsesOntoMean) {
  const auto e = sample_wrapped_gaussian({0.25, 0.0}, {1e-9, 1e-9}, 50, 3, {1.0, 2.0});
  for (std::size_t p = 0; p < e.count(); ++p) {
    const auto x = e.position(p);
    EXPECT_NEAR(x[0], 0.25, 1e-7);
    EXPECT_NEAR(std::min(x[1], 2.0 - x[1]), 0.0, 1e-7);
  }
}

TEST(WrappedGaussian, CircularMeanNearZero) {
  const auto e = sample_wrapped_gaussian({0, 0, 0}, {0.2, 0.3, 0.3}, 3375, 12345, {1, 1, 1});
  for (int a = 0; a < 3; ++a) {
    double s = 0.0, c = 0.0;
    for (std::size_t p = 0; p < e.count(); ++p) {
      s += std::sin(2 * kPi * e.position(p)[a]);
      c += std::cos(2 * kPi * e.position(p)[a]);
    }
    EXPECT_LE(std::abs(std::atan2(s, c) / (2 * kPi)), 0.02) << "axis " << a;
  }
}

TEST(WrappedGaussian, RejectsBadParameters) {
  EXPECT_THROW(sample_wrapped_gaussian({0}, {0.0}, 10, 1, {1}), std::invalid_argument);
  EXPECT_THROW(sample_wrapped_gaussian({0}, {0.1}, 0, 1, {1}), std::invalid_argument);
  EXPECT_THROW(sample_wrapped_gaussian({0, 0}, {0.1}, 10, 1, {1, 1}), std::invalid_argument);
}

TEST(AdvectParticles, ZeroAndConstantFields) {
  const auto e = grid_ensemble(64, 2 * kPi);
  EXPECT_EQ(advect_particles(e, evaluator_for(VectorFieldSpec({2 * kPi})), 3.0, 0.01).positions, e.positions);

  const double c = 0.9, t = 2.5;
  VectorFieldSpec vf({2 * kPi});
  vf.add_term(0, {0}, c);
  const auto moved = advect_particles(e, evaluator_for(vf), t, 0.01);
  for (std::size_t p = 0; p < e.count(); ++p) {
    const double expect = std::fmod(e.positions[p] + c * t, 2 * kPi);
    const double d = std::abs(moved.positions[p] - expect);
    EXPECT_LE(std::min(d, 2 * kPi - d), 1e-12);
  }
}

TEST(AdvectParticles, BenchmarkMatchesClosedFormFlow) {
  const auto e = grid_ensemble(200, 2 * kPi);
  const auto moved = advect_particles(e, evaluator_for(s1_benchmark_field()), 1.5, 1e-3);
  for (std::size_t p = 0; p < e.count(); ++p) {
    const double d = std::abs(moved.positions[p] - exact_s1_flow(e.positions[p], 1.5));
    EXPECT_LE(std::min(d, 2 * kPi - d), 1e-8) << "x0 = " << e.positions[p];
  }
  // Backward in time the same oracle applies with -t.
  const auto back = advect_particles(moved, evaluator_for(s1_benchmark_field()), -1.5, 1e-3);
  for (std::size_t p = 0; p < e.count(); ++p) EXPECT_NEAR(back.positions[p], e.positions[p], 1e-8);
}

TEST(AdvectParticles, RejectsBadSteps) {
  const auto e = grid_ensemble(4, 1.0);
  const auto f = evaluator_for(VectorFieldSpec({1.0}));
  EXPECT_THROW(advect_particles(e, f, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(advect_particles(e, f, std::nan(""), 0.1), std::invalid_argument);
  const FieldEvaluator bad = [](std::span<const double>, std::span<double> out) { out[0] = std::nan(""); };
  EXPECT_THROW(advect_particles(e, bad, 1.0, 0.1), std::runtime_error);
}

TEST(Histogram, SingleBinCarriesAllMass) {
  ParticleEnsemble e{{1.0, 1.0}, {}, 0};
  for (int i = 0; i < 30; ++i) {
    e.positions.push_back(0.51 + 1e-4 * i);
    e.positions.push_back(0.02 * i);
  }
  const GridField h = histogram_marginal(e, {0}, 10);
  EXPECT_EQ(h.sizes, std::vector<int>{10});
  for (int j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(h.samples[j].real(), j == 5 ? 10.0 : 0.0);
}

TEST(Histogram, NodeCenteredBins) {
  // A particle at exactly the node x = 0 and one just below the period both
  // fall into bin 0.
  ParticleEnsemble e{{1.0}, {0.0, 0.99, 0.26}, 0};
  const GridField h = histogram_marginal(e, {0}, 4);
  EXPECT_DOUBLE_EQ(h.samples[0].real(), 2.0 / 3.0 * 4.0);
  EXPECT_DOUBLE_EQ(h.samples[1].real(), 1.0 / 3.0 * 4.0);
}

TEST(Histogram, UniformParticlesAreFlat) {
  const std::size_t n = 100000;
  const int bins = 20;
  const CounterRng rng(5);
  ParticleEnsemble e{{2.0, 1.0}, {}, 5};
  for (std::size_t p = 0; p < n; ++p) {
    e.positions.push_back(2.0 * rng.uniform(p, 0));
    e.positions.push_back(rng.uniform(p, 1));
  }
  const GridField h = histogram_marginal(e, {0, 1}, bins);
  double total = 0.0;
  const double per_bin = double(n) / (bins * bins);
  for (const auto& v : h.samples) {
    total += v.real();
    EXPECT_LE(std::abs(v.real() * 2.0 - 1.0), 5.0 / std::sqrt(per_bin));
  }
  EXPECT_NEAR(total * h.cell_volume(), 1.0, 1e-14);
}

TEST(Histogram, RejectsBadArguments) {
  const auto e = grid_ensemble(4, 1.0);
  EXPECT_THROW(histogram_marginal(e, {}, 4), std::invalid_argument);
  EXPECT_THROW(histogram_marginal(e, {0}, 0), std::invalid_argument);
  EXPECT_THROW(histogram_marginal(e, {1}, 4), std::invalid_argument);
}

TEST(Particles, CsvHasOneRowPerParticle) {
  const auto e = sample_wrapped_gaussian({0, 0}, {0.1, 0.1}, 5, 1, {1, 1});
  std::stringstream ss;
  write_csv(ss, e);
  std::string line;
  int rows = 0;
  std::getline(ss, line);
  EXPECT_EQ(line, "x1,x2");
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 5);
}
