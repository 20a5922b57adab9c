#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "halfspec/exact_s1.hpp"
#include "halfspec/runners.hpp"
#include "oracles.hpp"

using namespace halfspec;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("halfspec_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

Scenario small_bench(const fs::path& out) {
  Scenario sc = Scenario::s1_benchmark();
  sc.modes = 6;
  sc.n_snapshots = 4;
  sc.convergence_modes = {2, 4, 6};
  sc.error_grid = 256;
  sc.output_dir = out.string();
  return sc;
}

}  // namespace

TEST(ExactDensity, PointValues) {
  for (double t : {-0.7, 0.0, 0.4, 1.5}) {
    EXPECT_NEAR(exact_s1_density(0.0, t), std::exp(2 * t), 1e-14 * std::exp(2 * t));
    EXPECT_NEAR(exact_s1_density(kPi / 2, t), std::exp(-2 * t), 1e-14);
  }
  for (double x : {0.1, 1.0, 2.2, 5.0}) EXPECT_NEAR(exact_s1_density(x, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(exact_s1_half_density(0.0, 1.5), std::exp(1.5), 1e-12);
}

TEST(ExactDensity, TotalMassIsConserved) {
  for (double t : {0.0, 0.5, 1.0, 1.5}) {
    const double mass = oracle::simpson([t](double x) { return exact_s1_density(x, t); }, 0.0, 2 * kPi, 20000);
    EXPECT_NEAR(mass, 2 * kPi, 1e-10) << "t = " << t;
  }
}

TEST(ExactDensity, SatisfiesContinuityEquation) {
  // d rho/dt + d(rho X)/dx = 0 with X = -sin 2x, by central differences.
  const double h = 1e-5;
  for (double x : {0.3, 1.1, 2.0, 4.4})
    for (double t : {0.2, 1.0}) {
      const double dt = (exact_s1_density(x, t + h) - exact_s1_density(x, t - h)) / (2 * h);
      auto flux = [t](double y) { return -std::sin(2 * y) * exact_s1_density(y, t); };
      const double dx = (flux(x + h) - flux(x - h)) / (2 * h);
      EXPECT_NEAR(dt + dx, 0.0, 1e-6 * std::max(1.0, std::abs(dt)));
    }
}

TEST(ExactFlow, IdentityFixedPointsAndDirection) {
  for (double x : {0.2, 1.4, 3.0, 4.9}) EXPECT_NEAR(exact_s1_flow(x, 0.0), x, 1e-15);
  for (double x : {0.0, kPi / 2, kPi, 3 * kPi / 2})
    for (double t : {0.5, 2.0, -1.0}) EXPECT_NEAR(exact_s1_flow(x, t), x, 1e-15);
  // Backward in time the point pi/4 moves toward the unstable point pi/2.
  const double back = exact_s1_flow(kPi / 4, -1.0);
  EXPECT_NEAR(back, std::atan(std::exp(2.0)), 1e-15);
  EXPECT_GT(back, kPi / 4);
  EXPECT_LT(back, kPi / 2);
  // Forward, x' = -sin 2x < 0 on (0, pi/2): it approaches 0.
  EXPECT_LT(exact_s1_flow(kPi / 4, 1.0), kPi / 4);
}

TEST(ExactFlow, ForwardThenBackwardIsIdentity) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi), tt(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double x = u(gen), t = tt(gen);
    if (std::abs(std::remainder(x, kPi / 2)) < 1e-3) continue;
    EXPECT_NEAR(exact_s1_flow(exact_s1_flow(x, t), -t), x, 1e-12);
  }
}

TEST(ExactFlow, SolvesTheOde) {
  const double h = 1e-6;
  for (double x : {0.3, 2.0, 3.5, 5.5}) {
    const double y = exact_s1_flow(x, 0.8);
    const double v = (exact_s1_flow(x, 0.8 + h) - exact_s1_flow(x, 0.8 - h)) / (2 * h);
    EXPECT_NEAR(v, -std::sin(2 * y), 1e-7);
  }
}

TEST(ExactFunctions, InitialValuesAndProductIdentity) {
  for (double x : {0.3, 1.0, 4.0}) {
    EXPECT_NEAR(exact_s1_functions(S1Function::F, x, 0.0), std::sin(x), 1e-15);
    EXPECT_NEAR(exact_s1_functions(S1Function::G, x, 0.0), std::cos(x), 1e-15);
    EXPECT_NEAR(exact_s1_functions(S1Function::H, x, 0.0), std::sin(x) * std::cos(x), 1e-15);
  }
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi), tt(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(gen), t = tt(gen);
    const double f = exact_s1_functions(S1Function::F, x, t), g = exact_s1_functions(S1Function::G, x, t);
    EXPECT_NEAR(exact_s1_functions(S1Function::H, x, t) - f * g, 0.0, 1e-14);
  }
  for (double t : {0.0, 0.7, 1.5}) EXPECT_NEAR(exact_s1_functions(S1Function::G, kPi / 2, t), 0.0, 1e-15);
}

TEST(ExactFunctions, AreTransportedAlongTheFlow) {
  for (double x : {0.4, 2.0, 3.9})
    for (double t : {0.5, 1.2}) {
      const double x0 = exact_s1_flow(x, -t);
      EXPECT_NEAR(exact_s1_functions(S1Function::F, x, t), std::sin(x0), 1e-12);
      EXPECT_NEAR(exact_s1_functions(S1Function::G, x, t), std::cos(x0), 1e-12);
    }
}

TEST(Scenario, JsonRoundTripAndValidation) {
  Scenario sc = Scenario::abc();
  sc.field.abc.d = 0.25;
  sc.field.abc.variant = AbcVariant::Printed;
  sc.scheme.tol = 1e-9;
  Scenario back = Scenario::s1_benchmark();
  back.merge_json(nlohmann::json::parse(sc.to_json().dump()));
  EXPECT_EQ(back.to_json(), sc.to_json());
  EXPECT_NO_THROW(back.validate());

  Scenario bad = Scenario::s1_benchmark();
  bad.modes = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = Scenario::s1_benchmark();
  bad.t_final = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = Scenario::s1_benchmark();
  bad.solvers = {"alg9"};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = Scenario::abc();
  bad.modes = 40;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = Scenario::s1_benchmark();
  bad.field.preset = "nope";
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Scenario, SnapshotTimesIncludeEnds) {
  const auto t = Scenario::s1_benchmark().snapshot_times();
  ASSERT_EQ(t.size(), 30u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.5);
}

TEST(Scenario, CustomFieldTerms) {
  Scenario sc = Scenario::s1_benchmark();
  sc.field.preset = "custom";
  sc.field.terms = nlohmann::json::parse(R"([{"component":0,"k":[2],"sin":-1.0}])");
  const VectorFieldSpec vf = sc.build_field();
  const TruncationSpec tr = TruncationSpec::uniform(1, 4, 2 * kPi);
  EXPECT_EQ(assemble_half_density_generator(vf, tr).to_dense(),
            assemble_half_density_generator(s1_benchmark_field(), tr).to_dense());
}

TEST(Scenario, WrappedGaussianDensityIsNormalized) {
  const std::vector<double> mean{0.1}, sigma{0.3}, periods{1.0};
  const double mass = oracle::simpson(
      [&](double x) {
        const double xs[1] = {x};
        return wrapped_gaussian_density(xs, mean, sigma, periods);
      },
      0.0, 1.0, 2000);
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Scenario, InitialDensityFromFile) {
  const fs::path dir = scratch("file_ic");
  fs::create_directories(dir);
  Scenario sc = Scenario::s1_benchmark();
  const GridField g = sample(
      [](std::span<const double> x) { return Complex(1.0 + 0.3 * std::cos(x[0]), 0.0); }, {16}, sc.periods);
  {
    std::ofstream os(dir / "rho0.csv");
    write_csv(os, g);
  }
  sc.initial.preset = "file";
  sc.initial.path = (dir / "rho0.csv").string();
  EXPECT_EQ(sc.initial_density({16}).samples, g.samples);
  const GridField fine = sc.initial_density({40});
  for (std::size_t j = 0; j < fine.node_count(); ++j)
    EXPECT_NEAR(fine.samples[static_cast<Eigen::Index>(j)].real(), 1.0 + 0.3 * std::cos(fine.node(j)[0]), 1e-13);
}

TEST(Runners, BenchmarkWritesAllOutputsAndManifest) {
  const fs::path out = scratch("bench");
  const RunReport r = run_benchmark_s1(small_bench(out));
  for (const char* f : {"densities.csv", "conservation.csv", "observables.csv", "convergence.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest.at("config_hash"), fnv1a_hex(manifest.at("config").dump()));
  EXPECT_EQ(manifest.at("seed"), 12345u);
  EXPECT_TRUE(manifest.at("tolerances").contains("krylov_tol"));
  // Exact column at t = 0 is identically one.
  std::ifstream is(out / "densities.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,x,exact,alg2,standard");
  while (std::getline(is, line)) {
    if (line.rfind("0,", 0) != 0) break;
    const auto c1 = line.find(',', 2);
    EXPECT_NEAR(std::stod(line.substr(c1 + 1)), 1.0, 1e-15);
  }
  EXPECT_LE(r.summary.at("nuclear_mass_max_relative_change").get<double>(), 1e-10);
}

TEST(Runners, JsonFormat) {
  const fs::path out = scratch("bench_json");
  Scenario sc = small_bench(out);
  sc.format = OutputFormat::Json;
  run_convergence(sc);
  const auto j = nlohmann::json::parse(slurp(out / "convergence.json"));
  EXPECT_EQ(j.at("K").size(), 3u);
}

TEST(Runners, StageNamedFailures) {
  Scenario sc = small_bench(scratch("stage"));
  sc.modes = 300;
  try {
    run_benchmark_s1(sc);
    FAIL() << "expected a config failure";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "config");
  }

  const fs::path blocker = scratch("blocker");
  { std::ofstream os(blocker); }
  sc = small_bench(blocker / "sub");
  try {
    run_benchmark_s1(sc);
    FAIL() << "expected an output failure";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "output");
  }

  Scenario abc = Scenario::abc();
  abc.modes = 2;
  abc.field.abc.d = 0.0;
  abc.field.abc.variant = AbcVariant::Printed;
  abc.output_dir = scratch("abc_printed").string();
  try {
    run_abc(abc);
    FAIL() << "expected the generator check to fail";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "generator-check");
  }
}

TEST(Runners, AbcDivergenceFreeCheckAndSmallRun) {
  Scenario sc = Scenario::abc();
  sc.modes = 3;
  sc.field.abc.d = 0.0;
  sc.t_final = 0.1;
  sc.n_snapshots = 2;
  sc.particle_count = 2000;
  sc.particle_dt = 0.01;
  sc.output_dir = scratch("abc_small").string();
  const RunReport r = run_abc(sc);
  EXPECT_LE(r.summary.at("generator_mismatch").get<double>(), 1e-12);
  EXPECT_TRUE(fs::exists(fs::path(sc.output_dir) / "marginals.csv"));
  EXPECT_TRUE(fs::exists(fs::path(sc.output_dir) / "timeseries.csv"));
}

TEST(Runners, SolveOnTwoTorus) {
  Scenario sc;
  sc.name = "shear";
  sc.dim = 2;
  sc.periods = {1.0, 1.0};
  sc.field.preset = "custom";
  sc.field.terms = nlohmann::json::parse(
      R"([{"component":0,"k":[0,1],"sin":0.5},{"component":1,"k":[1,0],"cos":0.3},{"component":1,"k":[0,1],"sin":0.2}])");
  sc.initial.preset = "wrapped_gaussian";
  sc.initial.mean = {0.5, 0.5};
  sc.initial.sigma = {0.2, 0.2};
  sc.modes = 6;
  sc.t_final = 0.5;
  sc.n_snapshots = 3;
  sc.scheme.scheme = Scheme::CayleyMidpoint;
  sc.scheme.dt = 0.01;
  sc.solvers = {"alg2", "standard"};
  sc.output_dir = scratch("solve2d").string();
  const RunReport r = run_solve(sc);
  EXPECT_LE(r.summary.at("nuclear_mass_max_relative_change").get<double>(), 1e-10);
  EXPECT_TRUE(fs::exists(fs::path(sc.output_dir) / "final_density.csv"));
}

TEST(Runners, LastAxisMarginalIsNormalized) {
  const GridField g = sample(
      [](std::span<const double> x) { return Complex(1.0 + 0.5 * std::cos(2 * kPi * x[2]), 0.0); }, {4, 5, 8},
      {1.0, 1.0, 1.0});
  const auto m = last_axis_marginal(g);
  double total = 0.0;
  for (double v : m) total += v / 8.0;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(m[0], 1.5, 1e-14);
}
