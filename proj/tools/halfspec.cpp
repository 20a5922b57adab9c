// Command-line front end: bench-s1, abc, solve, convergence.
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "halfspec/runners.hpp"

using namespace halfspec;

namespace {

struct Overrides {
  std::string config;
  std::optional<int> modes;
  std::optional<double> t_final;
  std::optional<int> snapshots;
  std::optional<std::string> scheme;
  std::optional<double> dt;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> abc_d;
  std::optional<std::string> abc_variant;
  std::vector<std::string> solvers;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "Scenario JSON file")->check(CLI::ExistingFile);
  app->add_option("-K,--modes", o.modes, "Truncation K per axis");
  app->add_option("--t-final", o.t_final, "Final time");
  app->add_option("--snapshots", o.snapshots, "Number of snapshot times, ends included");
  app->add_option("--scheme", o.scheme, "expm | cayley | krylov | rk4");
  app->add_option("--dt", o.dt, "Step size for cayley and rk4");
  app->add_option("--tol", o.tol, "Krylov tolerance");
  app->add_option("--seed", o.seed, "Particle RNG seed");
  app->add_option("--particles", o.particles, "Particle count");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--solvers", o.solvers, "Subset of alg2 standard alg3 particles");
}

Scenario build(Scenario sc, const Overrides& o) {
  if (!o.config.empty()) {
    std::ifstream is(o.config);
    sc.merge_json(nlohmann::json::parse(is));
  }
  if (o.modes) sc.modes = *o.modes;
  if (o.t_final) sc.t_final = *o.t_final;
  if (o.snapshots) sc.n_snapshots = *o.snapshots;
  if (o.scheme) sc.scheme.scheme = parse_scheme(*o.scheme);
  if (o.dt) sc.scheme.dt = *o.dt;
  if (o.tol) sc.scheme.tol = *o.tol;
  if (o.seed) sc.seed = *o.seed;
  if (o.particles) sc.particle_count = *o.particles;
  if (o.out) sc.output_dir = *o.out;
  if (o.format) sc.format = parse_output_format(*o.format);
  if (o.abc_d) sc.field.abc.d = *o.abc_d;
  if (o.abc_variant) sc.field.abc.variant = parse_abc_variant(*o.abc_variant);
  if (!o.solvers.empty()) sc.solvers = o.solvers;
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-density spectral advection solvers"};
  app.set_version_flag("--version", HALFSPEC_VERSION);
  app.require_subcommand(1);

  Overrides o;
  auto* bench = app.add_subcommand("bench-s1", "Circle benchmark x' = -sin 2x");
  auto* abc = app.add_subcommand("abc", "Modified ABC flow on the unit 3-torus");
  auto* solve = app.add_subcommand("solve", "Density evolution for a scenario file");
  auto* conv = app.add_subcommand("convergence", "L1 error study on the circle benchmark");
  for (auto* sub : {bench, abc, solve, conv}) add_common(sub, o);
  abc->add_option("--D", o.abc_d, "Compressibility amplitude D");
  abc->add_option("--variant", o.abc_variant, "classical | printed");

  CLI11_PARSE(app, argc, argv);

  std::string stage = "config";
  try {
    RunReport report;
    if (bench->parsed()) {
      report = run_benchmark_s1(build(Scenario::s1_benchmark(), o));
    } else if (abc->parsed()) {
      report = run_abc(build(Scenario::abc(), o));
    } else if (conv->parsed()) {
      report = run_convergence(build(Scenario::s1_benchmark(), o));
    } else {
      report = run_solve(build(Scenario::s1_benchmark(), o));
    }
    std::cout << report.summary.dump(2) << '\n';
    return 0;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: stage '" << stage << "' failed: " << e.what() << '\n';
    return 2;
  }
}
