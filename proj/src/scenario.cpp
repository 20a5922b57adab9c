#include "halfspec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace halfspec {

namespace {

const std::vector<std::string> kKnownSolvers{"alg2", "standard", "alg3", "particles"};

nlohmann::json scheme_to_json(const SchemeSpec& s) {
  return {{"name", to_string(s.scheme)}, {"dt", s.dt}, {"tol", s.tol}, {"krylov_dim", s.krylov_dim}};
}

void merge_scheme(SchemeSpec& s, const nlohmann::json& j) {
  if (j.contains("name")) s.scheme = parse_scheme(j.at("name").get<std::string>());
  if (j.contains("dt")) s.dt = j.at("dt").get<double>();
  if (j.contains("tol")) s.tol = j.at("tol").get<double>();
  if (j.contains("krylov_dim")) s.krylov_dim = j.at("krylov_dim").get<int>();
}

}  // namespace

Scenario Scenario::s1_benchmark() {
  Scenario s;
  s.name = "s1_benchmark";
  s.dim = 1;
  s.periods = {2.0 * std::numbers::pi};
  s.field.preset = "s1_benchmark";
  s.initial.preset = "uniform";
  s.modes = 16;
  s.max_modes = 256;
  s.t_final = 1.5;
  s.n_snapshots = 30;
  s.scheme.scheme = Scheme::DenseExpm;
  s.solvers = {"alg2", "standard", "alg3"};
  s.output_dir = "out/bench-s1";
  return s;
}

Scenario Scenario::abc() {
  Scenario s;
  s.name = "abc_modified";
  s.dim = 3;
  s.periods = {1.0, 1.0, 1.0};
  s.field.preset = "abc_modified";
  s.initial.preset = "wrapped_gaussian";
  s.initial.mean = {0.0, 0.0, 0.0};
  s.initial.sigma = {0.2, 0.3, 0.3};
  s.modes = 8;
  s.max_modes = 12;
  s.t_final = 0.5;
  s.n_snapshots = 6;
  s.scheme.scheme = Scheme::KrylovExpm;
  s.scheme.tol = 1e-8;
  s.solvers = {"alg2", "particles"};
  s.output_dir = "out/abc";
  return s;
}

void Scenario::merge_json(const nlohmann::json& j) {
  if (j.contains("name")) name = j.at("name").get<std::string>();
  if (j.contains("dim")) dim = j.at("dim").get<int>();
  if (j.contains("periods")) periods = j.at("periods").get<std::vector<double>>();
  if (j.contains("vector_field")) {
    const auto& f = j.at("vector_field");
    if (f.contains("preset")) field.preset = f.at("preset").get<std::string>();
    if (f.contains("A")) field.abc.a = f.at("A").get<double>();
    if (f.contains("B")) field.abc.b = f.at("B").get<double>();
    if (f.contains("C")) field.abc.c = f.at("C").get<double>();
    if (f.contains("D")) field.abc.d = f.at("D").get<double>();
    if (f.contains("variant")) field.abc.variant = parse_abc_variant(f.at("variant").get<std::string>());
    if (f.contains("terms")) field.terms = f.at("terms");
  }
  if (j.contains("initial_condition")) {
    const auto& ic = j.at("initial_condition");
    if (ic.contains("preset")) initial.preset = ic.at("preset").get<std::string>();
    if (ic.contains("mean")) initial.mean = ic.at("mean").get<std::vector<double>>();
    if (ic.contains("sigma")) initial.sigma = ic.at("sigma").get<std::vector<double>>();
    if (ic.contains("path")) initial.path = ic.at("path").get<std::string>();
  }
  if (j.contains("modes")) modes = j.at("modes").get<int>();
  if (j.contains("max_modes")) max_modes = j.at("max_modes").get<int>();
  if (j.contains("t_final")) t_final = j.at("t_final").get<double>();
  if (j.contains("n_snapshots")) n_snapshots = j.at("n_snapshots").get<int>();
  if (j.contains("scheme")) merge_scheme(scheme, j.at("scheme"));
  if (j.contains("solvers")) solvers = j.at("solvers").get<std::vector<std::string>>();
  if (j.contains("particles")) {
    const auto& p = j.at("particles");
    if (p.contains("count")) particle_count = p.at("count").get<std::size_t>();
    if (p.contains("seed")) seed = p.at("seed").get<std::uint64_t>();
    if (p.contains("dt")) particle_dt = p.at("dt").get<double>();
  }
  if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("convergence")) {
    const auto& c = j.at("convergence");
    if (c.contains("modes")) convergence_modes = c.at("modes").get<std::vector<int>>();
    if (c.contains("time")) convergence_time = c.at("time").get<double>();
    if (c.contains("error_grid")) error_grid = c.at("error_grid").get<int>();
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("dir")) output_dir = o.at("dir").get<std::string>();
    if (o.contains("format")) format = parse_output_format(o.at("format").get<std::string>());
  }
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json f{{"preset", field.preset}};
  if (field.preset == "abc_modified") {
    f["A"] = field.abc.a;
    f["B"] = field.abc.b;
    f["C"] = field.abc.c;
    f["D"] = field.abc.d;
    f["variant"] = to_string(field.abc.variant);
  }
  if (!field.terms.is_null()) f["terms"] = field.terms;
  nlohmann::json ic{{"preset", initial.preset}};
  if (initial.preset == "wrapped_gaussian") {
    ic["mean"] = initial.mean;
    ic["sigma"] = initial.sigma;
  }
  if (initial.preset == "file") ic["path"] = initial.path;
  return {
      {"name", name},
      {"dim", dim},
      {"periods", periods},
      {"vector_field", f},
      {"initial_condition", ic},
      {"modes", modes},
      {"max_modes", max_modes},
      {"t_final", t_final},
      {"n_snapshots", n_snapshots},
      {"scheme", scheme_to_json(scheme)},
      {"solvers", solvers},
      {"particles", {{"count", particle_count}, {"seed", seed}, {"dt", particle_dt}}},
      {"convergence",
       {{"modes", convergence_modes}, {"time", convergence_time}, {"error_grid", error_grid}}},
      {"output", {{"dir", output_dir}, {"format", format == OutputFormat::Csv ? "csv" : "json"}}},
  };
}

void Scenario::validate() const {
  if (dim < 1) throw std::invalid_argument("scenario: dim must be >= 1");
  if (static_cast<int>(periods.size()) != dim)
    throw std::invalid_argument("scenario: periods must have dim entries");
  if (modes < 1) throw std::invalid_argument("scenario: modes (K) must be >= 1");
  if (modes > max_modes)
    throw std::invalid_argument("scenario: modes K=" + std::to_string(modes) +
                                " exceeds the configured ceiling " + std::to_string(max_modes));
  if (!(t_final > 0.0)) throw std::invalid_argument("scenario: t_final must be positive");
  if (n_snapshots < 2) throw std::invalid_argument("scenario: n_snapshots must be >= 2");
  for (const auto& s : solvers)
    if (std::find(kKnownSolvers.begin(), kKnownSolvers.end(), s) == kKnownSolvers.end())
      throw std::invalid_argument("scenario: unknown solver '" + s + "'");
  if (field.preset != "s1_benchmark" && field.preset != "abc_modified" && field.preset != "custom")
    throw std::invalid_argument("scenario: unknown vector field preset '" + field.preset + "'");
  if (field.preset == "s1_benchmark" && dim != 1)
    throw std::invalid_argument("scenario: s1_benchmark needs dim = 1");
  if (field.preset == "abc_modified" && dim != 3)
    throw std::invalid_argument("scenario: abc_modified needs dim = 3");
  if (initial.preset == "wrapped_gaussian") {
    if (static_cast<int>(initial.mean.size()) != dim || static_cast<int>(initial.sigma.size()) != dim)
      throw std::invalid_argument("scenario: wrapped_gaussian needs mean and sigma of length dim");
  } else if (initial.preset == "file") {
    if (initial.path.empty()) throw std::invalid_argument("scenario: file initial condition needs a path");
  } else if (initial.preset != "uniform") {
    throw std::invalid_argument("scenario: unknown initial condition '" + initial.preset + "'");
  }
  if (uses("particles") && particle_count == 0)
    throw std::invalid_argument("scenario: particle count must be positive");
  scheme.validate();
}

TruncationSpec Scenario::truncation(int cutoff) const {
  return TruncationSpec(std::vector<int>(dim, cutoff), periods);
}

VectorFieldSpec Scenario::build_field() const {
  if (field.preset == "s1_benchmark") {
    VectorFieldSpec vf = s1_benchmark_field();
    if (vf.periods() != periods) throw std::invalid_argument("s1_benchmark needs period 2 pi");
    return vf;
  }
  if (field.preset == "abc_modified") {
    if (periods != std::vector<double>{1.0, 1.0, 1.0})
      throw std::invalid_argument("abc_modified needs unit periods");
    return abc_field(field.abc);
  }
  VectorFieldSpec vf(periods);
  for (const auto& term : field.terms) {
    const int comp = term.at("component").get<int>();
    const auto k = term.at("k").get<MultiIndex>();
    if (term.contains("cos")) vf.add_cos(comp, k, term.at("cos").get<double>());
    else if (term.contains("sin")) vf.add_sin(comp, k, term.at("sin").get<double>());
    else vf.add_term(comp, k, Complex(term.value("re", 0.0), term.value("im", 0.0)));
  }
  return vf;
}

double wrapped_gaussian_density(std::span<const double> x, const std::vector<double>& mean,
                                const std::vector<double>& sigma,
                                const std::vector<double>& periods) {
  double density = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double l = periods[i], s = sigma[i];
    const int images = static_cast<int>(std::ceil(8.0 * s / l)) + 1;
    double sum = 0.0;
    for (int n = -images; n <= images; ++n) {
      const double d = x[i] - mean[i] + n * l;
      sum += std::exp(-0.5 * d * d / (s * s));
    }
    density *= sum / (std::sqrt(2.0 * std::numbers::pi) * s);
  }
  return density;
}

GridField Scenario::initial_density(const std::vector<int>& sizes) const {
  if (initial.preset == "uniform")
    return sample([](std::span<const double>) { return Complex(1.0, 0.0); }, sizes, periods);
  if (initial.preset == "wrapped_gaussian") {
    return sample(
        [this](std::span<const double> x) {
          return Complex(wrapped_gaussian_density(x, initial.mean, initial.sigma, periods), 0.0);
        },
        sizes, periods);
  }
  std::ifstream is(initial.path);
  if (!is) throw std::runtime_error("cannot open initial condition file " + initial.path);
  GridField g = read_grid_csv(is, periods);
  if (g.sizes != sizes) {
    // Resample through the spectral representation of the file's grid.
    std::vector<int> cut(dim);
    for (int i = 0; i < dim; ++i) cut[i] = (g.sizes[i] - 1) / 2;
    const SpectralField s = analyze(g, TruncationSpec(cut, periods));
    for (int i = 0; i < dim; ++i)
      if (sizes[i] < 2 * cut[i] + 1)
        throw std::invalid_argument("initial condition file is finer than the working grid");
    return synthesize(s, sizes);
  }
  return g;
}

std::vector<double> Scenario::snapshot_times() const {
  std::vector<double> t(static_cast<std::size_t>(n_snapshots));
  for (int j = 0; j < n_snapshots; ++j) t[j] = t_final * j / (n_snapshots - 1);
  return t;
}

bool Scenario::uses(const std::string& solver) const {
  return std::find(solvers.begin(), solvers.end(), solver) != solvers.end();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace halfspec
