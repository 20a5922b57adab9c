#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halfspec/io.hpp"
#include "halfspec/propagation.hpp"
#include "halfspec/vector_field.hpp"

namespace halfspec {

struct FieldConfig {
  /// s1_benchmark | abc_modified | custom
  std::string preset = "s1_benchmark";
  AbcParameters abc;
  /// Explicit coefficients for preset "custom" (also the override path for
  /// corrected component formulas).
  nlohmann::json terms;
};

struct InitialConfig {
  /// uniform | wrapped_gaussian | file
  std::string preset = "uniform";
  std::vector<double> mean;
  std::vector<double> sigma;
  std::string path;
};

/// One experiment: geometry, field, initial data, discretization, solvers
/// and output. Serializes to the JSON scenario file format.
struct Scenario {
  std::string name = "s1_benchmark";
  int dim = 1;
  std::vector<double> periods;
  FieldConfig field;
  InitialConfig initial;
  int modes = 16;
  /// Refuse runs with modes above this (keeps desk-scale runs bounded).
  int max_modes = 256;
  double t_final = 1.5;
  int n_snapshots = 30;
  SchemeSpec scheme;
  /// alg2 | standard | alg3 | particles
  std::vector<std::string> solvers;
  std::size_t particle_count = 20000;
  std::uint64_t seed = 12345;
  double particle_dt = 1e-3;
  std::vector<int> convergence_modes{4, 8, 12, 16};
  double convergence_time = 1.0;
  /// Grid size per axis for L1 error quadrature against closed forms.
  int error_grid = 2048;
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::Csv;

  static Scenario s1_benchmark();
  static Scenario abc();

  /// Overlays the keys present in `j` onto this scenario.
  void merge_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;

  TruncationSpec truncation(int cutoff) const;
  TruncationSpec truncation() const { return truncation(modes); }
  VectorFieldSpec build_field() const;
  /// Initial density sampled on the given grid.
  GridField initial_density(const std::vector<int>& sizes) const;
  std::vector<double> snapshot_times() const;
  bool uses(const std::string& solver) const;
};

/// Wrapped normal density on the torus, product over axes.
double wrapped_gaussian_density(std::span<const double> x, const std::vector<double>& mean,
                                const std::vector<double>& sigma,
                                const std::vector<double>& periods);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace halfspec
