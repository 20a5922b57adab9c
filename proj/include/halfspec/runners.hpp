#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halfspec/scenario.hpp"

namespace halfspec {

/// Failure inside a named stage of a run.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunReport {
  /// Written files, relative to the scenario output directory.
  std::vector<std::string> files;
  /// Headline numbers, also stored in manifest.json.
  nlohmann::json summary;
};

/// Circle benchmark x' = -sin 2x from the uniform density. Writes
///   densities:     t, x, exact, alg2, standard
///   conservation:  t, nuclear_mass_alg2, l1_alg2, l1_standard, l1_drift_standard,
///                  negativity_alg2, negativity_standard
///   convergence:   K, N, l1_error_alg2, l1_error_standard
///   observables:   t, discrepancy_alg3, discrepancy_standard, opnorm_alg3,
///                  supnorm_standard, pairing_re, pairing_im
/// plus manifest.json.
RunReport run_benchmark_s1(const Scenario& sc);

/// Three-torus run. Writes
///   marginals:   t, z, alg2, particles
///   timeseries:  t, nuclear_mass, l1, negativity, marginal_l1_distance
/// plus manifest.json. When D = 0 the half-density and density generators
/// are compared and the run fails if they differ by more than 1e-12.
RunReport run_abc(const Scenario& sc);

/// Generic density run for any scenario: per-snapshot conservation
/// diagnostics and the final density for each requested solver.
RunReport run_solve(const Scenario& sc);

/// L1 error study against the closed-form circle solution only.
RunReport run_convergence(const Scenario& sc);

/// Largest |X_N + G| entry: zero exactly when the field is divergence free.
double generator_mismatch(const VectorFieldSpec& vf, const TruncationSpec& trunc);

/// z-marginal (last axis) of a density sampled on a full grid, normalized
/// to unit integral.
std::vector<double> last_axis_marginal(const GridField& rho);

}  // namespace halfspec
