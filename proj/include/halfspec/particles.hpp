#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "halfspec/spectral_field.hpp"
#include "halfspec/vector_field.hpp"

namespace halfspec {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so particles can be sampled in any order or in
/// parallel with identical results. Stream i belongs to particle i; the
/// counter enumerates the draws that particle consumes.
///
/// Built from the SplitMix64 finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const;
  /// Standard normal via Box-Muller, consuming counters 2c and 2c + 1.
  double normal(std::uint64_t stream, std::uint64_t c) const;

 private:
  std::uint64_t seed_;
};

struct ParticleEnsemble {
  std::vector<double> periods;
  /// Row-major positions, one row of dim() coordinates per particle.
  std::vector<double> positions;
  std::uint64_t seed = 0;

  int dim() const { return static_cast<int>(periods.size()); }
  std::size_t count() const { return periods.empty() ? 0 : positions.size() / periods.size(); }
  std::span<const double> position(std::size_t i) const {
    return {positions.data() + i * periods.size(), periods.size()};
  }
};

/// Componentwise Gaussian draws wrapped into [0, L_i).
ParticleEnsemble sample_wrapped_gaussian(const std::vector<double>& mean,
                                         const std::vector<double>& sigma, std::size_t count,
                                         std::uint64_t seed, const std::vector<double>& periods);

/// Writes X(x) into `out`.
using FieldEvaluator = std::function<void(std::span<const double> x, std::span<double> out)>;

FieldEvaluator evaluator_for(const VectorFieldSpec& vf);

/// RK4 along x' = X(x) with ceil(|t|/dt) equal steps; positions are wrapped
/// after every step. Throws std::runtime_error on non-finite field values.
ParticleEnsemble advect_particles(const ParticleEnsemble& ens, const FieldEvaluator& field,
                                  double t, double dt);

/// Normalized histogram over the listed axes with `bins` bins per axis.
///
/// Bins are centered on grid nodes: bin j of axis a covers
/// [(j - 1/2) h, (j + 1/2) h) modulo L_a, h = L_a / bins, so the result is a
/// GridField aligned with spectral evaluation grids of the same size. The
/// values are densities: their sum times the bin volume is one.
GridField histogram_marginal(const ParticleEnsemble& ens, const std::vector<int>& axes, int bins);

}  // namespace halfspec
