#pragma once

#include "halfspec/propagation.hpp"

namespace halfspec {

/// Output of the density solver at one time.
struct DensityResult {
  /// rho_N = psi_N^2 on the dealiased evaluation grid.
  GridField rho;
  /// The evolved half-density.
  SpectralField psi;
  /// sum_k |c_k|^2, the conserved mass surrogate.
  double mass_spectral = 0.0;
};

/// Evolves a half-density: z' = -X_N z with X_N from `vf`.
SpectralField solve_half_density(const SpectralField& psi0, const VectorFieldSpec& vf, double t,
                                 const SchemeSpec& spec);

/// psi = sqrt(max(rho, 0)) - i sqrt(max(-rho, 0)), so psi^2 = rho pointwise.
/// Throws std::invalid_argument for complex-valued samples.
GridField sqrt_split(const GridField& rho);

/// Smallest grid with M_i >= 4 K_i + 2 along every axis, rounded up to the
/// default quadrature grid.
std::vector<int> evaluation_grid(const TruncationSpec& trunc);

/// Squares a half-density on the evaluation grid.
DensityResult square_half_density(const SpectralField& psi);

/// Initial half-density for a sampled density: analyze(sqrt_split(rho0)).
/// Logs a warning when min rho0 < 1e-8 max rho0 (square root loses smoothness).
SpectralField half_density_from_density(const GridField& rho0, const TruncationSpec& trunc);

/// Half-density route for the continuity equation.
DensityResult solve_density(const GridField& rho0, const VectorFieldSpec& vf, double t,
                            const TruncationSpec& trunc, const SchemeSpec& spec);

/// Standard Galerkin baseline for the continuity equation; samples on the
/// evaluation grid.
GridField solve_density_standard(const GridField& rho0, const VectorFieldSpec& vf, double t,
                                 const TruncationSpec& trunc, const SchemeSpec& spec);

/// Unitary propagator exp(-t X_N) for the given scheme: the exact dense
/// propagator for dense_expm, otherwise the scheme applied to each basis
/// vector.
UnitaryPropagator propagator_for(const SparseBandedOperator& gen, double t, const SchemeSpec& spec);

/// Isospectral evolution H(t) = U H_{f,N}(0) U^dagger.
ObservableMatrix solve_observable(const SpectralField& f0, const VectorFieldSpec& vf, double t,
                                  const TruncationSpec& trunc, const SchemeSpec& spec);

/// Pointwise product of two fields, exact when the product's bandwidth fits `trunc`.
SpectralField multiply_fields(const SpectralField& f, const SpectralField& g,
                              const TruncationSpec& trunc);

}  // namespace halfspec
