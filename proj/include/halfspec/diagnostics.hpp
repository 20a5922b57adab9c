#pragma once

#include <utility>
#include <vector>

#include "halfspec/solvers.hpp"

namespace halfspec {

/// Trapezoid quadrature of |rho|.
double l1_norm_grid(const GridField& rho);

/// Trapezoid quadrature of |a - b| on a shared grid.
double l1_distance(const GridField& a, const GridField& b);

/// sum_k |c_k|^2 = integral of |psi_N|^2.
double nuclear_mass(const SpectralField& psi);

/// Trapezoid quadrature of max(-Re rho, 0).
double negativity(const GridField& rho);

/// Eigenvalues of a Hermitian observable, ascending.
Eigen::VectorXd sorted_eigenvalues(const ObservableMatrix& h);

/// max |eigenvalue|. Throws when the Hermitian defect exceeds 1e-8.
double operator_norm(const ObservableMatrix& h);

/// <psi | H | psi>.
Complex pairing(const ObservableMatrix& h, const SpectralField& psi);

enum class ProductMethod { HalfDensity, Standard };

/// Order-of-operations discrepancy for the product of two observables.
///
/// HalfDensity: max-entry difference between the evolved operator product
/// U (H_f H_g) U^dagger and the product of the evolved operators.
/// Standard: sup over the evaluation grid of |f_N g_N - h_N| where each of
/// f, g and h = f g is evolved with the transport generator.
///
/// Requires K_f + K_g <= K so f g is representable in `trunc`.
double product_discrepancy(const SpectralField& f, const SpectralField& g,
                           const VectorFieldSpec& vf, double t, const TruncationSpec& trunc,
                           const SchemeSpec& spec, ProductMethod method);

/// Least-squares slope of log(error) against log(N).
double fit_convergence(const std::vector<std::pair<double, double>>& samples);

}  // namespace halfspec
