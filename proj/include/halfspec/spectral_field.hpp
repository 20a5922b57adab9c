#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "halfspec/truncation.hpp"

namespace halfspec {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Coefficients of psi = sum_k c_k e_k in canonical index order.
struct SpectralField {
  TruncationSpec trunc;
  CVector coeffs;

  SpectralField() = default;
  SpectralField(TruncationSpec t, CVector c);
  static SpectralField zeros(const TruncationSpec& t);

  Complex operator[](const MultiIndex& k) const;
  /// Largest |c_{-k} - conj(c_k)|; zero for real-valued fields.
  double reality_defect() const;
};

/// Samples on the uniform grid x_j = (j_i L_i / M_i), last axis fastest.
struct GridField {
  std::vector<int> sizes;
  std::vector<double> periods;
  CVector samples;

  GridField() = default;
  GridField(std::vector<int> sizes, std::vector<double> periods, CVector samples);
  static GridField zeros(std::vector<int> sizes, std::vector<double> periods);

  int dim() const { return static_cast<int>(sizes.size()); }
  std::size_t node_count() const { return static_cast<std::size_t>(samples.size()); }
  std::vector<double> node(std::size_t flat) const;
  /// Trapezoid weight prod_i L_i / M_i shared by every node.
  double cell_volume() const;
  double max_imag() const;
};

/// Default quadrature grid M_i = 4(K_i + 1): squares of in-band fields
/// integrate exactly.
std::vector<int> default_grid(const TruncationSpec& trunc);

/// Coefficients c_k = (prod L_i/M_i) sum_j conj(e_k(x_j)) psi(x_j).
/// Throws std::invalid_argument when some M_i < 2K_i + 1.
SpectralField analyze(const GridField& field, const TruncationSpec& trunc);

/// Evaluates the truncated series at every grid node.
GridField synthesize(const SpectralField& spec, const std::vector<int>& sizes);

/// Direct evaluation of the series at an arbitrary point.
Complex evaluate(const SpectralField& spec, std::span<const double> x);

/// (sum_k (1 + lambda_k)^s |c_k|^2)^{1/2}.
double sobolev_norm(const SpectralField& spec, double s);

using PointFunction = std::function<Complex(std::span<const double>)>;

GridField sample(const PointFunction& fn, const std::vector<int>& sizes,
                 const std::vector<double>& periods);

/// Samples `fn` on the default grid of `trunc` and analyzes. Exact for
/// trigonometric polynomials of bandwidth <= K.
SpectralField project_function(const PointFunction& fn, const TruncationSpec& trunc);

/// Re-expresses a field in a different truncation of the same torus:
/// modes present in both are copied, the rest are zero.
SpectralField retruncate(const SpectralField& spec, const TruncationSpec& target);

}  // namespace halfspec
