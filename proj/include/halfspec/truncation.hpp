#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace halfspec {

/// Integer frequency vector (k_1, ..., k_n).
using MultiIndex = std::vector<int>;

/// Symmetric Fourier truncation on a flat torus with per-axis periods.
///
/// Axis i keeps the modes -K_i..K_i, so the basis has prod(2K_i+1) elements.
/// Basis elements are e_k(x) = prod_i L_i^{-1/2} exp(2 pi i k_i x_i / L_i),
/// orthonormal in L^2 of the torus.
///
/// Canonical order is lexicographic in (k_1, ..., k_n), each running from
/// -K_i to K_i with the last axis varying fastest.
class TruncationSpec {
 public:
  TruncationSpec() = default;
  TruncationSpec(std::vector<int> cutoffs, std::vector<double> periods);

  /// Same cutoff K and period L along every one of `dim` axes.
  static TruncationSpec uniform(int dim, int cutoff, double period);

  int dim() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int axis) const { return cutoffs_[axis]; }
  double period(int axis) const { return periods_[axis]; }
  int modes(int axis) const { return 2 * cutoffs_[axis] + 1; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  const std::vector<double>& periods() const { return periods_; }

  /// N = prod(2K_i + 1).
  std::size_t size() const { return size_; }

  bool contains(const MultiIndex& k) const;

  /// Position of `k` in canonical order, or -1 when outside the cutoff.
  std::int64_t flat_index(const MultiIndex& k) const;
  MultiIndex multi_index(std::size_t flat) const;

  /// Angular frequency 2 pi / L_i.
  double omega(int axis) const;

  /// Laplacian eigenvalue sum_i (2 pi k_i / L_i)^2.
  double laplace_eigenvalue(const MultiIndex& k) const;

  /// prod_i sqrt(L_i): converts orthonormal coefficients to plain Fourier
  /// coefficients of a function.
  double sqrt_volume() const;
  double volume() const;

  bool same_geometry(const TruncationSpec& other) const;
  bool operator==(const TruncationSpec& other) const = default;

 private:
  std::vector<int> cutoffs_;
  std::vector<double> periods_;
  std::size_t size_ = 0;
};

/// Every multi-index of the truncation in canonical order.
std::vector<MultiIndex> index_set(const TruncationSpec& trunc);

}  // namespace halfspec
