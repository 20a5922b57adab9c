#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

#include "halfspec/spectral_field.hpp"
#include "halfspec/vector_field.hpp"

namespace halfspec {

/// What a banded operator represents, which fixes the ODE it drives:
/// half-density operators store X_N and evolve by z' = -X_N z; the two
/// baselines store their generator G and evolve by z' = G z.
enum class GeneratorKind { HalfDensity, Density, Transport };

std::string to_string(GeneratorKind kind);

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

/// Operator on V_N stored as diagonals along multi-index offsets.
///
/// Band `b` maps source mode m to target m + offset_b. Each band keeps one
/// entry per source in canonical order; sources whose target lies outside
/// the truncation have target -1 and a zero entry.
class SparseBandedOperator {
 public:
  struct Band {
    MultiIndex offset;
    std::vector<Complex> entries;
    std::vector<std::int64_t> targets;
  };

  SparseBandedOperator(TruncationSpec trunc, GeneratorKind kind);

  const TruncationSpec& trunc() const { return trunc_; }
  GeneratorKind kind() const { return kind_; }
  const std::vector<Band>& bands() const { return bands_; }
  std::size_t size() const { return trunc_.size(); }

  /// Creates (or returns) the band at `offset` with all entries zero.
  Band& band(const MultiIndex& offset);
  const Band* find_band(const MultiIndex& offset) const;

  /// Stored entry at (row, col); zero off-band.
  Complex entry(std::size_t row, std::size_t col) const;
  std::size_t stored_entries() const;

  /// y = A x with the stored matrix (no kind-dependent sign).
  CVector apply(const CVector& x) const;
  /// y = G x where G is the right-hand side operator of the evolution ODE.
  CVector apply_generator(const CVector& x) const;
  /// +1 for baselines, -1 for half-density operators.
  double generator_sign() const { return kind_ == GeneratorKind::HalfDensity ? -1.0 : 1.0; }

  CMatrix to_dense() const;
  SparseCMatrix to_sparse() const;
  /// Infinity norm of the stored matrix.
  double inf_norm() const;

  nlohmann::json to_json() const;
  static SparseBandedOperator from_json(const nlohmann::json& j);
  void write_matrix_market(std::ostream& os) const;

 private:
  TruncationSpec trunc_;
  GeneratorKind kind_;
  std::vector<Band> bands_;
};

/// Galerkin truncation of the half-density Lie derivative:
/// [X_N]_{m+p, m} = sum_i i omega_i c^i_p (m_i + p_i / 2). Anti-Hermitian.
SparseBandedOperator assemble_half_density_generator(const VectorFieldSpec& vf,
                                                     const TruncationSpec& trunc);

/// Standard Galerkin generator for rho' = -div(rho X):
/// G_{m+p, m} = -sum_i i omega_i c^i_p (m_i + p_i).
SparseBandedOperator assemble_density_generator(const VectorFieldSpec& vf,
                                                const TruncationSpec& trunc);

/// Standard Galerkin generator for f' = -X . grad f:
/// T_{m+p, m} = -sum_i i omega_i c^i_p m_i.
SparseBandedOperator assemble_transport_generator(const VectorFieldSpec& vf,
                                                  const TruncationSpec& trunc);

/// max |A + A^dagger| over the truncated matrix.
double antihermitian_defect(const SparseBandedOperator& op);

/// Truncated multiplication operator H_{f,N}.
struct ObservableMatrix {
  TruncationSpec trunc;
  CMatrix matrix;

  double hermitian_defect() const;
};

/// (H_f)_{m', m} = plain Fourier coefficient of f at m' - m.
/// `f` may use any truncation of the same torus; missing modes count as zero.
ObservableMatrix assemble_multiplication_operator(const SpectralField& f,
                                                  const TruncationSpec& trunc);

}  // namespace halfspec
