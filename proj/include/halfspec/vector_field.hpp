#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "halfspec/spectral_field.hpp"

namespace halfspec {

/// Trigonometric-polynomial vector field on a torus.
///
/// Component i is X^i(x) = sum_p c^i_p exp(i sum_j omega_j p_j x_j) with
/// omega_j = 2 pi / L_j. The coefficients are those of the plain function,
/// not of the orthonormal basis.
class VectorFieldSpec {
 public:
  VectorFieldSpec() = default;
  explicit VectorFieldSpec(std::vector<double> periods);

  int dim() const { return static_cast<int>(periods_.size()); }
  const std::vector<double>& periods() const { return periods_; }
  const std::map<MultiIndex, Complex>& component(int i) const { return components_[i]; }

  /// Accumulates c into the coefficient at frequency p of component i.
  void add_term(int component, const MultiIndex& p, Complex c);
  /// Adds amplitude * cos(omega . p x) to component i.
  void add_cos(int component, const MultiIndex& p, double amplitude);
  /// Adds amplitude * sin(omega . p x) to component i.
  void add_sin(int component, const MultiIndex& p, double amplitude);

  /// max_{i,p} |c^i_{-p} - conj(c^i_p)|.
  double reality_defect() const;
  /// W: the largest number of stored coefficients over components.
  std::size_t max_terms() const;
  /// Union of stored frequencies across components, sorted.
  std::vector<MultiIndex> frequencies() const;
  /// max_p |sum_i omega_i p_i c^i_p|; zero iff the field is divergence free.
  double divergence_defect() const;

  std::vector<double> evaluate(std::span<const double> x) const;
  /// Partial derivative d X^component / d x^axis at x.
  double derivative(int component, int axis, std::span<const double> x) const;

 private:
  std::vector<double> periods_;
  std::vector<std::map<MultiIndex, Complex>> components_;
};

/// x' = -sin(2x) on the circle of period 2 pi.
VectorFieldSpec s1_benchmark_field();

enum class AbcVariant {
  /// Classical Arnold-Beltrami-Childress field plus D cos(2 pi x_i) on
  /// component i; divergence free when D = 0.
  Classical,
  /// x: A sin z + C cos y, y: B sin z + A cos y, z: A sin z + B cos y,
  /// plus the same D terms. Not divergence free even at D = 0.
  Printed,
};

struct AbcParameters {
  double a = 1.0;
  double b = 0.5;
  double c = 0.2;
  double d = 0.5;
  AbcVariant variant = AbcVariant::Classical;
};

/// Modified ABC flow on the unit 3-torus.
VectorFieldSpec abc_field(const AbcParameters& params);

AbcVariant parse_abc_variant(const std::string& name);
std::string to_string(AbcVariant v);

}  // namespace halfspec
