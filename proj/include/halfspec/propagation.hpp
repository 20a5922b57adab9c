#pragma once

#include <functional>
#include <memory>
#include <string>

#include "halfspec/operators.hpp"

namespace halfspec {

enum class Scheme {
  /// Exact exponential of the dense generator. Unitary for anti-Hermitian G.
  DenseExpm,
  /// (I - h/2 G)^{-1} (I + h/2 G) per step; unitary, second order.
  CayleyMidpoint,
  /// Adaptive Arnoldi approximation of exp(tG) z.
  KrylovExpm,
  /// Classical fourth-order Runge-Kutta; not norm preserving.
  Rk4,
};

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct SchemeSpec {
  Scheme scheme = Scheme::DenseExpm;
  /// Step size for cayley_midpoint and rk4.
  double dt = 0.0;
  /// Local error tolerance per unit time for krylov_expm.
  double tol = 1e-8;
  int krylov_dim = 30;

  void validate() const;
  bool is_unitary() const { return scheme != Scheme::Rk4; }
};

/// Matrices at most this large are handled with dense linear algebra.
inline constexpr std::size_t kDenseSizeLimit = 4096;

/// Integrates z' = G z for one generator, caching factorizations so that
/// repeated calls (snapshot series) do not redo setup work.
class StateEvolver {
 public:
  StateEvolver(const SparseBandedOperator& gen, SchemeSpec spec);
  ~StateEvolver();
  StateEvolver(StateEvolver&&) noexcept;
  StateEvolver& operator=(StateEvolver&&) noexcept;

  /// z(t) from z(0) = z0. Negative t runs the flow backward.
  CVector advance(const CVector& z0, double t);

  const SchemeSpec& spec() const { return spec_; }

 private:
  struct Cache;
  const SparseBandedOperator* gen_;
  SchemeSpec spec_;
  std::unique_ptr<Cache> cache_;
};

/// One-shot convenience wrapper around StateEvolver.
CVector evolve_state(const SparseBandedOperator& gen, const CVector& z0, double t,
                     const SchemeSpec& spec);

/// exp(tG) v by restarted Arnoldi with step-size control. `apply` computes G x.
/// Norm preserving when G is anti-Hermitian.
CVector krylov_expv(const std::function<CVector(const CVector&)>& apply, const CVector& v,
                    double t, double tol, int krylov_dim, double generator_norm);

struct UnitaryPropagator {
  TruncationSpec trunc;
  CMatrix matrix;
};

/// U = exp(-t X_N) via the Hermitian eigendecomposition of i X_N.
/// Throws for non half-density operators, anti-Hermitian defect above
/// 1e-10, or N above `size_limit`.
UnitaryPropagator dense_propagator(const SparseBandedOperator& gen, double t,
                                   std::size_t size_limit = kDenseSizeLimit);

/// U H U^dagger.
ObservableMatrix conjugate_observable(const UnitaryPropagator& u, const ObservableMatrix& h);

/// max |U^dagger U - I|.
double unitarity_defect(const CMatrix& u);

}  // namespace halfspec
