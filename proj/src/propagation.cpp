#include "halfspec/propagation.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

namespace halfspec {

namespace {

constexpr double kAntiHermitianTolerance = 1e-10;

void check_dense_size(std::size_t n, std::size_t limit) {
  if (n > limit)
    throw std::invalid_argument("dense propagation refused: N=" + std::to_string(n) +
                                " exceeds limit " + std::to_string(limit));
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "expm" || name == "dense_expm") return Scheme::DenseExpm;
  if (name == "cayley" || name == "cayley_midpoint") return Scheme::CayleyMidpoint;
  if (name == "krylov" || name == "krylov_expm") return Scheme::KrylovExpm;
  if (name == "rk4") return Scheme::Rk4;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected expm|cayley|krylov|rk4)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::DenseExpm: return "dense_expm";
    case Scheme::CayleyMidpoint: return "cayley_midpoint";
    case Scheme::KrylovExpm: return "krylov_expm";
    case Scheme::Rk4: return "rk4";
  }
  return "unknown";
}

void SchemeSpec::validate() const {
  switch (scheme) {
    case Scheme::CayleyMidpoint:
    case Scheme::Rk4:
      if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument(to_string(scheme) + " needs a positive step size dt");
      break;
    case Scheme::KrylovExpm:
      if (!(tol > 0.0)) throw std::invalid_argument("krylov_expm needs tol > 0");
      if (krylov_dim < 2) throw std::invalid_argument("krylov dimension must be >= 2");
      break;
    case Scheme::DenseExpm:
      break;
  }
}

struct StateEvolver::Cache {
  // dense_expm, anti-Hermitian G = -i V diag(lambda) V^dagger
  std::optional<Eigen::SelfAdjointEigenSolver<CMatrix>> eig;
  // dense_expm, general G
  std::optional<CMatrix> dense;
  // cayley_midpoint
  SparseCMatrix sparse;
  double factored_step = 0.0;
  std::unique_ptr<Eigen::SparseLU<SparseCMatrix>> lu;
  SparseCMatrix rhs_op;
};

StateEvolver::StateEvolver(const SparseBandedOperator& gen, SchemeSpec spec)
    : gen_(&gen), spec_(spec), cache_(std::make_unique<Cache>()) {
  spec_.validate();
  if (spec_.scheme == Scheme::DenseExpm) {
    check_dense_size(gen.size(), kDenseSizeLimit);
    const CMatrix g = gen.generator_sign() * gen.to_dense();
    const double defect = (g + g.adjoint()).cwiseAbs().maxCoeff();
    if (defect <= kAntiHermitianTolerance) {
      // G anti-Hermitian => H = iG Hermitian and exp(tG) = V exp(-i t Lambda) V^dagger.
      const CMatrix h = Complex(0.0, 1.0) * g;
      cache_->eig.emplace(0.5 * (h + h.adjoint()));
    } else {
      cache_->dense = g;
    }
  } else if (spec_.scheme == Scheme::CayleyMidpoint) {
    cache_->sparse = gen.generator_sign() * gen.to_sparse();
  }
}

StateEvolver::~StateEvolver() = default;
StateEvolver::StateEvolver(StateEvolver&&) noexcept = default;
StateEvolver& StateEvolver::operator=(StateEvolver&&) noexcept = default;

CVector StateEvolver::advance(const CVector& z0, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("evolve: time must be finite");
  if (static_cast<std::size_t>(z0.size()) != gen_->size())
    throw std::invalid_argument("evolve: state size does not match generator");
  if (t == 0.0) return z0;
  const auto& gen = *gen_;

  switch (spec_.scheme) {
    case Scheme::DenseExpm: {
      if (cache_->eig) {
        const auto& es = *cache_->eig;
        const Eigen::VectorXd& lambda = es.eigenvalues();
        CVector phases(lambda.size());
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
          phases[i] = std::exp(Complex(0.0, -t * lambda[i]));
        const CMatrix& v = es.eigenvectors();
        return v * (phases.asDiagonal() * (v.adjoint() * z0));
      }
      const CMatrix e = (t * *cache_->dense).exp();
      return e * z0;
    }
    case Scheme::KrylovExpm: {
      const double anorm = gen.inf_norm();
      return krylov_expv([&gen](const CVector& x) { return gen.apply_generator(x); }, z0, t,
                         spec_.tol, spec_.krylov_dim, anorm);
    }
    case Scheme::CayleyMidpoint: {
      const auto steps = static_cast<long>(std::ceil(std::abs(t) / spec_.dt - 1e-12));
      const double h = t / static_cast<double>(std::max(steps, 1L));
      if (!cache_->lu || cache_->factored_step != h) {
        const auto n = static_cast<Eigen::Index>(gen.size());
        SparseCMatrix id(n, n);
        id.setIdentity();
        SparseCMatrix lhs = id - (0.5 * h) * cache_->sparse;
        cache_->rhs_op = id + (0.5 * h) * cache_->sparse;
        lhs.makeCompressed();
        cache_->lu = std::make_unique<Eigen::SparseLU<SparseCMatrix>>();
        cache_->lu->compute(lhs);
        if (cache_->lu->info() != Eigen::Success)
          throw std::runtime_error("cayley_midpoint: factorization failed");
        cache_->factored_step = h;
      }
      CVector z = z0;
      for (long s = 0; s < std::max(steps, 1L); ++s) {
        const CVector rhs = cache_->rhs_op * z;
        z = cache_->lu->solve(rhs);
      }
      return z;
    }
    case Scheme::Rk4: {
      const auto steps = static_cast<long>(std::ceil(std::abs(t) / spec_.dt - 1e-12));
      const double h = t / static_cast<double>(std::max(steps, 1L));
      CVector z = z0;
      for (long s = 0; s < std::max(steps, 1L); ++s) {
        const CVector k1 = gen.apply_generator(z);
        const CVector k2 = gen.apply_generator(z + 0.5 * h * k1);
        const CVector k3 = gen.apply_generator(z + 0.5 * h * k2);
        const CVector k4 = gen.apply_generator(z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      return z;
    }
  }
  throw std::logic_error("unhandled scheme");
}

CVector evolve_state(const SparseBandedOperator& gen, const CVector& z0, double t,
                     const SchemeSpec& spec) {
  StateEvolver evolver(gen, spec);
  return evolver.advance(z0, t);
}

CVector krylov_expv(const std::function<CVector(const CVector&)>& apply, const CVector& v,
                    double t, double tol, int krylov_dim, double generator_norm) {
  const Eigen::Index n = v.size();
  CVector w = v;
  if (t == 0.0 || n == 0 || w.norm() == 0.0) return w;

  const double sign = t > 0.0 ? 1.0 : -1.0;
  const double t_total = std::abs(t);
  const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
  const double anorm = std::max(generator_norm, 1e-300);
  constexpr double gamma = 0.9;
  constexpr double delta = 1.2;
  constexpr int max_rejections = 60;
  const double breakdown_tol = 1e-13 * std::max(anorm, 1.0);
  const double xm = 1.0 / m;

  // Initial step from the a-priori bound, per unit norm.
  const double fact = std::pow((m + 1) / std::exp(1.0), m + 1) * std::sqrt(2.0 * std::numbers::pi * (m + 1));
  double t_new = (1.0 / anorm) * std::pow(fact * tol / (4.0 * anorm), xm);
  double t_now = 0.0;

  CMatrix basis(n, m + 1);
  CMatrix hess(m + 1, m);
  while (t_total - t_now > 1e-14 * t_total) {
    double tau = std::min(t_total - t_now, t_new);
    const double beta = w.norm();
    basis.setZero();
    hess.setZero();
    basis.col(0) = w / beta;

    int mb = m;
    bool breakdown = false;
    for (int j = 0; j < m; ++j) {
      CVector p = sign * apply(basis.col(j));
      // Classical Gram-Schmidt, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        const CVector h = basis.leftCols(j + 1).adjoint() * p;
        p -= basis.leftCols(j + 1) * h;
        hess.col(j).head(j + 1) += h;
      }
      const double s = p.norm();
      if (s < breakdown_tol) {
        breakdown = true;
        mb = j + 1;
        tau = t_total - t_now;
        break;
      }
      hess(j + 1, j) = s;
      basis.col(j + 1) = p / s;
    }

    CMatrix f;
    double err = 0.0;
    for (int rejections = 0;; ++rejections) {
      f = (tau * hess.topLeftCorner(mb, mb)).exp();
      if (breakdown) break;
      err = std::abs(hess(m, m - 1)) * std::abs(f(m - 1, 0));
      if (err <= delta * tol * tau / t_total) break;
      if (rejections >= max_rejections)
        throw std::runtime_error("krylov_expm: step size control failed to meet tolerance");
      tau = gamma * tau * std::pow(tau * tol / (t_total * err), xm);
    }

    w = beta * (basis.leftCols(mb) * f.col(0).head(mb));
    t_now += tau;
    if (breakdown) break;
    t_new = err > 0.0 ? gamma * tau * std::pow(tau * tol / (t_total * err), xm) : 10.0 * tau;
  }
  return w;
}

UnitaryPropagator dense_propagator(const SparseBandedOperator& gen, double t,
                                   std::size_t size_limit) {
  if (gen.kind() != GeneratorKind::HalfDensity)
    throw std::invalid_argument("dense_propagator needs a half-density generator");
  check_dense_size(gen.size(), size_limit);
  if (!std::isfinite(t)) throw std::invalid_argument("dense_propagator: time must be finite");
  const auto n = static_cast<Eigen::Index>(gen.size());
  if (t == 0.0) return {gen.trunc(), CMatrix::Identity(n, n)};
  const CMatrix x = gen.to_dense();
  if ((x + x.adjoint()).cwiseAbs().maxCoeff() > kAntiHermitianTolerance)
    throw std::invalid_argument("dense_propagator: generator is not anti-Hermitian");
  // i X_N is Hermitian; exp(-t X_N) = exp(i t (i X_N)) = V exp(i t Lambda) V^dagger.
  const CMatrix h = Complex(0.0, 1.0) * x;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& lambda = es.eigenvalues();
  CVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::exp(Complex(0.0, t * lambda[i]));
  const CMatrix& v = es.eigenvectors();
  return {gen.trunc(), v * phases.asDiagonal() * v.adjoint()};
}

ObservableMatrix conjugate_observable(const UnitaryPropagator& u, const ObservableMatrix& h) {
  if (u.matrix.rows() != h.matrix.rows() || u.matrix.cols() != h.matrix.cols())
    throw std::invalid_argument("conjugate_observable: dimension mismatch");
  return {h.trunc, u.matrix * h.matrix * u.matrix.adjoint()};
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unitarity_defect: matrix is not square");
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace halfspec
