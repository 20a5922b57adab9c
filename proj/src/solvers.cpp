#include "halfspec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace halfspec {

SpectralField solve_half_density(const SpectralField& psi0, const VectorFieldSpec& vf, double t,
                                 const SchemeSpec& spec) {
  const auto gen = assemble_half_density_generator(vf, psi0.trunc);
  return SpectralField(psi0.trunc, evolve_state(gen, psi0.coeffs, t, spec));
}

GridField sqrt_split(const GridField& rho) {
  double scale = 0.0;
  for (const auto& v : rho.samples) scale = std::max(scale, std::abs(v));
  if (rho.max_imag() > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("sqrt_split: density samples must be real");
  GridField psi = rho;
  for (auto& v : psi.samples) {
    const double r = v.real();
    v = r >= 0.0 ? Complex(std::sqrt(r), 0.0) : Complex(0.0, -std::sqrt(-r));
  }
  return psi;
}

std::vector<int> evaluation_grid(const TruncationSpec& trunc) {
  std::vector<int> sizes = default_grid(trunc);
  for (int i = 0; i < trunc.dim(); ++i) sizes[i] = std::max(sizes[i], 4 * trunc.cutoff(i) + 2);
  return sizes;
}

DensityResult square_half_density(const SpectralField& psi) {
  GridField rho = synthesize(psi, evaluation_grid(psi.trunc));
  for (auto& v : rho.samples) v = v * v;
  return {std::move(rho), psi, psi.coeffs.squaredNorm()};
}

SpectralField half_density_from_density(const GridField& rho0, const TruncationSpec& trunc) {
  const double lo = rho0.samples.real().minCoeff();
  const double hi = rho0.samples.real().maxCoeff();
  if (lo < 1e-8 * hi)
    std::clog << "warning: initial density nearly vanishes (min " << lo << ", max " << hi
              << "); its square root is not smooth and spectral rates degrade\n";
  return analyze(sqrt_split(rho0), trunc);
}

DensityResult solve_density(const GridField& rho0, const VectorFieldSpec& vf, double t,
                            const TruncationSpec& trunc, const SchemeSpec& spec) {
  const SpectralField psi0 = half_density_from_density(rho0, trunc);
  return square_half_density(solve_half_density(psi0, vf, t, spec));
}

GridField solve_density_standard(const GridField& rho0, const VectorFieldSpec& vf, double t,
                                 const TruncationSpec& trunc, const SchemeSpec& spec) {
  const SpectralField r0 = analyze(rho0, trunc);
  const auto gen = assemble_density_generator(vf, trunc);
  const SpectralField rt(trunc, evolve_state(gen, r0.coeffs, t, spec));
  return synthesize(rt, evaluation_grid(trunc));
}

UnitaryPropagator propagator_for(const SparseBandedOperator& gen, double t, const SchemeSpec& spec) {
  if (spec.scheme == Scheme::DenseExpm) return dense_propagator(gen, t);
  if (gen.kind() != GeneratorKind::HalfDensity)
    throw std::invalid_argument("propagator_for needs a half-density generator");
  if (gen.size() > kDenseSizeLimit)
    throw std::invalid_argument("propagator_for: N exceeds the dense size limit");
  const auto n = static_cast<Eigen::Index>(gen.size());
  StateEvolver evolver(gen, spec);
  CMatrix u(n, n);
  for (Eigen::Index c = 0; c < n; ++c) u.col(c) = evolver.advance(CVector::Unit(n, c), t);
  return {gen.trunc(), std::move(u)};
}

ObservableMatrix solve_observable(const SpectralField& f0, const VectorFieldSpec& vf, double t,
                                  const TruncationSpec& trunc, const SchemeSpec& spec) {
  const auto gen = assemble_half_density_generator(vf, trunc);
  const auto h0 = assemble_multiplication_operator(f0, trunc);
  return conjugate_observable(propagator_for(gen, t, spec), h0);
}

SpectralField multiply_fields(const SpectralField& f, const SpectralField& g,
                              const TruncationSpec& trunc) {
  if (!f.trunc.same_geometry(trunc) || !g.trunc.same_geometry(trunc))
    throw std::invalid_argument("multiply_fields: torus geometry mismatch");
  std::vector<int> sizes(trunc.dim());
  for (int i = 0; i < trunc.dim(); ++i)
    sizes[i] = 2 * (trunc.cutoff(i) + f.trunc.cutoff(i) + g.trunc.cutoff(i)) + 2;
  GridField fg = synthesize(f, sizes);
  const GridField gs = synthesize(g, sizes);
  fg.samples = fg.samples.cwiseProduct(gs.samples);
  return analyze(fg, trunc);
}

}  // namespace halfspec
