#include "halfspec/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace halfspec {

double l1_norm_grid(const GridField& rho) {
  return rho.cell_volume() * rho.samples.cwiseAbs().sum();
}

double l1_distance(const GridField& a, const GridField& b) {
  if (a.sizes != b.sizes || a.periods != b.periods)
    throw std::invalid_argument("l1_distance: grids differ");
  return a.cell_volume() * (a.samples - b.samples).cwiseAbs().sum();
}

double nuclear_mass(const SpectralField& psi) { return psi.coeffs.squaredNorm(); }

double negativity(const GridField& rho) {
  double sum = 0.0;
  for (const auto& v : rho.samples) sum += std::max(-v.real(), 0.0);
  return rho.cell_volume() * sum;
}

Eigen::VectorXd sorted_eigenvalues(const ObservableMatrix& h) {
  if (h.hermitian_defect() > 1e-8)
    throw std::invalid_argument("observable is not Hermitian (defect " +
                                std::to_string(h.hermitian_defect()) + ")");
  const CMatrix sym = 0.5 * (h.matrix + h.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double operator_norm(const ObservableMatrix& h) {
  return sorted_eigenvalues(h).cwiseAbs().maxCoeff();
}

Complex pairing(const ObservableMatrix& h, const SpectralField& psi) {
  if (static_cast<std::size_t>(h.matrix.rows()) != psi.trunc.size())
    throw std::invalid_argument("pairing: truncation mismatch");
  return psi.coeffs.dot(h.matrix * psi.coeffs);
}

double product_discrepancy(const SpectralField& f, const SpectralField& g,
                           const VectorFieldSpec& vf, double t, const TruncationSpec& trunc,
                           const SchemeSpec& spec, ProductMethod method) {
  for (int i = 0; i < trunc.dim(); ++i)
    if (f.trunc.cutoff(i) + g.trunc.cutoff(i) > trunc.cutoff(i))
      throw std::invalid_argument("product_discrepancy: K_f + K_g exceeds the truncation");

  if (method == ProductMethod::HalfDensity) {
    const auto gen = assemble_half_density_generator(vf, trunc);
    const auto u = propagator_for(gen, t, spec);
    const auto hf = assemble_multiplication_operator(f, trunc);
    const auto hg = assemble_multiplication_operator(g, trunc);
    const ObservableMatrix hk{trunc, hf.matrix * hg.matrix};
    const CMatrix evolved_product = conjugate_observable(u, hk).matrix;
    const CMatrix product_evolved =
        conjugate_observable(u, hf).matrix * conjugate_observable(u, hg).matrix;
    return (evolved_product - product_evolved).cwiseAbs().maxCoeff();
  }

  const auto gen = assemble_transport_generator(vf, trunc);
  StateEvolver evolver(gen, spec);
  const SpectralField fk = retruncate(f, trunc);
  const SpectralField gk = retruncate(g, trunc);
  const SpectralField hk = multiply_fields(f, g, trunc);
  const auto grid = evaluation_grid(trunc);
  const GridField ft = synthesize(SpectralField(trunc, evolver.advance(fk.coeffs, t)), grid);
  const GridField gt = synthesize(SpectralField(trunc, evolver.advance(gk.coeffs, t)), grid);
  const GridField ht = synthesize(SpectralField(trunc, evolver.advance(hk.coeffs, t)), grid);
  return (ft.samples.cwiseProduct(gt.samples) - ht.samples).cwiseAbs().maxCoeff();
}

double fit_convergence(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("fit_convergence: need at least 3 samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [n, err] : samples) {
    if (!(err > 0.0)) throw std::invalid_argument("fit_convergence: errors must be positive");
    if (!(n > 0.0)) throw std::invalid_argument("fit_convergence: N must be positive");
    const double x = std::log(n), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(samples.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_convergence: N values are all equal");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace halfspec
