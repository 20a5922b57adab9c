#include "halfspec/spectral_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace halfspec {

namespace {

// exp(2 pi i k j / M) with the phase reduced mod M first, so large k*j stay accurate.
Complex root_of_unity(long long k, long long j, long long m) {
  long long r = (k * j) % m;
  if (r < 0) r += m;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

// Applies `a` along one axis of a row-major tensor; shape[axis] becomes a.rows().
CVector apply_along_axis(const CVector& in, std::vector<int>& shape, int axis, const CMatrix& a) {
  std::size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(shape[i]);
  for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= static_cast<std::size_t>(shape[i]);
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());
  CVector out = CVector::Zero(static_cast<Eigen::Index>(outer * rows * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < rows; ++r) {
      Complex* dst = out.data() + (o * rows + r) * inner;
      for (std::size_t c = 0; c < cols; ++c) {
        const Complex w = a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        const Complex* src = in.data() + (o * cols + c) * inner;
        for (std::size_t q = 0; q < inner; ++q) dst[q] += w * src[q];
      }
    }
  }
  shape[axis] = static_cast<int>(rows);
  return out;
}

void check_grid(const TruncationSpec& trunc, const std::vector<int>& sizes) {
  if (static_cast<int>(sizes.size()) != trunc.dim())
    throw std::invalid_argument("grid dimension does not match truncation");
  for (int i = 0; i < trunc.dim(); ++i) {
    if (sizes[i] < trunc.modes(i))
      throw std::invalid_argument("grid too coarse for truncation on axis " + std::to_string(i) +
                                  ": M=" + std::to_string(sizes[i]) +
                                  " < 2K+1=" + std::to_string(trunc.modes(i)));
  }
}

}  // namespace

SpectralField::SpectralField(TruncationSpec t, CVector c) : trunc(std::move(t)), coeffs(std::move(c)) {
  if (static_cast<std::size_t>(coeffs.size()) != trunc.size())
    throw std::invalid_argument("spectral field: coefficient count does not match truncation");
}

SpectralField SpectralField::zeros(const TruncationSpec& t) {
  return SpectralField(t, CVector::Zero(static_cast<Eigen::Index>(t.size())));
}

Complex SpectralField::operator[](const MultiIndex& k) const {
  const auto f = trunc.flat_index(k);
  return f < 0 ? Complex{} : coeffs[f];
}

double SpectralField::reality_defect() const {
  double defect = 0.0;
  for (std::size_t f = 0; f < trunc.size(); ++f) {
    MultiIndex k = trunc.multi_index(f);
    for (int& ki : k) ki = -ki;
    const auto g = trunc.flat_index(k);
    defect = std::max(defect, std::abs(coeffs[g] - std::conj(coeffs[static_cast<Eigen::Index>(f)])));
  }
  return defect;
}

GridField::GridField(std::vector<int> s, std::vector<double> p, CVector v)
    : sizes(std::move(s)), periods(std::move(p)), samples(std::move(v)) {
  if (sizes.empty() || sizes.size() != periods.size())
    throw std::invalid_argument("grid field: sizes and periods must be non-empty and equal length");
  std::size_t n = 1;
  for (int m : sizes) {
    if (m < 1) throw std::invalid_argument("grid field: sizes must be positive");
    n *= static_cast<std::size_t>(m);
  }
  for (double l : periods)
    if (!(l > 0.0)) throw std::invalid_argument("grid field: periods must be positive");
  if (static_cast<std::size_t>(samples.size()) != n)
    throw std::invalid_argument("grid field: sample count does not match grid sizes");
}

GridField GridField::zeros(std::vector<int> s, std::vector<double> p) {
  std::size_t n = 1;
  for (int m : s) n *= static_cast<std::size_t>(std::max(m, 0));
  return GridField(std::move(s), std::move(p), CVector::Zero(static_cast<Eigen::Index>(n)));
}

std::vector<double> GridField::node(std::size_t flat) const {
  std::vector<double> x(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    const auto m = static_cast<std::size_t>(sizes[i]);
    x[i] = static_cast<double>(flat % m) * periods[i] / static_cast<double>(m);
    flat /= m;
  }
  return x;
}

double GridField::cell_volume() const {
  double w = 1.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) w *= periods[i] / sizes[i];
  return w;
}

double GridField::max_imag() const {
  double m = 0.0;
  for (const auto& v : samples) m = std::max(m, std::abs(v.imag()));
  return m;
}

std::vector<int> default_grid(const TruncationSpec& trunc) {
  std::vector<int> sizes(trunc.dim());
  for (int i = 0; i < trunc.dim(); ++i) sizes[i] = 4 * (trunc.cutoff(i) + 1);
  return sizes;
}

SpectralField analyze(const GridField& field, const TruncationSpec& trunc) {
  check_grid(trunc, field.sizes);
  if (field.periods != trunc.periods())
    throw std::invalid_argument("analyze: grid periods do not match truncation");
  std::vector<int> shape = field.sizes;
  CVector data = field.samples;
  for (int axis = 0; axis < trunc.dim(); ++axis) {
    const int m = field.sizes[axis];
    const int k = trunc.cutoff(axis);
    const double l = trunc.period(axis);
    const double scale = (l / m) / std::sqrt(l);
    CMatrix a(2 * k + 1, m);
    for (int r = 0; r < 2 * k + 1; ++r)
      for (int j = 0; j < m; ++j) a(r, j) = scale * root_of_unity(-(r - k), j, m);
    data = apply_along_axis(data, shape, axis, a);
  }
  return SpectralField(trunc, std::move(data));
}

GridField synthesize(const SpectralField& spec, const std::vector<int>& sizes) {
  const auto& trunc = spec.trunc;
  check_grid(trunc, sizes);
  std::vector<int> shape(trunc.dim());
  for (int i = 0; i < trunc.dim(); ++i) shape[i] = trunc.modes(i);
  CVector data = spec.coeffs;
  for (int axis = 0; axis < trunc.dim(); ++axis) {
    const int m = sizes[axis];
    const int k = trunc.cutoff(axis);
    const double scale = 1.0 / std::sqrt(trunc.period(axis));
    CMatrix b(m, 2 * k + 1);
    for (int j = 0; j < m; ++j)
      for (int c = 0; c < 2 * k + 1; ++c) b(j, c) = scale * root_of_unity(c - k, j, m);
    data = apply_along_axis(data, shape, axis, b);
  }
  return GridField(sizes, trunc.periods(), std::move(data));
}

Complex evaluate(const SpectralField& spec, std::span<const double> x) {
  const auto& trunc = spec.trunc;
  if (static_cast<int>(x.size()) != trunc.dim())
    throw std::invalid_argument("evaluate: point dimension does not match field");
  // Per-axis phase tables, then a tensor-product sum.
  std::vector<std::vector<Complex>> phase(trunc.dim());
  for (int i = 0; i < trunc.dim(); ++i) {
    const int k = trunc.cutoff(i);
    const double s = 1.0 / std::sqrt(trunc.period(i));
    for (int q = -k; q <= k; ++q) {
      const double a = trunc.omega(i) * q * x[i];
      phase[i].push_back(s * Complex(std::cos(a), std::sin(a)));
    }
  }
  Complex sum{};
  for (std::size_t f = 0; f < trunc.size(); ++f) {
    std::size_t rest = f;
    Complex basis{1.0, 0.0};
    for (int i = trunc.dim(); i-- > 0;) {
      const auto m = static_cast<std::size_t>(trunc.modes(i));
      basis *= phase[i][rest % m];
      rest /= m;
    }
    sum += spec.coeffs[static_cast<Eigen::Index>(f)] * basis;
  }
  return sum;
}

double sobolev_norm(const SpectralField& spec, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be non-negative");
  double sum = 0.0;
  for (std::size_t f = 0; f < spec.trunc.size(); ++f) {
    const double lambda = spec.trunc.laplace_eigenvalue(spec.trunc.multi_index(f));
    sum += std::pow(1.0 + lambda, s) * std::norm(spec.coeffs[static_cast<Eigen::Index>(f)]);
  }
  return std::sqrt(sum);
}

GridField sample(const PointFunction& fn, const std::vector<int>& sizes,
                 const std::vector<double>& periods) {
  GridField g = GridField::zeros(sizes, periods);
  for (std::size_t j = 0; j < g.node_count(); ++j) {
    const auto x = g.node(j);
    g.samples[static_cast<Eigen::Index>(j)] = fn(x);
  }
  return g;
}

SpectralField project_function(const PointFunction& fn, const TruncationSpec& trunc) {
  return analyze(sample(fn, default_grid(trunc), trunc.periods()), trunc);
}

SpectralField retruncate(const SpectralField& spec, const TruncationSpec& target) {
  if (!spec.trunc.same_geometry(target))
    throw std::invalid_argument("retruncate: different torus geometry");
  SpectralField out = SpectralField::zeros(target);
  for (std::size_t f = 0; f < target.size(); ++f)
    out.coeffs[static_cast<Eigen::Index>(f)] = spec[target.multi_index(f)];
  return out;
}

}  // namespace halfspec
