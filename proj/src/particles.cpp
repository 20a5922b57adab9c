#include "halfspec/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace halfspec {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double wrap(double x, double period) {
  double y = x - period * std::floor(x / period);
  if (y >= period) y -= period;
  if (y < 0.0) y = 0.0;
  return y;
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
  const std::uint64_t key = splitmix(seed_ ^ splitmix(stream));
  return splitmix(key + counter * 0xd1b54a32d192ed03ULL);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
  return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t c) const {
  const double u1 = 1.0 - uniform(stream, 2 * c);  // (0, 1]
  const double u2 = uniform(stream, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ParticleEnsemble sample_wrapped_gaussian(const std::vector<double>& mean,
                                         const std::vector<double>& sigma, std::size_t count,
                                         std::uint64_t seed, const std::vector<double>& periods) {
  const std::size_t n = periods.size();
  if (n == 0 || mean.size() != n || sigma.size() != n)
    throw std::invalid_argument("wrapped gaussian: mean, sigma and periods must share a dimension");
  for (double s : sigma)
    if (!(s > 0.0)) throw std::invalid_argument("wrapped gaussian: sigma must be positive");
  if (count == 0) throw std::invalid_argument("wrapped gaussian: count must be positive");

  const CounterRng rng(seed);
  ParticleEnsemble ens{periods, std::vector<double>(count * n), seed};
  for (std::size_t p = 0; p < count; ++p)
    for (std::size_t a = 0; a < n; ++a)
      ens.positions[p * n + a] = wrap(mean[a] + sigma[a] * rng.normal(p, a), periods[a]);
  return ens;
}

FieldEvaluator evaluator_for(const VectorFieldSpec& vf) {
  // Flatten the coefficient maps once; evaluation is the inner loop of advection.
  struct Term {
    int component;
    std::vector<double> wave;  // omega_j p_j
    Complex coeff;
  };
  std::vector<Term> terms;
  for (int i = 0; i < vf.dim(); ++i) {
    for (const auto& [p, c] : vf.component(i)) {
      Term t{i, std::vector<double>(vf.dim()), c};
      for (int j = 0; j < vf.dim(); ++j) t.wave[j] = 2.0 * std::numbers::pi / vf.periods()[j] * p[j];
      terms.push_back(std::move(t));
    }
  }
  return [terms = std::move(terms)](std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& t : terms) {
      double phase = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) phase += t.wave[j] * x[j];
      out[t.component] += t.coeff.real() * std::cos(phase) - t.coeff.imag() * std::sin(phase);
    }
  };
}

ParticleEnsemble advect_particles(const ParticleEnsemble& ens, const FieldEvaluator& field,
                                  double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advect_particles: dt must be positive");
  if (!std::isfinite(t)) throw std::invalid_argument("advect_particles: t must be finite");
  ParticleEnsemble out = ens;
  if (t == 0.0) return out;
  const auto steps = static_cast<long>(std::ceil(std::abs(t) / dt - 1e-12));
  const double h = t / static_cast<double>(steps);
  const std::size_t n = ens.periods.size();
  std::vector<double> x(n), stage(n), k1(n), k2(n), k3(n), k4(n);

  for (std::size_t p = 0; p < ens.count(); ++p) {
    std::copy_n(ens.positions.begin() + static_cast<std::ptrdiff_t>(p * n), n, x.begin());
    for (long s = 0; s < steps; ++s) {
      field(x, k1);
      for (std::size_t a = 0; a < n; ++a) stage[a] = x[a] + 0.5 * h * k1[a];
      field(stage, k2);
      for (std::size_t a = 0; a < n; ++a) stage[a] = x[a] + 0.5 * h * k2[a];
      field(stage, k3);
      for (std::size_t a = 0; a < n; ++a) stage[a] = x[a] + h * k3[a];
      field(stage, k4);
      for (std::size_t a = 0; a < n; ++a) {
        const double v = (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]) / 6.0;
        if (!std::isfinite(v)) throw std::runtime_error("advect_particles: non-finite field value");
        x[a] = wrap(x[a] + h * v, ens.periods[a]);
      }
    }
    std::copy(x.begin(), x.end(), out.positions.begin() + static_cast<std::ptrdiff_t>(p * n));
  }
  return out;
}

GridField histogram_marginal(const ParticleEnsemble& ens, const std::vector<int>& axes, int bins) {
  if (axes.empty()) throw std::invalid_argument("histogram_marginal: no axes selected");
  if (bins < 1) throw std::invalid_argument("histogram_marginal: bins must be >= 1");
  std::vector<int> sizes(axes.size(), bins);
  std::vector<double> periods;
  for (int a : axes) {
    if (a < 0 || a >= ens.dim()) throw std::invalid_argument("histogram_marginal: axis out of range");
    periods.push_back(ens.periods[a]);
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::pow(bins, axes.size())), 0);
  for (std::size_t p = 0; p < ens.count(); ++p) {
    const auto x = ens.position(p);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const double l = periods[i];
      auto j = static_cast<long>(std::floor(x[axes[i]] / l * bins + 0.5));
      j %= bins;
      if (j < 0) j += bins;
      flat = flat * static_cast<std::size_t>(bins) + static_cast<std::size_t>(j);
    }
    ++counts[flat];
  }
  GridField out = GridField::zeros(sizes, periods);
  const double norm = 1.0 / (static_cast<double>(ens.count()) * out.cell_volume());
  for (std::size_t j = 0; j < counts.size(); ++j)
    out.samples[static_cast<Eigen::Index>(j)] = static_cast<double>(counts[j]) * norm;
  return out;
}

}  // namespace halfspec
