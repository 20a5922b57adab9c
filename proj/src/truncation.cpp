#include "halfspec/truncation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace halfspec {

TruncationSpec::TruncationSpec(std::vector<int> cutoffs, std::vector<double> periods)
    : cutoffs_(std::move(cutoffs)), periods_(std::move(periods)) {
  if (cutoffs_.empty()) throw std::invalid_argument("truncation needs at least one axis");
  if (cutoffs_.size() != periods_.size())
    throw std::invalid_argument("truncation: cutoffs and periods differ in length");
  size_ = 1;
  for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
    if (cutoffs_[i] < 0) throw std::invalid_argument("truncation: negative cutoff");
    if (!(periods_[i] > 0.0) || !std::isfinite(periods_[i]))
      throw std::invalid_argument("truncation: periods must be positive");
    size_ *= static_cast<std::size_t>(2 * cutoffs_[i] + 1);
  }
}

TruncationSpec TruncationSpec::uniform(int dim, int cutoff, double period) {
  if (dim < 1) throw std::invalid_argument("truncation: dim must be >= 1");
  return TruncationSpec(std::vector<int>(dim, cutoff), std::vector<double>(dim, period));
}

bool TruncationSpec::contains(const MultiIndex& k) const {
  if (k.size() != cutoffs_.size()) return false;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (std::abs(k[i]) > cutoffs_[i]) return false;
  return true;
}

std::int64_t TruncationSpec::flat_index(const MultiIndex& k) const {
  if (!contains(k)) return -1;
  std::int64_t flat = 0;
  for (std::size_t i = 0; i < k.size(); ++i)
    flat = flat * (2 * cutoffs_[i] + 1) + (k[i] + cutoffs_[i]);
  return flat;
}

MultiIndex TruncationSpec::multi_index(std::size_t flat) const {
  MultiIndex k(cutoffs_.size());
  for (std::size_t i = cutoffs_.size(); i-- > 0;) {
    const auto m = static_cast<std::size_t>(2 * cutoffs_[i] + 1);
    k[i] = static_cast<int>(flat % m) - cutoffs_[i];
    flat /= m;
  }
  return k;
}

double TruncationSpec::omega(int axis) const {
  return 2.0 * std::numbers::pi / periods_[axis];
}

double TruncationSpec::laplace_eigenvalue(const MultiIndex& k) const {
  double lambda = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double w = omega(i) * k[i];
    lambda += w * w;
  }
  return lambda;
}

double TruncationSpec::sqrt_volume() const { return std::sqrt(volume()); }

double TruncationSpec::volume() const {
  double v = 1.0;
  for (double l : periods_) v *= l;
  return v;
}

bool TruncationSpec::same_geometry(const TruncationSpec& other) const {
  return periods_ == other.periods_;
}

std::vector<MultiIndex> index_set(const TruncationSpec& trunc) {
  std::vector<MultiIndex> out;
  out.reserve(trunc.size());
  for (std::size_t f = 0; f < trunc.size(); ++f) out.push_back(trunc.multi_index(f));
  return out;
}

}  // namespace halfspec
