#include "halfspec/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace halfspec {

namespace {

MultiIndex negate(MultiIndex p) {
  for (int& v : p) v = -v;
  return p;
}

}  // namespace

VectorFieldSpec::VectorFieldSpec(std::vector<double> periods)
    : periods_(std::move(periods)), components_(periods_.size()) {
  if (periods_.empty()) throw std::invalid_argument("vector field needs at least one axis");
  for (double l : periods_)
    if (!(l > 0.0)) throw std::invalid_argument("vector field: periods must be positive");
}

void VectorFieldSpec::add_term(int component, const MultiIndex& p, Complex c) {
  if (component < 0 || component >= dim())
    throw std::invalid_argument("vector field: component out of range");
  if (static_cast<int>(p.size()) != dim())
    throw std::invalid_argument("vector field: frequency has wrong dimension");
  auto& slot = components_[component][p];
  slot += c;
  if (slot == Complex{}) components_[component].erase(p);
}

void VectorFieldSpec::add_cos(int component, const MultiIndex& p, double amplitude) {
  if (std::all_of(p.begin(), p.end(), [](int v) { return v == 0; })) {
    add_term(component, p, amplitude);
    return;
  }
  add_term(component, p, 0.5 * amplitude);
  add_term(component, negate(p), 0.5 * amplitude);
}

void VectorFieldSpec::add_sin(int component, const MultiIndex& p, double amplitude) {
  if (std::all_of(p.begin(), p.end(), [](int v) { return v == 0; })) return;
  // a sin(theta) = (a / 2i) e^{i theta} - (a / 2i) e^{-i theta}
  add_term(component, p, Complex(0.0, -0.5 * amplitude));
  add_term(component, negate(p), Complex(0.0, 0.5 * amplitude));
}

double VectorFieldSpec::reality_defect() const {
  double defect = 0.0;
  for (const auto& comp : components_) {
    for (const auto& [p, c] : comp) {
      const auto it = comp.find(negate(p));
      const Complex partner = it == comp.end() ? Complex{} : it->second;
      defect = std::max(defect, std::abs(partner - std::conj(c)));
    }
  }
  return defect;
}

std::size_t VectorFieldSpec::max_terms() const {
  std::size_t w = 0;
  for (const auto& comp : components_) w = std::max(w, comp.size());
  return w;
}

std::vector<MultiIndex> VectorFieldSpec::frequencies() const {
  std::set<MultiIndex> all;
  for (const auto& comp : components_)
    for (const auto& kv : comp) all.insert(kv.first);
  return {all.begin(), all.end()};
}

double VectorFieldSpec::divergence_defect() const {
  double defect = 0.0;
  for (const auto& p : frequencies()) {
    Complex div{};
    for (int i = 0; i < dim(); ++i) {
      const auto it = components_[i].find(p);
      if (it != components_[i].end()) div += 2.0 * std::numbers::pi / periods_[i] * p[i] * it->second;
    }
    defect = std::max(defect, std::abs(div));
  }
  return defect;
}

std::vector<double> VectorFieldSpec::evaluate(std::span<const double> x) const {
  std::vector<double> out(dim(), 0.0);
  for (int i = 0; i < dim(); ++i) {
    Complex sum{};
    for (const auto& [p, c] : components_[i]) {
      double phase = 0.0;
      for (int j = 0; j < dim(); ++j) phase += 2.0 * std::numbers::pi / periods_[j] * p[j] * x[j];
      sum += c * Complex(std::cos(phase), std::sin(phase));
    }
    out[i] = sum.real();
  }
  return out;
}

double VectorFieldSpec::derivative(int component, int axis, std::span<const double> x) const {
  Complex sum{};
  const double w = 2.0 * std::numbers::pi / periods_[axis];
  for (const auto& [p, c] : components_[component]) {
    double phase = 0.0;
    for (int j = 0; j < dim(); ++j) phase += 2.0 * std::numbers::pi / periods_[j] * p[j] * x[j];
    sum += Complex(0.0, w * p[axis]) * c * Complex(std::cos(phase), std::sin(phase));
  }
  return sum.real();
}

VectorFieldSpec s1_benchmark_field() {
  VectorFieldSpec vf({2.0 * std::numbers::pi});
  vf.add_sin(0, {2}, -1.0);
  return vf;
}

VectorFieldSpec abc_field(const AbcParameters& prm) {
  VectorFieldSpec vf({1.0, 1.0, 1.0});
  const MultiIndex ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  if (prm.variant == AbcVariant::Classical) {
    vf.add_sin(0, ez, prm.a);
    vf.add_cos(0, ey, prm.c);
    vf.add_sin(1, ex, prm.b);
    vf.add_cos(1, ez, prm.a);
    vf.add_sin(2, ey, prm.c);
    vf.add_cos(2, ex, prm.b);
  } else {
    vf.add_sin(0, ez, prm.a);
    vf.add_cos(0, ey, prm.c);
    vf.add_sin(1, ez, prm.b);
    vf.add_cos(1, ey, prm.a);
    vf.add_sin(2, ez, prm.a);
    vf.add_cos(2, ey, prm.b);
  }
  vf.add_cos(0, ex, prm.d);
  vf.add_cos(1, ey, prm.d);
  vf.add_cos(2, ez, prm.d);
  return vf;
}

AbcVariant parse_abc_variant(const std::string& name) {
  if (name == "classical") return AbcVariant::Classical;
  if (name == "printed") return AbcVariant::Printed;
  throw std::invalid_argument("unknown ABC variant '" + name + "' (expected classical|printed)");
}

std::string to_string(AbcVariant v) {
  return v == AbcVariant::Classical ? "classical" : "printed";
}

}  // namespace halfspec
