#include "halfspec/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace halfspec {

namespace {

constexpr double kRealityTolerance = 1e-12;

void check_compatible(const VectorFieldSpec& vf, const TruncationSpec& trunc) {
  if (vf.dim() != trunc.dim())
    throw std::invalid_argument("vector field dimension does not match truncation");
  if (vf.periods() != trunc.periods())
    throw std::invalid_argument("vector field periods do not match truncation");
  if (vf.reality_defect() > kRealityTolerance)
    throw std::invalid_argument("vector field is not real (c_{-p} != conj(c_p))");
}

// Entry of band p at source m for component coefficients c^i_p.
using EntryRule = std::function<Complex(const MultiIndex& m, const MultiIndex& p,
                                        const std::vector<Complex>& coeffs)>;

SparseBandedOperator assemble(const VectorFieldSpec& vf, const TruncationSpec& trunc,
                              GeneratorKind kind, const EntryRule& rule) {
  check_compatible(vf, trunc);
  SparseBandedOperator op(trunc, kind);
  const int n = trunc.dim();
  for (const auto& p : vf.frequencies()) {
    std::vector<Complex> coeffs(n);
    for (int i = 0; i < n; ++i) {
      const auto it = vf.component(i).find(p);
      if (it != vf.component(i).end()) coeffs[i] = it->second;
    }
    auto& band = op.band(p);
    for (std::size_t s = 0; s < trunc.size(); ++s) {
      if (band.targets[s] < 0) continue;
      band.entries[s] = rule(trunc.multi_index(s), p, coeffs);
    }
  }
  return op;
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::HalfDensity: return "half_density";
    case GeneratorKind::Density: return "density";
    case GeneratorKind::Transport: return "transport";
  }
  return "unknown";
}

SparseBandedOperator::SparseBandedOperator(TruncationSpec trunc, GeneratorKind kind)
    : trunc_(std::move(trunc)), kind_(kind) {}

SparseBandedOperator::Band& SparseBandedOperator::band(const MultiIndex& offset) {
  if (static_cast<int>(offset.size()) != trunc_.dim())
    throw std::invalid_argument("band offset has wrong dimension");
  auto it = std::lower_bound(bands_.begin(), bands_.end(), offset,
                             [](const Band& b, const MultiIndex& o) { return b.offset < o; });
  if (it != bands_.end() && it->offset == offset) return *it;
  Band b;
  b.offset = offset;
  b.entries.assign(trunc_.size(), Complex{});
  b.targets.resize(trunc_.size());
  MultiIndex target(offset.size());
  for (std::size_t s = 0; s < trunc_.size(); ++s) {
    const MultiIndex m = trunc_.multi_index(s);
    for (std::size_t i = 0; i < m.size(); ++i) target[i] = m[i] + offset[i];
    b.targets[s] = trunc_.flat_index(target);
  }
  return *bands_.insert(it, std::move(b));
}

const SparseBandedOperator::Band* SparseBandedOperator::find_band(const MultiIndex& offset) const {
  auto it = std::lower_bound(bands_.begin(), bands_.end(), offset,
                             [](const Band& b, const MultiIndex& o) { return b.offset < o; });
  return (it != bands_.end() && it->offset == offset) ? &*it : nullptr;
}

Complex SparseBandedOperator::entry(std::size_t row, std::size_t col) const {
  const MultiIndex r = trunc_.multi_index(row);
  const MultiIndex c = trunc_.multi_index(col);
  MultiIndex offset(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) offset[i] = r[i] - c[i];
  const Band* b = find_band(offset);
  return b ? b->entries[col] : Complex{};
}

std::size_t SparseBandedOperator::stored_entries() const {
  std::size_t n = 0;
  for (const auto& b : bands_)
    n += static_cast<std::size_t>(std::count_if(b.targets.begin(), b.targets.end(),
                                                [](std::int64_t t) { return t >= 0; }));
  return n;
}

CVector SparseBandedOperator::apply(const CVector& x) const {
  if (static_cast<std::size_t>(x.size()) != size())
    throw std::invalid_argument("operator apply: vector size mismatch");
  CVector y = CVector::Zero(x.size());
  for (const auto& b : bands_) {
    for (std::size_t s = 0; s < size(); ++s) {
      const auto t = b.targets[s];
      if (t >= 0) y[t] += b.entries[s] * x[static_cast<Eigen::Index>(s)];
    }
  }
  return y;
}

CVector SparseBandedOperator::apply_generator(const CVector& x) const {
  CVector y = apply(x);
  if (kind_ == GeneratorKind::HalfDensity) y = -y;
  return y;
}

CMatrix SparseBandedOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  CMatrix a = CMatrix::Zero(n, n);
  for (const auto& b : bands_)
    for (std::size_t s = 0; s < size(); ++s)
      if (b.targets[s] >= 0) a(b.targets[s], static_cast<Eigen::Index>(s)) += b.entries[s];
  return a;
}

SparseCMatrix SparseBandedOperator::to_sparse() const {
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(stored_entries());
  for (const auto& b : bands_)
    for (std::size_t s = 0; s < size(); ++s)
      if (b.targets[s] >= 0)
        triplets.emplace_back(static_cast<int>(b.targets[s]), static_cast<int>(s), b.entries[s]);
  const auto n = static_cast<Eigen::Index>(size());
  SparseCMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

double SparseBandedOperator::inf_norm() const {
  std::vector<double> row(size(), 0.0);
  for (const auto& b : bands_)
    for (std::size_t s = 0; s < size(); ++s)
      if (b.targets[s] >= 0) row[static_cast<std::size_t>(b.targets[s])] += std::abs(b.entries[s]);
  return row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
}

nlohmann::json SparseBandedOperator::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  j["cutoffs"] = trunc_.cutoffs();
  j["periods"] = trunc_.periods();
  j["bands"] = nlohmann::json::array();
  for (const auto& b : bands_) {
    std::vector<double> re, im;
    for (const auto& e : b.entries) {
      re.push_back(e.real());
      im.push_back(e.imag());
    }
    j["bands"].push_back({{"offset", b.offset}, {"re", re}, {"im", im}});
  }
  return j;
}

SparseBandedOperator SparseBandedOperator::from_json(const nlohmann::json& j) {
  const auto kind_name = j.at("kind").get<std::string>();
  GeneratorKind kind;
  if (kind_name == "half_density") kind = GeneratorKind::HalfDensity;
  else if (kind_name == "density") kind = GeneratorKind::Density;
  else if (kind_name == "transport") kind = GeneratorKind::Transport;
  else throw std::invalid_argument("unknown operator kind '" + kind_name + "'");
  SparseBandedOperator op(TruncationSpec(j.at("cutoffs").get<std::vector<int>>(),
                                         j.at("periods").get<std::vector<double>>()),
                          kind);
  for (const auto& jb : j.at("bands")) {
    auto& b = op.band(jb.at("offset").get<MultiIndex>());
    const auto re = jb.at("re").get<std::vector<double>>();
    const auto im = jb.at("im").get<std::vector<double>>();
    if (re.size() != op.size() || im.size() != op.size())
      throw std::invalid_argument("band diagonal has wrong length");
    for (std::size_t s = 0; s < op.size(); ++s)
      if (b.targets[s] >= 0) b.entries[s] = {re[s], im[s]};
  }
  return op;
}

void SparseBandedOperator::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << "% kind=" << to_string(kind_) << "\n";
  os << size() << ' ' << size() << ' ' << stored_entries() << '\n';
  char buf[96];
  for (const auto& b : bands_) {
    for (std::size_t s = 0; s < size(); ++s) {
      if (b.targets[s] < 0) continue;
      std::snprintf(buf, sizeof buf, "%lld %zu %.17g %.17g\n",
                    static_cast<long long>(b.targets[s] + 1), s + 1, b.entries[s].real(),
                    b.entries[s].imag());
      os << buf;
    }
  }
}

SparseBandedOperator assemble_half_density_generator(const VectorFieldSpec& vf,
                                                     const TruncationSpec& trunc) {
  return assemble(vf, trunc, GeneratorKind::HalfDensity,
                  [&trunc](const MultiIndex& m, const MultiIndex& p, const std::vector<Complex>& c) {
                    Complex e{};
                    for (int i = 0; i < trunc.dim(); ++i)
                      e += Complex(0.0, trunc.omega(i)) * c[i] * (m[i] + 0.5 * p[i]);
                    return e;
                  });
}

SparseBandedOperator assemble_density_generator(const VectorFieldSpec& vf,
                                                const TruncationSpec& trunc) {
  return assemble(vf, trunc, GeneratorKind::Density,
                  [&trunc](const MultiIndex& m, const MultiIndex& p, const std::vector<Complex>& c) {
                    Complex e{};
                    for (int i = 0; i < trunc.dim(); ++i)
                      e -= Complex(0.0, trunc.omega(i)) * c[i] * static_cast<double>(m[i] + p[i]);
                    return e;
                  });
}

SparseBandedOperator assemble_transport_generator(const VectorFieldSpec& vf,
                                                  const TruncationSpec& trunc) {
  return assemble(vf, trunc, GeneratorKind::Transport,
                  [&trunc](const MultiIndex& m, const MultiIndex&, const std::vector<Complex>& c) {
                    Complex e{};
                    for (int i = 0; i < trunc.dim(); ++i)
                      e -= Complex(0.0, trunc.omega(i)) * c[i] * static_cast<double>(m[i]);
                    return e;
                  });
}

double antihermitian_defect(const SparseBandedOperator& op) {
  double defect = 0.0;
  for (const auto& b : op.bands()) {
    MultiIndex mirror = b.offset;
    for (int& v : mirror) v = -v;
    const auto* partner = op.find_band(mirror);
    for (std::size_t s = 0; s < op.size(); ++s) {
      const auto t = b.targets[s];
      if (t < 0) continue;
      // A(t, s) pairs with A(s, t), which band -offset stores at source t.
      const Complex transposed = partner ? partner->entries[static_cast<std::size_t>(t)] : Complex{};
      defect = std::max(defect, std::abs(b.entries[s] + std::conj(transposed)));
    }
  }
  return defect;
}

double ObservableMatrix::hermitian_defect() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

ObservableMatrix assemble_multiplication_operator(const SpectralField& f,
                                                  const TruncationSpec& trunc) {
  if (f.trunc.dim() != trunc.dim())
    throw std::invalid_argument("multiplication operator: dimension mismatch");
  if (!f.trunc.same_geometry(trunc))
    throw std::invalid_argument("multiplication operator: period mismatch");
  const auto n = static_cast<Eigen::Index>(trunc.size());
  const double scale = 1.0 / trunc.sqrt_volume();
  CMatrix h(n, n);
  MultiIndex diff(trunc.dim());
  for (Eigen::Index c = 0; c < n; ++c) {
    const MultiIndex mc = trunc.multi_index(static_cast<std::size_t>(c));
    for (Eigen::Index r = 0; r < n; ++r) {
      const MultiIndex mr = trunc.multi_index(static_cast<std::size_t>(r));
      for (int i = 0; i < trunc.dim(); ++i) diff[i] = mr[i] - mc[i];
      h(r, c) = scale * f[diff];
    }
  }
  return {trunc, std::move(h)};
}

}  // namespace halfspec
