#include "halfspec/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace halfspec {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const SpectralField& field) {
  nlohmann::json j;
  j["cutoffs"] = field.trunc.cutoffs();
  j["periods"] = field.trunc.periods();
  j["index_order"] = "lexicographic, last axis fastest, k_i from -K_i to K_i";
  j["indices"] = index_set(field.trunc);
  std::vector<double> re, im;
  for (const auto& c : field.coeffs) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

SpectralField spectral_field_from_json(const nlohmann::json& j) {
  TruncationSpec trunc(j.at("cutoffs").get<std::vector<int>>(),
                       j.at("periods").get<std::vector<double>>());
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != trunc.size() || im.size() != trunc.size())
    throw std::invalid_argument("spectral field JSON: coefficient count mismatch");
  CVector c(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) c[static_cast<Eigen::Index>(i)] = {re[i], im[i]};
  return SpectralField(std::move(trunc), std::move(c));
}

nlohmann::json to_json(const GridField& field) {
  nlohmann::json j;
  j["sizes"] = field.sizes;
  j["periods"] = field.periods;
  j["node_order"] = "lexicographic, last axis fastest, x_i = j_i L_i / M_i";
  std::vector<double> re, im;
  for (const auto& c : field.samples) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

GridField grid_field_from_json(const nlohmann::json& j) {
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>()
                                   : std::vector<double>(re.size(), 0.0);
  if (im.size() != re.size()) throw std::invalid_argument("grid field JSON: re/im length mismatch");
  CVector s(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) s[static_cast<Eigen::Index>(i)] = {re[i], im[i]};
  return GridField(j.at("sizes").get<std::vector<int>>(), j.at("periods").get<std::vector<double>>(),
                   std::move(s));
}

void write_csv(std::ostream& os, const SpectralField& field) {
  for (int i = 0; i < field.trunc.dim(); ++i) os << 'k' << i + 1 << ',';
  os << "re,im\n";
  for (std::size_t f = 0; f < field.trunc.size(); ++f) {
    for (int k : field.trunc.multi_index(f)) os << k << ',';
    const auto c = field.coeffs[static_cast<Eigen::Index>(f)];
    os << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
  }
}

void write_csv(std::ostream& os, const GridField& field) {
  for (int i = 0; i < field.dim(); ++i) os << 'x' << i + 1 << ',';
  os << "re,im\n";
  for (std::size_t j = 0; j < field.node_count(); ++j) {
    for (double x : field.node(j)) os << format_double(x) << ',';
    const auto v = field.samples[static_cast<Eigen::Index>(j)];
    os << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
}

void write_csv(std::ostream& os, const ParticleEnsemble& ens) {
  for (int i = 0; i < ens.dim(); ++i) os << (i ? "," : "") << 'x' << i + 1;
  os << '\n';
  for (std::size_t p = 0; p < ens.count(); ++p) {
    const auto x = ens.position(p);
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << format_double(x[i]);
    os << '\n';
  }
}

GridField read_grid_csv(std::istream& is, const std::vector<double>& periods) {
  const std::size_t n = periods.size();
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("grid CSV: empty input");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const bool has_im = header.size() == n + 2;
  if (header.size() != n + 1 && !has_im)
    throw std::invalid_argument("grid CSV: expected columns x1..x" + std::to_string(n) + ",re[,im]");

  std::vector<std::vector<double>> coords;
  std::vector<Complex> values;
  std::vector<std::set<double>> distinct(n);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != header.size()) throw std::invalid_argument("grid CSV: ragged row");
    coords.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t i = 0; i < n; ++i) distinct[i].insert(row[i]);
    values.emplace_back(row[n], has_im ? row[n + 1] : 0.0);
  }
  std::vector<int> sizes(n);
  for (std::size_t i = 0; i < n; ++i) sizes[i] = static_cast<int>(distinct[i].size());
  CVector samples(static_cast<Eigen::Index>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) samples[static_cast<Eigen::Index>(j)] = values[j];
  GridField g(sizes, periods, std::move(samples));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    const auto expect = g.node(j);
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(expect[i] - coords[j][i]) > 1e-9 * periods[i])
        throw std::invalid_argument("grid CSV: rows are not a uniform grid in canonical order");
  }
  return g;
}

nlohmann::json to_json(const DensityResult& result, const nlohmann::json& metadata) {
  nlohmann::json j = metadata;
  j["psi"] = to_json(result.psi);
  j["mass_spectral"] = result.mass_spectral;
  return j;
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table row width mismatch");
  rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

nlohmann::json Table::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  nlohmann::json order = nlohmann::json::array();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows) col.push_back(r[c]);
    j[columns[c]] = col;
    order.push_back(columns[c]);
  }
  j["columns"] = order;
  return j;
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + name + "' (expected csv|json)");
}

std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem,
                                  const Table& table, OutputFormat format) {
  const auto path = dir / (stem + (format == OutputFormat::Csv ? ".csv" : ".json"));
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  if (format == OutputFormat::Csv) table.write_csv(os);
  else os << table.to_json().dump(1) << '\n';
  return path;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace halfspec
