#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halfspec/particles.hpp"
#include "halfspec/solvers.hpp"

namespace halfspec {

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

/// Coefficients in canonical index order (lexicographic, last axis fastest,
/// each k_i from -K_i to K_i); "indices" repeats the order explicitly.
nlohmann::json to_json(const SpectralField& field);
SpectralField spectral_field_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GridField& field);
GridField grid_field_from_json(const nlohmann::json& j);

/// Columns k1..kn,re,im; one row per index in canonical order.
void write_csv(std::ostream& os, const SpectralField& field);
/// Columns x1..xn,re,im; one row per node in canonical order.
void write_csv(std::ostream& os, const GridField& field);
/// Columns x1..xn; one row per particle.
void write_csv(std::ostream& os, const ParticleEnsemble& ens);

/// Reads the grid CSV layout written above. Grid sizes are recovered from
/// the distinct coordinates along each axis; `periods` fixes the torus.
/// A missing "im" column means real samples.
GridField read_grid_csv(std::istream& is, const std::vector<double>& periods);

/// Density result as JSON: coefficients of psi plus metadata.
nlohmann::json to_json(const DensityResult& result, const nlohmann::json& metadata);

/// Named numeric columns, one row per record.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  void write_csv(std::ostream& os) const;
  /// {"column": [values...], ...} in column order.
  nlohmann::json to_json() const;
};

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(const std::string& name);

/// Writes `table` as <stem>.csv or <stem>.json under `dir`; returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem,
                                  const Table& table, OutputFormat format);

/// Writes pretty JSON with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace halfspec
