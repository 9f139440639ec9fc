#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace orbitcox {

struct CurveRow {
  double abscissa = 0.0;
  std::vector<double> values;  // one per CurveTable::columns entry
  bool ok = true;
  std::string error;
};

/// Tabulated curve: strictly increasing abscissae, named value columns and
/// free-form provenance metadata.
struct CurveTable {
  std::string abscissa_name = "x";
  std::vector<std::string> columns{"value"};
  std::vector<CurveRow> rows;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  std::vector<double> abscissae() const;

  /// Throws std::invalid_argument if abscissae are not strictly increasing
  /// or a row has the wrong number of values.
  void validate() const;
};

/// Throws std::invalid_argument("empty grid") / ("grid must be strictly
/// increasing").
void require_increasing_grid(std::span<const double> grid, bool allow_empty = true);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace orbitcox
