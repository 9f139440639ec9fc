#include "orbitcox/curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace orbitcox {

std::size_t CurveTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CurveTable::column(const std::string& name) const {
  const auto idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.values.at(idx));
  return out;
}

std::vector<double> CurveTable::abscissae() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.abscissa);
  return out;
}

void CurveTable::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != columns.size()) {
      throw std::invalid_argument("curve row " + std::to_string(i) + " has the wrong width");
    }
    if (i > 0 && !(rows[i].abscissa > rows[i - 1].abscissa)) {
      throw std::invalid_argument("curve abscissae must be strictly increasing");
    }
  }
}

void require_increasing_grid(std::span<const double> grid, bool allow_empty) {
  if (grid.empty() && !allow_empty) throw std::invalid_argument("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 1) out.back() = hi;
  return out;
}

}  // namespace orbitcox
