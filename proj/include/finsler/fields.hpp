#pragma once

#include "finsler/region.hpp"
#include "finsler/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace finsler {

// Coefficient fields over a chart. Covectors and vectors share a
// representation; the family decides how components are contracted.
using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

ScalarField constant_field(double value);
VectorField constant_field(Vector value);
MatrixField constant_field(Matrix value);

/// Expression in x0..x{n-1} (aliases x, y, z).
ScalarField expression_field(const std::string& text, int n);

VectorField vector_from_entries(std::vector<ScalarField> entries);
/// Entries given row by row; the result is symmetrized only if the input is.
MatrixField matrix_from_entries(std::vector<std::vector<ScalarField>> rows);

/// Scalar samples on a regular grid with multilinear interpolation. Queries
/// outside the covered box are clamped to the boundary.
class GridTable {
 public:
  GridTable(std::vector<Interval> ranges, std::vector<int> counts, std::vector<double> values);

  /// Sidecar format: first line "# lo0,hi0,n0,lo1,hi1,n1,...", then one row of
  /// n0 values per combination of the remaining axes (axis 0 fastest).
  static GridTable read_csv(const std::string& path);
  void write_csv(const std::string& path) const;

  double operator()(const Vector& x) const;

  int dimension() const { return static_cast<int>(ranges_.size()); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<Interval> ranges_;
  std::vector<int> counts_;
  std::vector<double> values_;
};

ScalarField table_field(GridTable table);

}  // namespace finsler
