#include "finsler/fields.hpp"

#include "finsler/expression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace finsler {

ScalarField constant_field(double value) {
  return [value](const Vector&) { return value; };
}

VectorField constant_field(Vector value) {
  return [value = std::move(value)](const Vector&) { return value; };
}

MatrixField constant_field(Matrix value) {
  return [value = std::move(value)](const Vector&) { return value; };
}

ScalarField expression_field(const std::string& text, int n) {
  auto expr = std::make_shared<const Expression>(Expression::parse(text, coordinate_bindings(n)));
  if (expr->is_constant()) {
    const double c = (*expr)(std::span<const double>{});
    return constant_field(c);
  }
  return [expr](const Vector& x) { return (*expr)(std::span<const double>(x.data(), x.size())); };
}

VectorField vector_from_entries(std::vector<ScalarField> entries) {
  return [entries = std::move(entries)](const Vector& x) {
    Vector out(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) out[static_cast<Eigen::Index>(i)] = entries[i](x);
    return out;
  };
}

MatrixField matrix_from_entries(std::vector<std::vector<ScalarField>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  for (const auto& r : rows)
    if (static_cast<Eigen::Index>(r.size()) != n)
      throw Error(ErrorCode::SchemaError, "matrix field must be square");
  return [rows = std::move(rows), n](const Vector& x) {
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](x);
    return out;
  };
}

GridTable::GridTable(std::vector<Interval> ranges, std::vector<int> counts, std::vector<double> values)
    : ranges_(std::move(ranges)), counts_(std::move(counts)), values_(std::move(values)) {
  if (ranges_.empty() || ranges_.size() != counts_.size())
    throw Error(ErrorCode::SchemaError, "table axes and counts disagree");
  std::size_t total = 1;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 2) throw Error(ErrorCode::SchemaError, "table axis needs at least 2 samples");
    if (!(ranges_[i].hi > ranges_[i].lo)) throw Error(ErrorCode::SchemaError, "table axis range empty");
    total *= static_cast<std::size_t>(counts_[i]);
  }
  if (values_.size() != total)
    throw Error(ErrorCode::SchemaError, "table has " + std::to_string(values_.size()) +
                                            " values, expected " + std::to_string(total));
}

GridTable GridTable::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open table " + path);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#')
    throw Error(ErrorCode::SchemaError, path + ": missing '#' header with axis ranges");
  std::vector<double> header;
  {
    std::string body = line.substr(1);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream hs(body);
    double d;
    while (hs >> d) header.push_back(d);
  }
  if (header.empty() || header.size() % 3 != 0)
    throw Error(ErrorCode::SchemaError, path + ": header must list lo,hi,count per axis");
  std::vector<Interval> ranges;
  std::vector<int> counts;
  for (std::size_t i = 0; i < header.size(); i += 3) {
    ranges.push_back({header[i], header[i + 1]});
    counts.push_back(static_cast<int>(header[i + 2]));
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) values.push_back(std::stod(tok));
  }
  return GridTable(std::move(ranges), std::move(counts), std::move(values));
}

void GridTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::SchemaError, "cannot write table " + path);
  char buf[64];
  out << '#';
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g,%.17g,%d", i ? "," : "", ranges_[i].lo, ranges_[i].hi,
                  counts_[i]);
    out << buf;
  }
  out << '\n';
  const auto row = static_cast<std::size_t>(counts_[0]);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", values_[k]);
    out << buf << ((k + 1) % row == 0 ? '\n' : ',');
  }
}

double GridTable::operator()(const Vector& x) const {
  const int n = dimension();
  std::vector<int> base(static_cast<std::size_t>(n));
  std::vector<double> frac(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const double h = ranges_[ua].width() / (counts_[ua] - 1);
    double s = (std::clamp(x[a], ranges_[ua].lo, ranges_[ua].hi) - ranges_[ua].lo) / h;
    int i = std::min(static_cast<int>(std::floor(s)), counts_[ua] - 2);
    base[ua] = i;
    frac[ua] = s - i;
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    std::size_t idx = 0, stride = 1;
    for (int a = 0; a < n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const int bit = (corner >> a) & 1;
      w *= bit ? frac[ua] : 1.0 - frac[ua];
      idx += static_cast<std::size_t>(base[ua] + bit) * stride;
      stride *= static_cast<std::size_t>(counts_[ua]);
    }
    if (w != 0.0) acc += w * values_[idx];
  }
  return acc;
}

ScalarField table_field(GridTable table) {
  auto t = std::make_shared<const GridTable>(std::move(table));
  return [t](const Vector& x) { return (*t)(x); };
}

}  // namespace finsler
