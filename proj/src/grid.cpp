#include "finsler/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace finsler {

GridSpec GridSpec::over_box(const std::vector<Interval>& box, const std::vector<int>& counts,
                            const std::vector<bool>& periodic) {
  if (box.size() != counts.size())
    throw Error(ErrorCode::SchemaError, "grid counts do not match dimension");
  GridSpec g;
  const auto n = static_cast<Eigen::Index>(box.size());
  g.origin.resize(n);
  g.spacing.resize(n);
  g.counts = counts;
  g.periodic = periodic.empty() ? std::vector<bool>(box.size(), false) : periodic;
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (counts[ua] < 2) throw Error(ErrorCode::SchemaError, "grid axis needs at least 2 nodes");
    g.origin[a] = box[ua].lo;
    g.spacing[a] = g.periodic[ua] ? box[ua].width() / counts[ua] : box[ua].width() / (counts[ua] - 1);
  }
  return g;
}

GridSpec GridSpec::over_chart(const Chart& chart, const std::vector<int>& counts) {
  return over_box(chart.box, counts, chart.periodic);
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int c : counts) s *= static_cast<std::size_t>(c);
  return s;
}

std::vector<int> GridSpec::multi_index(std::size_t flat) const {
  std::vector<int> idx(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(counts[a]));
    flat /= static_cast<std::size_t>(counts[a]);
  }
  return idx;
}

std::size_t GridSpec::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0, stride = 1;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    flat += static_cast<std::size_t>(idx[a]) * stride;
    stride *= static_cast<std::size_t>(counts[a]);
  }
  return flat;
}

Vector GridSpec::node(std::size_t flat) const {
  Vector x(dimension());
  for (int a = 0; a < dimension(); ++a) {
    const auto c = static_cast<std::size_t>(counts[static_cast<std::size_t>(a)]);
    x[a] = origin[a] + spacing[a] * static_cast<double>(flat % c);
    flat /= c;
  }
  return x;
}

std::optional<std::size_t> GridSpec::neighbor(std::size_t flat, std::span<const int> offset) const {
  std::size_t out = 0, stride = 1;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const int c = counts[a];
    int i = static_cast<int>(flat % static_cast<std::size_t>(c)) + offset[a];
    flat /= static_cast<std::size_t>(c);
    if (periodic[a]) {
      i %= c;
      if (i < 0) i += c;
    } else if (i < 0 || i >= c) {
      return std::nullopt;
    }
    out += static_cast<std::size_t>(i) * stride;
    stride *= static_cast<std::size_t>(c);
  }
  return out;
}

std::vector<int> GridSpec::cell(const Vector& x) const {
  std::vector<int> idx(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const auto ea = static_cast<Eigen::Index>(a);
    double s = (x[ea] - origin[ea]) / spacing[ea];
    int i = static_cast<int>(std::floor(s));
    if (periodic[a]) {
      i %= counts[a];
      if (i < 0) i += counts[a];
    } else {
      i = std::clamp(i, 0, counts[a] - 2);
    }
    idx[a] = i;
  }
  return idx;
}

std::size_t GridSpec::nearest(const Vector& x) const {
  std::vector<int> idx(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const auto ea = static_cast<Eigen::Index>(a);
    int i = static_cast<int>(std::lround((x[ea] - origin[ea]) / spacing[ea]));
    if (periodic[a]) {
      i %= counts[a];
      if (i < 0) i += counts[a];
    } else {
      i = std::clamp(i, 0, counts[a] - 1);
    }
    idx[a] = i;
  }
  return flat_index(idx);
}

bool GridSpec::on_outer_layer(std::size_t flat) const {
  const auto idx = multi_index(flat);
  for (std::size_t a = 0; a < counts.size(); ++a)
    if (!periodic[a] && (idx[a] == 0 || idx[a] == counts[a] - 1)) return true;
  return false;
}

std::vector<std::vector<int>> stencil_offsets(int dimension, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(dimension), -k);
  for (;;) {
    int g = 0;
    for (int c : e) g = std::gcd(g, std::abs(c));
    if (g == 1) out.push_back(e);
    std::size_t a = 0;
    while (a < e.size() && ++e[a] > k) e[a++] = -k;
    if (a == e.size()) break;
  }
  return out;
}

}  // namespace finsler
