#pragma once

#include "finsler/region.hpp"
#include "finsler/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace finsler {

/// Regular lattice over a chart region. Node index: axis 0 fastest.
struct GridSpec {
  Vector origin;
  Vector spacing;
  std::vector<int> counts;
  /// Periodic axes wrap: node counts[a] coincides with node 0.
  std::vector<bool> periodic;

  /// Nodes at both ends of every interval (periodic axes: period / count).
  static GridSpec over_box(const std::vector<Interval>& box, const std::vector<int>& counts,
                           const std::vector<bool>& periodic = {});
  static GridSpec over_chart(const Chart& chart, const std::vector<int>& counts);

  int dimension() const { return static_cast<int>(counts.size()); }
  std::size_t size() const;
  std::vector<int> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const int> idx) const;
  Vector node(std::size_t flat) const;
  /// Neighbour at integer offset; nullopt when it leaves a non-periodic axis.
  std::optional<std::size_t> neighbor(std::size_t flat, std::span<const int> offset) const;
  /// Nearest node (clamped to the grid).
  std::size_t nearest(const Vector& x) const;
  /// Lower corner of the cell containing x (clamped).
  std::vector<int> cell(const Vector& x) const;
  double min_spacing() const { return spacing.minCoeff(); }
  /// True when the node lies on the outer layer of a non-periodic axis.
  bool on_outer_layer(std::size_t flat) const;
};

/// All integer offsets with max-norm <= k and gcd 1 (non-primitive offsets are
/// multiples of shorter ones and add nothing to the path metric).
std::vector<std::vector<int>> stencil_offsets(int dimension, int k);

}  // namespace finsler
