#pragma once

#include "finsler/grid.hpp"
#include "finsler/metric_model.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace finsler {

enum class FieldDirection { Forward, Reverse };
std::string_view to_string(FieldDirection d);

/// A point (seeded exactly when it is a node, otherwise through its cell
/// corners), a region (every node inside it) or an explicit node list.
struct FieldSource {
  std::optional<Vector> point;
  std::optional<Region> region;
  std::vector<std::size_t> nodes;

  static FieldSource at(Vector p);
  static FieldSource inside(Region r);
  static FieldSource of_nodes(std::vector<std::size_t> nodes);
  std::string description() const;
};

struct StencilReport {
  int offsets = 0;
  /// Largest angle (radians) between a direction and its nearest offset,
  /// measured in physical coordinates.
  double max_angular_gap = 0.0;
  /// 1 / cos(max_angular_gap): worst-case overestimate of straight-line cost
  /// by a single-offset path.
  double anisotropy_ratio = 1.0;
};

StencilReport stencil_report(const GridSpec& grid, int order);

struct FieldOptions {
  int stencil = 3;
  FieldDirection direction = FieldDirection::Forward;
  /// Nodes outside this region are never entered (distance inside the closure
  /// of a domain).
  std::optional<Region> restrict_to;
};

inline constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

struct DistanceField {
  GridSpec grid;
  FieldDirection direction = FieldDirection::Forward;
  int stencil = 3;
  std::string source;
  std::vector<double> values;            // +inf where unreached
  std::vector<std::size_t> parent;       // kNoParent for sources and unreached nodes
  std::vector<int> parent_offset;        // index into offsets, -1 when none
  std::vector<std::vector<int>> offsets;
  std::vector<std::size_t> source_nodes;
  std::vector<std::size_t> settle_order;
  StencilReport report;

  /// Node positions from `node` back to the source along parents, each step
  /// unwrapped from the previous one.
  std::vector<Vector> trace(std::size_t node) const;
  std::size_t reached() const;
};

/// Dijkstra relaxation over the primitive offsets of max-norm <= stencil.
/// Forward edge cost x -> x+e is (F_x(e) + F_{x+e}(e)) / 2; the reverse field
/// evaluates the same expression at -e, so the reverse field of F equals the
/// forward field of the reversed metric node for node.
DistanceField distance_field(const MetricModel& model, const FieldSource& source, const GridSpec& grid,
                             const FieldOptions& options = {});

/// Field value at an arbitrary chart point: min over nearby nodes y of
/// value(y) + F_y(q - y) (forward) or value(y) + F_y(y - q) (reverse).
double field_value(const MetricModel& model, const DistanceField& field, const Vector& q);

/// Default grid for point-to-point queries: `per_axis` nodes per axis.
GridSpec default_grid(const MetricModel& model, int per_axis = 0);

/// d_F(p, q) from a forward field rooted at p; 0 when p == q.
double field_distance(const MetricModel& model, const Vector& p, const Vector& q,
                      const GridSpec& grid, int stencil = 3);

/// (d_F(p,q) + d_F(q,p)) / 2, both from fields rooted at the lexicographically
/// smaller point so the result is exactly symmetric. Throws Unreachable.
double symmetrized_distance(const MetricModel& model, const Vector& p, const Vector& q,
                            const GridSpec& grid, int stencil = 3);

struct CutLocusOptions {
  int stencil = 3;
  /// Predecessor cost slack in units of one cell's F-length.
  double slack_cells = 0.25;
  /// Flag when near-optimal predecessors span more than this angle.
  double spread_degrees = 100.0;
  /// Flagged nodes re-checked by shooting (evenly spread); 0 disables.
  int validation_budget = 6;
  double equal_length_tolerance = 0.01;
};

struct CutLocusReport {
  std::vector<std::size_t> flagged;
  int checked = 0;
  /// Checked nodes where shoot() found at least two minimizers of equal length.
  int confirmed = 0;
  std::vector<std::size_t> checked_nodes;
};

CutLocusReport cut_locus_probe(const MetricModel& model, const Vector& p, const GridSpec& grid,
                               const CutLocusOptions& options = {});

}  // namespace finsler
