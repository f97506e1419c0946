#pragma once

#include "finsler/grid.hpp"
#include "finsler/metric_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace finsler {

/// Spacetime lattice: `levels` time levels t0 + l dt over a spatial grid.
/// Edges join consecutive levels; the chord (dt, e h) with spatial offset
/// |e|_inf <= K is admitted when it is causal for the cone at its midpoint.
class CausalGrid {
 public:
  enum class EdgeKind : std::uint8_t { None = 0, Lightlike = 1, Timelike = 2 };

  /// `cone` must have the time coordinate first, future oriented by d/dt.
  /// When dt is omitted it is K h_min / v_max with v_max the largest
  /// coordinate speed of light over the spatial nodes.
  static CausalGrid build(const MetricModel& cone, const GridSpec& spatial, int levels,
                          std::optional<double> dt = std::nullopt, int K = 3, double t0 = 0.0);

  int levels() const { return levels_; }
  double dt() const { return dt_; }
  double t0() const { return t0_; }
  int stencil() const { return K_; }
  const GridSpec& spatial() const { return spatial_; }
  std::size_t spatial_size() const { return spatial_.size(); }
  std::size_t size() const { return static_cast<std::size_t>(levels_) * spatial_.size(); }
  const std::vector<std::vector<int>>& offsets() const { return offsets_; }

  std::size_t node(int level, std::size_t spatial) const { return static_cast<std::size_t>(level) * spatial_.size() + spatial; }
  int level_of(std::size_t node) const { return static_cast<int>(node / spatial_.size()); }
  std::size_t spatial_of(std::size_t node) const { return node % spatial_.size(); }
  /// (t, x) of a node.
  Vector position(std::size_t node) const;

  /// Kind and F-length weight of the edge leaving `node` along offset k.
  EdgeKind kind(std::size_t node, std::size_t k) const { return kinds_[node * offsets_.size() + k]; }
  double weight(std::size_t node, std::size_t k) const { return weights_[node * offsets_.size() + k]; }
  /// Target of the edge, nullopt off the grid or past the last level.
  std::optional<std::size_t> target(std::size_t node, std::size_t k) const;

  std::size_t edge_count() const;

 private:
  GridSpec spatial_;
  int levels_ = 0;
  double dt_ = 0.0;
  double t0_ = 0.0;
  int K_ = 3;
  std::vector<std::vector<int>> offsets_;
  std::vector<EdgeKind> kinds_;
  std::vector<double> weights_;
};

/// Largest coordinate speed |dx|/dt of causal vectors over the spatial nodes,
/// by bisection on (1, s u) for a fan of directions u.
double max_light_speed(const MetricModel& cone, const GridSpec& spatial, double t = 0.0);

struct Reachability {
  std::vector<char> chronological;  // I+ : chains with at least one timelike edge
  std::vector<char> causal;         // J+ : chains of causal edges (p itself included)
};

Reachability causal_reachability(const CausalGrid& grid, std::size_t p);

/// Exhaustive relation checks on the whole grid: J+ for every node by dynamic
/// programming over levels, J- independently, transpose consistency, edge
/// closure J+(v) subset J+(u) for each edge u -> v (which, with reflexivity and
/// path soundness, gives transitivity for every triple), I+ subset J+ and
/// irreflexivity of I+.
struct RelationCheck {
  std::size_t nodes = 0;
  std::size_t related_pairs = 0;  // |J+| summed over nodes
  std::size_t transpose_mismatches = 0;
  std::size_t closure_failures = 0;
  std::size_t chronological_not_causal = 0;
  std::size_t reflexive_chronology = 0;
  std::size_t missing_reflexivity = 0;
  bool transitive() const { return transpose_mismatches == 0 && closure_failures == 0 && missing_reflexivity == 0; }
};

RelationCheck check_relations(const CausalGrid& grid);

/// Longest path from p to q (timelike chords weigh their F-length, lightlike
/// ones 0); 0 when q is not in J+(p).
double finsler_separation(const CausalGrid& grid, std::size_t p, std::size_t q);

}  // namespace finsler
