#pragma once

#include "finsler/geodesic.hpp"
#include "finsler/metric_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace finsler {

enum class PairVerdict { Inside, ExitsD, NoConnection };
std::string_view to_string(PairVerdict v);

struct ConvexityPair {
  Vector p, q;
  PairVerdict verdict = PairVerdict::NoConnection;
  /// A point of the minimizer outside D (set exactly when verdict is ExitsD).
  std::optional<Vector> witness;
  double length = 0.0;
};

struct ConvexityReport {
  std::string region;
  std::vector<ConvexityPair> pairs;
  /// Indices of ExitsD pairs.
  std::vector<std::size_t> counterexamples;
  int no_connection = 0;
  bool convex = true;
};

struct ConvexityOptions {
  int pair_budget = 12;
  std::uint64_t seed = 1;
  /// Checked before any sampled pairs.
  std::vector<std::pair<Vector, Vector>> pairs;
  /// Add pairs straddling each deleted point of D.
  bool probe_deleted_points = true;
  /// Nodes per axis of the guiding distance field (0: model default).
  int grid_per_axis = 0;
  ShootOptions shoot;
};

/// Minimizer between pairs of points of D, found by shooting with the
/// direction of a D-restricted distance-field path as a hint; reports whether
/// each minimizer stays in D.
ConvexityReport convexity_check(const MetricModel& model, const Region& D, const ConvexityOptions& options = {});

/// First point of the curve outside D (dense resampling plus closest approach
/// to deleted points), if any.
std::optional<Vector> leaves_region(const MetricModel& model, const Geodesic& g, const Region& D);

}  // namespace finsler
