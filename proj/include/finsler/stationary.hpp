#pragma once

#include "finsler/convexity.hpp"
#include "finsler/distance_field.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/metric_model.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace finsler {

/// g_L = -dt^2 + omega (x) dt + dt (x) omega + g0 on R x M, with its Fermat
/// metrics F = sqrt(g0 + omega^2) + omega and F~ = F(-v).
struct StationaryModel {
  Chart chart;  // spatial chart
  MatrixField g0;
  VectorField omega;
  MetricModel fermat;     // F
  MetricModel reverse;    // F~, the reversed F
  MetricModel spacetime;  // cone model of g_L, time coordinate first

  int spatial_dimension() const { return chart.dimension(); }
  /// g_L at spatial point x (time-independent), (n+1) x (n+1).
  Matrix lorentz_metric(const Vector& x) const;
};

/// Throws InvalidCoefficients when g0 is not positive definite or g_L is not
/// Lorentzian at a lattice sample.
StationaryModel build_stationary(const Chart& chart, MatrixField g0, VectorField omega,
                                 DerivativeMode mode = DerivativeMode::Exact);

/// Normal form whose Fermat metric is the Zermelo metric of (g, W):
/// g0 = g / lambda, omega = -g(W, .) / lambda, lambda = 1 - g(W, W).
StationaryModel stationary_from_zermelo(const Chart& chart, MatrixField g, VectorField wind,
                                        DerivativeMode mode = DerivativeMode::Exact);

enum class CausalCharacter { Timelike, Lightlike, Causal, Null, None };
std::string_view to_string(CausalCharacter c);

struct VectorClass {
  CausalCharacter character = CausalCharacter::None;
  /// vt - F(vx) for stationary cones; the raw domain margin for cone models.
  double margin = 0.0;
  double lorentz_norm = 0.0;  // g_L(v, v), stationary cones only
};

/// Future-directed character of a spacetime vector (vt, vx).
VectorClass classify_vector(const StationaryModel& sm, const Vector& x, const Vector& v);
VectorClass classify_vector(const MetricModel& cone, const Vector& point, const Vector& v);

struct SpacetimeSample {
  double s = 0.0;  // curve parameter
  Vector x;        // (t, x)
  Vector v;
  CausalCharacter character = CausalCharacter::None;
};

struct SpacetimeCurve {
  std::vector<SpacetimeSample> samples;
  /// Character of each segment between consecutive samples.
  std::vector<CausalCharacter> segments;
  bool past_directed = false;
  /// max |g_L(dot gamma, dot gamma)| over samples.
  double max_nullity = 0.0;
  /// Largest component of (ddot gamma - geodesic acceleration) orthogonal to
  /// dot gamma; set when the lifted curve was declared an F-geodesic.
  std::optional<double> pregeodesic_residual;
};

/// t -> (+-t, c(t)). `forward` lifts unit-F curves to future lightlike curves,
/// otherwise unit-F~ curves to past lightlike curves. Throws NotUnitSpeed.
SpacetimeCurve lift(const StationaryModel& sm, const std::vector<GeodesicSample>& curve, bool forward = true,
                    bool is_geodesic = false, double unit_tolerance = 1e-6);

/// Nodes of {y : d(p, y) < t0} (forward) or {y : d(y, p) < t0} (past).
struct FutureSlice {
  DistanceField field;
  double t0 = 0.0;
  bool past = false;
  std::vector<char> mask;
  /// Membership of arbitrary chart points through the field.
  Region region;
};

FutureSlice chronological_future_slice(const StationaryModel& sm, const Vector& p, double t0, const GridSpec& grid,
                                       bool past = false, int stencil = 3);

struct HorizonGraph {
  GridSpec grid;
  std::string region;
  std::vector<double> values;  // d_F(M \ A, y), +inf where unreached
  std::vector<char> in_closure;
  std::size_t apex = 0;
  double apex_value = 0.0;
  /// Largest value at nodes of A with an axis neighbour outside A.
  double boundary_max = 0.0;
};

/// Throws EmptyComplement when every grid node lies in A.
HorizonGraph cauchy_horizon(const StationaryModel& sm, const Region& A, const GridSpec& grid, int stencil = 3);

struct LadderFinding {
  std::string name;
  std::string clause;
  bool proxy = true;
  bool computed = true;
  bool passed = true;
  std::optional<Vector> witness;
  std::string detail;
};

struct LadderReport {
  std::vector<LadderFinding> findings;
  ConvexityReport convexity;
};

struct LadderOptions {
  double radius = 1.0;
  std::vector<Vector> centers;  // default: chart center
  int directions = 16;
  int pair_budget = 8;
  std::uint64_t seed = 1;
  int grid_per_axis = 0;
};

/// Budgeted in-chart proxies for convexity, compactness of symmetrized balls
/// and completeness of F and F~, plus the unconditional causal-continuity
/// statement (cited, not computed).
LadderReport causal_ladder_report(const StationaryModel& sm, const LadderOptions& options = {});

struct TemporalReport {
  double min_dtau = 0.0;
  int samples = 0;
  int skipped = 0;  // non-causal inputs
  bool temporal = false;
  std::optional<TangentSample> worst;
};

/// dtau via central differences unless `gradient` is given. Only causal
/// samples count.
TemporalReport verify_temporal(const MetricModel& cone, const ScalarField& tau,
                               const std::vector<TangentSample>& samples,
                               std::optional<VectorField> gradient = std::nullopt);

/// Largest eps with t + eps f temporal on the sampled spatial directions:
/// min over directions with df(u) < 0 of F(u) / -df(u) (+inf if none).
double temporal_epsilon_bound(const StationaryModel& sm, const VectorField& df,
                              const std::vector<TangentSample>& spatial_samples);

/// Future causal vectors at random chart points: timelike, lightlike and (1,0).
std::vector<TangentSample> sample_causal_vectors(const StationaryModel& sm, int count, std::mt19937_64& rng);

}  // namespace finsler
