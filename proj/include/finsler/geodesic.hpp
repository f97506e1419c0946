#pragma once

#include "finsler/fields.hpp"
#include "finsler/metric_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace finsler {

struct GeodesicSample {
  double t = 0.0;
  Vector x;
  Vector v;
};

/// Affinely parametrized solution of the Euler-Lagrange equations of L.
/// Positions are kept in the universal cover of periodic axes (no wrapping),
/// so winding classes stay distinguishable.
struct Geodesic {
  std::vector<GeodesicSample> samples;
  /// F(initial velocity) times the parameter span.
  double length = 0.0;
  bool affine = true;
  bool exited_chart = false;
  /// First integration point found outside the chart when exited_chart.
  std::optional<Vector> exit_point;
  /// max |F(v(t)) - F(v(0))| / F(v(0)); absolute drift of L for lightlike data.
  double speed_drift = 0.0;

  const Vector& start() const { return samples.front().x; }
  const Vector& end() const { return samples.back().x; }
  const Vector& initial_velocity() const { return samples.front().v; }
};

/// Dormand-Prince 5(4) controls.
struct OdeOptions {
  double absolute_tolerance = 1e-9;
  double relative_tolerance = 1e-9;
  double initial_step = 1e-2;
  double min_step = 1e-13;
  int max_steps = 200000;
};

struct CurvePoint {
  double t = 0.0;
  Vector x;
};

/// |H a + D_x(grad_v L)[v] - grad_x L| at each interior sample, with velocity
/// and acceleration from three-point differences of the polyline. First and
/// last entries are 0. Throws OutsideDomain if a velocity is inadmissible.
std::vector<double> euler_lagrange_residual(const MetricModel& model, std::span<const CurvePoint> curve);

/// Acceleration solving the Euler-Lagrange equations of L at (x, v).
Vector geodesic_acceleration(const MetricModel& model, const Vector& x, const Vector& v);

/// Integrates until F-length `length_budget` (parameter length for lightlike
/// data) or until the curve leaves the chart. Throws OutsideDomain or
/// StiffnessFailure.
Geodesic integrate_geodesic(const MetricModel& model, const Vector& p, const Vector& v,
                            double length_budget, const OdeOptions& options = {});

/// Integrates over parameter [0, t_end]; when `output_times` is non-empty the
/// samples are exactly those parameters (ascending).
Geodesic integrate_parameter(const MetricModel& model, const Vector& p, const Vector& v, double t_end,
                             const OdeOptions& options = {},
                             std::span<const double> output_times = {});

struct ShootOptions {
  int restarts = 16;
  /// Extra initial direction, e.g. from a distance-field path.
  std::optional<Vector> hint;
  double endpoint_tolerance = 1e-10;
  int max_newton_iterations = 40;
  double dedupe_degrees = 5.0;
  OdeOptions ode{1e-11, 1e-11, 1e-2, 1e-13, 200000};
  /// Only keep geodesics whose samples stay inside this region (when set).
  std::optional<Region> confine_to;
};

/// Two-point geodesics from p to q by damped Newton shooting over a fan of
/// initial directions; sorted by length, deduplicated by initial direction.
/// Throws NoConnection when every restart fails.
std::vector<Geodesic> shoot(const MetricModel& model, const Vector& p, const Vector& q,
                            const ShootOptions& options = {});

struct ConjugateScan {
  /// F-arclength values where the shooting-fan Jacobian changes sign.
  std::vector<double> conjugate_parameters;
  /// Arclengths where the Jacobian is ill-conditioned without a sign change.
  std::vector<double> ill_conditioned;
  /// (arclength, normalized det) trace.
  std::vector<std::pair<double, double>> determinant;
};

ConjugateScan conjugate_point_scan(const MetricModel& model, const Geodesic& geodesic,
                                   int resolution = 400, const OdeOptions& options = {1e-11, 1e-11});

/// Randers R -> R + df. `df` defaults to central differences of f. Throws
/// PositivityViolated when |beta + df|_h >= 1 at a lattice sample.
MetricModel projective_change(const MetricModel& randers, const ScalarField& f,
                              std::optional<VectorField> df = std::nullopt);

struct PathComparison {
  Vector p, q;
  double hausdorff = 0.0;
  double length_original = 0.0;
  double length_changed = 0.0;
  double potential_difference = 0.0;  // f(q) - f(p)
  double length_error = 0.0;          // |(changed - original) - (f(q) - f(p))|
};

struct ProjectiveReport {
  std::vector<PathComparison> pairs;
  double max_hausdorff = 0.0;
  double max_length_error = 0.0;
  int failures = 0;
};

/// Shoots each pair in both models and compares the minimizing paths (traces
/// resampled at 201 parameters, Hausdorff distance between their Hermite
/// interpolants).
ProjectiveReport compare_projective(const MetricModel& original, const MetricModel& changed,
                                    const ScalarField& f,
                                    const std::vector<std::pair<Vector, Vector>>& pairs,
                                    const ShootOptions& options = {});

/// Symmetric Hausdorff distance between two polylines.
double polyline_hausdorff(const std::vector<Vector>& a, const std::vector<Vector>& b);
/// Same between the cubic Hermite interpolants of two sampled geodesics.
double curve_hausdorff(const Geodesic& a, const Geodesic& b);

}  // namespace finsler
