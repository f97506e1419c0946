#pragma once

#include "finsler/metric_model.hpp"

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace finsler {

/// Relative width of the band in which a domain margin counts as zero.
inline constexpr double kBoundaryBand = 1e-9;
/// Eigenvalues below this fraction of the largest |eigenvalue| count as zero.
inline constexpr double kZeroEigenvalueTolerance = 1e-9;
/// A signature is near-degenerate when raising the zero tolerance by this
/// factor would change it.
inline constexpr double kSignatureStabilityFactor = 1e3;

struct Evaluation {
  double L = 0.0;
  double F = 0.0;
};

/// L and F = sqrt(L) at an admissible sample. Spacetime families return L = 0
/// on the cone boundary. Throws ZeroVector or OutsideDomain.
Evaluation evaluate(const MetricModel& model, const TangentSample& s);

enum class DomainClass { Interior, Boundary, Outside };
std::string_view to_string(DomainClass c);

struct DomainVerdict {
  DomainClass classification = DomainClass::Interior;
  /// Smallest domain-defining expression (raw, unnormalized); +inf when the
  /// family has no domain restriction.
  double margin = 0.0;
  /// Kostelecky only: zero locus of m sqrt(-g0(v,v)) + g0(v,a).
  bool degenerate = false;
  std::optional<double> degeneracy_margin;
};

DomainVerdict classify_domain(const MetricModel& model, const TangentSample& s);

struct HomogeneityReport {
  double max_residual = 0.0;
  double tolerance = 1e-10;
  bool flagged = false;
};

/// max over scales of |L(lambda v) - lambda^2 L(v)| / (lambda^2 |L(v)|).
HomogeneityReport check_homogeneity(const MetricModel& model, const TangentSample& s,
                                    std::span<const double> scales, double tolerance = 1e-10);

struct Signature {
  int plus = 0;
  int minus = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature_of(const Eigen::VectorXd& eigenvalues, double relative_tolerance);

struct FundamentalTensor {
  TangentSample base;
  Matrix matrix;
  Vector eigenvalues;
  Signature signature;
  double zero_tolerance = kZeroEigenvalueTolerance;
  bool near_degenerate = false;
  /// |g_v(v,v) - L(v)| / |L(v)|
  double hessian_identity_residual = 0.0;
  DomainVerdict verdict;
};

struct TensorOptions {
  /// Evaluate the family formula even where the sample is outside the domain.
  bool allow_outside = false;
  std::optional<DerivativeMode> mode;
};

/// Hessian of L/2 in the vector slot.
FundamentalTensor fundamental_tensor(const MetricModel& model, const TangentSample& s,
                                     const TensorOptions& options = {});

struct SpacetimePointReport {
  Vector point;
  int interior_samples = 0;
  int boundary_samples = 0;
  // (i) midpoints of interior pairs stay in the closed cone; -v is excluded.
  int convexity_pairs = 0;
  int convexity_failures = 0;
  int half_plane_failures = 0;
  // (ii)-(iii) L -> 0 as directions approach the boundary.
  double boundary_limit = 0.0;
  bool boundary_vanishing = true;
  // (iv) signature (1, n-1, 0) of g_v.
  int interior_signature_failures = 0;
  int boundary_signature_failures = 0;
  bool boundary_extension_smooth = true;
  std::vector<std::string> findings;

  bool passes() const;
};

struct SpacetimeConditionReport {
  /// Model actually checked (fermat models are checked through their
  /// stationary spacetime on R x M).
  std::string checked_family;
  std::vector<SpacetimePointReport> points;
  bool passes() const;
};

SpacetimeConditionReport verify_spacetime_conditions(const MetricModel& model,
                                                     const std::vector<TangentSample>& samples);

/// g_L = -dt^2 + omega (x) dt + dt (x) omega + g0 on R x M as a Lorentzian
/// cone model, time coordinate first, future oriented by d/dt.
MetricModel stationary_spacetime(const Chart& spatial_chart, const MatrixField& g0,
                                 const VectorField& omega, double time_extent = 1e6);
/// The spacetime whose Fermat metric is `fermat` (orientation ignored).
MetricModel stationary_spacetime(const MetricModel& fermat);

/// Random admissible directions at `point`: up to `count` interior samples and
/// as many boundary samples found by bisection towards -v.
std::vector<TangentSample> sample_cone(const MetricModel& model, const Vector& point, int count,
                                       std::mt19937_64& rng);

/// Bisects the segment from interior `inside` to non-interior `outside` for the
/// domain boundary; returns the boundary direction.
Vector bisect_boundary(const MetricModel& model, const Vector& point, const Vector& inside,
                       const Vector& outside, int iterations = 60);

}  // namespace finsler
