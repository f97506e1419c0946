#pragma once

#include "finsler/fields.hpp"
#include "finsler/region.hpp"
#include "finsler/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace finsler {

enum class Family {
  Riemannian,
  Randers,
  Zermelo,
  Matsumoto,
  Fermat,
  Bogoslovsky,
  Kostelecky,
  Lorentzian,
  Tabulated,
};

std::string_view to_string(Family f);

enum class Orientation { Forward, Reverse };

/// L(x, v) supplied directly by the user (tabulated family).
using LagrangianFunction = std::function<double(const Vector& x, const Vector& v)>;

struct RiemannianParams {
  MatrixField h;
};
/// F = sqrt(h(v,v)) + beta(v)
struct RandersParams {
  MatrixField h;
  VectorField beta;
};
/// Time-optimal travel under wind W with g(W,W) < 1.
struct ZermeloParams {
  MatrixField g;
  VectorField wind;
};
/// F = alpha^2 / (alpha - beta)
struct MatsumotoParams {
  MatrixField h;
  VectorField beta;
};
/// F = sqrt(g0 + omega^2) +/- omega for the stationary data (g0, omega).
struct FermatParams {
  MatrixField g0;
  VectorField omega;
  Orientation orientation = Orientation::Forward;
};
/// F = sqrt(-g0(v,v))^(1-b) * omega(v)^b on the future cone intersected with
/// omega > 0.
struct BogoslovskyParams {
  MatrixField g0;
  VectorField omega;
  double exponent = 0.5;
  Vector time_orientation;
};
/// F = m sqrt(-g0(v,v)) + g0(v,a) +/- sqrt(g0(v,b)^2 - g0(b,b) g0(v,v))
struct KosteleckyParams {
  MatrixField g0;
  VectorField a;
  VectorField b;
  double mass = 1.0;
  int branch = +1;
  Vector time_orientation;
};
/// L = -g(v,v) on the future cone of g.
struct LorentzianParams {
  MatrixField g;
  Vector time_orientation;
};
struct TabulatedParams {
  LagrangianFunction lagrangian;
  std::optional<LagrangianFunction> margin;
};

using FamilyParams =
    std::variant<RiemannianParams, RandersParams, ZermeloParams, MatsumotoParams, FermatParams,
                 BogoslovskyParams, KosteleckyParams, LorentzianParams, TabulatedParams>;

/// A metric family with its coefficient fields on a chart. Immutable after
/// construction; copies share the coefficient closures.
class MetricModel {
 public:
  static MetricModel riemannian(Chart chart, MatrixField h, DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel randers(Chart chart, MatrixField h, VectorField beta,
                             DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel zermelo(Chart chart, MatrixField g, VectorField wind,
                             DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel matsumoto(Chart chart, MatrixField h, VectorField beta,
                               DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel fermat(Chart chart, MatrixField g0, VectorField omega,
                            Orientation orientation = Orientation::Forward,
                            DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel bogoslovsky(Chart chart, MatrixField g0, VectorField omega, double exponent,
                                 Vector time_orientation, DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel kostelecky(Chart chart, MatrixField g0, VectorField a, VectorField b,
                                double mass, int branch, Vector time_orientation,
                                DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel lorentzian(Chart chart, MatrixField g, Vector time_orientation,
                                DerivativeMode mode = DerivativeMode::Exact);
  static MetricModel tabulated(Chart chart, LagrangianFunction lagrangian,
                               std::optional<LagrangianFunction> margin = std::nullopt);

  Family family() const { return family_; }
  int dimension() const { return chart_.dimension(); }
  const Chart& chart() const { return chart_; }
  DerivativeMode derivative_mode() const { return mode_; }
  const FamilyParams& params() const { return *params_; }

  /// L(x, v) := L_original(x, -v) when set.
  bool is_reversed() const { return reversed_; }
  MetricModel reversed() const;
  MetricModel with_derivative_mode(DerivativeMode mode) const;
  /// Same coefficients on the chart box with the region predicate dropped.
  MetricModel without_region() const;

  /// Families whose L is a Lorentz-Finsler metric on a cone.
  bool is_spacetime() const;
  /// Families whose exact mode has closed-form vector-slot derivatives.
  bool has_closed_form() const { return family_ != Family::Tabulated; }

  /// Checks the family invariants at each point; throws InvariantViolation
  /// naming the failing point.
  void validate_at(const std::vector<Vector>& points) const;
  /// Regular lattice of `per_axis`^n points strictly inside the chart box.
  std::vector<Vector> lattice_samples(int per_axis) const;

 private:
  MetricModel(Family family, Chart chart, FamilyParams params, DerivativeMode mode);

  Family family_;
  Chart chart_;
  std::shared_ptr<const FamilyParams> params_;
  DerivativeMode mode_;
  bool reversed_ = false;
};

/// L with its first and second derivatives in the vector slot.
struct LagrangianJet {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

/// Closed-form L (or its formula extension) at (x, v); no domain check. Returns
/// NaN where the formula itself is undefined.
double lagrangian_value(const MetricModel& model, const Vector& x, const Vector& v);

/// Vector-slot jet up to `order` (0, 1 or 2) using the model's derivative mode;
/// no domain check.
LagrangianJet lagrangian_jet(const MetricModel& model, const Vector& x, const Vector& v, int order);

/// Central-difference jet with step max(1e-4, 1e-4 |v|) and one Richardson level.
LagrangianJet lagrangian_jet_fd(const MetricModel& model, const Vector& x, const Vector& v, int order);

/// One domain-defining inequality c(v) > 0 together with the scale its
/// boundary band is measured against.
struct DomainCondition {
  double value = 0.0;
  double scale = 1.0;
};

/// Family-specific domain inequalities at (x, v). An empty list means the
/// whole slit tangent space is admissible.
std::vector<DomainCondition> domain_conditions(const MetricModel& model, const Vector& x,
                                               const Vector& v);

/// For Kostelecky models: m sqrt(-g0(v,v)) + g0(v,a), whose zero locus is
/// where the fundamental tensor degenerates (b = 0). Empty for other families.
std::optional<double> degeneracy_value(const MetricModel& model, const Vector& x, const Vector& v);

}  // namespace finsler
