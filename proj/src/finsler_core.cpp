#include "finsler/finsler_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace finsler {

std::string_view to_string(DomainClass c) {
  switch (c) {
    case DomainClass::Interior: return "interior";
    case DomainClass::Boundary: return "boundary";
    case DomainClass::Outside: return "outside";
  }
  return "unknown";
}

namespace {

void require_nonzero(const Vector& v) {
  if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorCode::ZeroVector, "metric evaluated at the zero vector");
}

}  // namespace

DomainVerdict classify_domain(const MetricModel& model, const TangentSample& s) {
  require_nonzero(s.vector);
  DomainVerdict out;
  const auto conditions = domain_conditions(model, s.point, s.vector);
  out.margin = std::numeric_limits<double>::infinity();
  bool outside = false, boundary = false;
  for (const auto& c : conditions) {
    out.margin = std::min(out.margin, c.value);
    const double band = kBoundaryBand * c.scale;
    if (!(c.value >= -band)) outside = true;  // NaN counts as outside
    else if (c.value <= band) boundary = true;
  }
  out.classification = outside ? DomainClass::Outside
                       : boundary ? DomainClass::Boundary
                                  : DomainClass::Interior;
  if (auto d = degeneracy_value(model, s.point, s.vector)) {
    out.degeneracy_margin = *d;
    out.degenerate = std::abs(*d) <= kBoundaryBand * s.vector.norm();
  }
  return out;
}

Evaluation evaluate(const MetricModel& model, const TangentSample& s) {
  const DomainVerdict verdict = classify_domain(model, s);
  if (verdict.classification == DomainClass::Outside)
    throw Error(ErrorCode::OutsideDomain, "vector outside the conic domain (margin " +
                                              std::to_string(verdict.margin) + ")");
  Evaluation e;
  if (verdict.classification == DomainClass::Boundary && model.is_spacetime()) {
    e.L = 0.0;
  } else {
    e.L = lagrangian_value(model, s.point, s.vector);
  }
  if (!(e.L >= 0.0))
    throw Error(ErrorCode::OutsideDomain, "Lagrangian is negative or undefined at the sample");
  e.F = std::sqrt(e.L);
  return e;
}

HomogeneityReport check_homogeneity(const MetricModel& model, const TangentSample& s,
                                    std::span<const double> scales, double tolerance) {
  HomogeneityReport r;
  r.tolerance = tolerance;
  const double base = evaluate(model, s).L;
  for (double lambda : scales) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::UsageError, "homogeneity scales must be positive");
    const double scaled = evaluate(model, {s.point, lambda * s.vector}).L;
    const double expected = lambda * lambda * base;
    const double denom = std::max(std::abs(expected), std::numeric_limits<double>::min());
    r.max_residual = std::max(r.max_residual, std::abs(scaled - expected) / denom);
  }
  r.flagged = r.max_residual > tolerance;
  return r;
}

Signature signature_of(const Eigen::VectorXd& ev, double relative_tolerance) {
  Signature sig;
  const double tol = relative_tolerance * ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol) ++sig.plus;
    else if (ev[i] < -tol) ++sig.minus;
    else ++sig.zero;
  }
  return sig;
}

FundamentalTensor fundamental_tensor(const MetricModel& model, const TangentSample& s,
                                     const TensorOptions& options) {
  FundamentalTensor t;
  t.base = s;
  t.verdict = classify_domain(model, s);
  if (t.verdict.classification == DomainClass::Outside && !options.allow_outside)
    throw Error(ErrorCode::OutsideDomain, "fundamental tensor requested outside the domain");

  const DerivativeMode mode = options.mode.value_or(model.derivative_mode());
  const LagrangianJet jet = mode == DerivativeMode::Exact && model.has_closed_form()
                                ? lagrangian_jet(model.with_derivative_mode(DerivativeMode::Exact),
                                                 s.point, s.vector, 2)
                                : lagrangian_jet_fd(model, s.point, s.vector, 2);
  if (!jet.hessian.allFinite())
    throw Error(ErrorCode::OutsideDomain, "no smooth extension of L at this sample");
  t.matrix = 0.25 * (jet.hessian + jet.hessian.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(t.matrix, Eigen::EigenvaluesOnly);
  t.eigenvalues = es.eigenvalues();
  t.signature = signature_of(t.eigenvalues, t.zero_tolerance);
  t.near_degenerate =
      t.signature.zero > 0 ||
      !(signature_of(t.eigenvalues, t.zero_tolerance * kSignatureStabilityFactor) == t.signature);

  const double gvv = s.vector.dot(t.matrix * s.vector);
  const double scale =
      std::max(std::abs(jet.value),
               std::numeric_limits<double>::epsilon() * s.vector.squaredNorm() *
                   std::max(1.0, t.matrix.cwiseAbs().maxCoeff()));
  t.hessian_identity_residual = std::abs(gvv - jet.value) / scale;
  return t;
}

MetricModel stationary_spacetime(const Chart& spatial, const MatrixField& g0, const VectorField& omega,
                                 double time_extent) {
  std::vector<Interval> box{{-time_extent, time_extent}};
  box.insert(box.end(), spatial.box.begin(), spatial.box.end());
  std::vector<bool> periodic{false};
  periodic.insert(periodic.end(), spatial.periodic.begin(), spatial.periodic.end());
  std::optional<Region> region;
  if (spatial.region) {
    const Region r = *spatial.region;
    region = Region([r](const Vector& x) { return r.contains(x.tail(x.size() - 1)); },
                    "R x " + r.description());
  }
  const Eigen::Index m = spatial.dimension();
  MatrixField gl = [g0, omega, m](const Vector& x) {
    const Vector xs = x.tail(m);
    Matrix g(m + 1, m + 1);
    g(0, 0) = -1.0;
    const Vector om = omega(xs);
    g.block(1, 0, m, 1) = om;
    g.block(0, 1, 1, m) = om.transpose();
    g.block(1, 1, m, m) = g0(xs);
    return g;
  };
  Vector t = Vector::Zero(m + 1);
  t[0] = 1.0;
  return MetricModel::lorentzian(Chart(std::move(box), std::move(periodic), std::move(region)),
                                 std::move(gl), std::move(t));
}

MetricModel stationary_spacetime(const MetricModel& fermat) {
  const auto* p = std::get_if<FermatParams>(&fermat.params());
  if (!p) throw Error(ErrorCode::UsageError, "stationary_spacetime expects a fermat model");
  return stationary_spacetime(fermat.chart(), p->g0, p->omega);
}

Vector bisect_boundary(const MetricModel& model, const Vector& point, const Vector& inside,
                       const Vector& outside, int iterations) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Vector u = (1.0 - mid) * inside + mid * outside;
    if (classify_domain(model, {point, u}).classification == DomainClass::Interior) lo = mid;
    else hi = mid;
  }
  const double s = 0.5 * (lo + hi);
  return (1.0 - s) * inside + s * outside;
}

std::vector<TangentSample> sample_cone(const MetricModel& model, const Vector& point, int count,
                                       std::mt19937_64& rng) {
  const int n = model.dimension();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> inside, outside;
  for (int tries = 0; tries < 200 * count && static_cast<int>(inside.size()) < count; ++tries) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    v /= v.norm();
    const auto c = classify_domain(model, {point, v}).classification;
    if (c == DomainClass::Interior) inside.push_back(v);
    else if (c == DomainClass::Outside && outside.size() < static_cast<std::size_t>(count)) outside.push_back(v);
  }
  std::vector<TangentSample> out;
  for (const auto& v : inside) out.push_back({point, v});
  for (std::size_t i = 0; i < inside.size() && !outside.empty(); ++i) {
    const Vector& w = outside[i % outside.size()];
    if ((inside[i] + w).norm() < 1e-6) continue;  // segment would pass through 0
    Vector b = bisect_boundary(model, point, inside[i], w);
    out.push_back({point, b / b.norm()});
  }
  return out;
}

bool SpacetimePointReport::passes() const {
  return convexity_failures == 0 && half_plane_failures == 0 && boundary_vanishing &&
         interior_signature_failures == 0 && boundary_signature_failures == 0 &&
         boundary_extension_smooth;
}

bool SpacetimeConditionReport::passes() const {
  return !points.empty() &&
         std::all_of(points.begin(), points.end(), [](const auto& p) { return p.passes(); });
}

namespace {

struct VecLess {
  bool operator()(const Vector& a, const Vector& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

// A non-interior direction not antiparallel to v, so the segment avoids 0.
std::optional<Vector> find_outside(const MetricModel& model, const Vector& point, const Vector& v) {
  const Eigen::Index n = v.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (double sign : {1.0, -1.0}) {
      Vector e = Vector::Zero(n);
      e[k] = sign * v.norm();
      for (const Vector& w : {Vector(-v + 0.5 * e), Vector(e)}) {
        if ((w / w.norm() + v / v.norm()).norm() < 1e-6) continue;
        if (classify_domain(model, {point, w}).classification == DomainClass::Outside) return w;
      }
    }
  }
  return std::nullopt;
}

SpacetimePointReport check_point(const MetricModel& model, const Vector& point,
                                 const std::vector<Vector>& vectors) {
  const int n = model.dimension();
  const Signature expected{1, n - 1, 0};
  SpacetimePointReport r;
  r.point = point;
  std::vector<Vector> interior, boundary, outside;
  for (const auto& v : vectors) {
    switch (classify_domain(model, {point, v}).classification) {
      case DomainClass::Interior: interior.push_back(v); break;
      case DomainClass::Boundary: boundary.push_back(v); break;
      case DomainClass::Outside: outside.push_back(v); break;
    }
  }
  r.interior_samples = static_cast<int>(interior.size());

  // (i) convexity and half-plane containment
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (classify_domain(model, {point, Vector(-interior[i])}).classification != DomainClass::Outside)
      ++r.half_plane_failures;
    for (std::size_t j = i + 1; j < interior.size() && r.convexity_pairs < 400; ++j) {
      const Vector mid = 0.5 * (interior[i] + interior[j]);
      if (mid.norm() < 1e-12) continue;
      ++r.convexity_pairs;
      if (classify_domain(model, {point, mid}).classification == DomainClass::Outside)
        ++r.convexity_failures;
    }
  }
  if (r.convexity_failures) r.findings.push_back("(i) cone not convex at sampled pairs");
  if (r.half_plane_failures) r.findings.push_back("(i) cone not contained in a half-space");

  // Boundary directions reached from interior samples.
  std::vector<std::pair<Vector, Vector>> approach;  // (boundary, interior origin)
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const auto w = find_outside(model, point, interior[i]);
    if (!w) continue;
    approach.emplace_back(bisect_boundary(model, point, interior[i], *w), interior[i]);
  }
  for (const auto& b : boundary) approach.emplace_back(b, Vector());

  // (ii)-(iii) L extends by 0 continuously to the boundary
  for (const auto& [b, v] : approach) {
    const double at_boundary = evaluate(model, {point, b}).L;
    double limit = std::abs(at_boundary);
    if (v.size() > 0) {
      const double lv = evaluate(model, {point, v}).L;
      const Vector near = b + 1e-12 * (v - b);
      const double ln = lagrangian_value(model, point, near);
      limit = std::max(limit, std::abs(ln) / std::max(lv, 1e-300));
    }
    r.boundary_limit = std::max(r.boundary_limit, limit);
  }
  r.boundary_vanishing = !(r.boundary_limit > 1e-3);
  if (!r.boundary_vanishing) r.findings.push_back("(iii) L does not tend to 0 at the cone boundary");

  // (iv) signature inside and on the boundary
  for (const auto& v : interior) {
    const auto t = fundamental_tensor(model, {point, v});
    if (!(t.signature == expected) || t.near_degenerate) ++r.interior_signature_failures;
  }
  if (r.interior_signature_failures)
    r.findings.push_back("(iv) fundamental tensor not of signature (1, n-1) at interior samples");
  r.boundary_samples = static_cast<int>(approach.size());
  for (const auto& [b, v] : approach) {
    LagrangianJet jet = lagrangian_jet(model, point, b, 2);
    if (!jet.hessian.allFinite()) jet = lagrangian_jet_fd(model, point, b, 2);
    if (!jet.hessian.allFinite()) {
      r.boundary_extension_smooth = false;
      ++r.boundary_signature_failures;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * jet.hessian, Eigen::EigenvaluesOnly);
    if (!(signature_of(es.eigenvalues(), kZeroEigenvalueTolerance) == expected))
      ++r.boundary_signature_failures;
  }
  if (!r.boundary_extension_smooth)
    r.findings.push_back("(iii) no finite smooth extension of L across the boundary");
  if (r.boundary_signature_failures)
    r.findings.push_back("(iv) signature fails at boundary samples");
  return r;
}

}  // namespace

SpacetimeConditionReport verify_spacetime_conditions(const MetricModel& model,
                                                     const std::vector<TangentSample>& samples) {
  SpacetimeConditionReport report;
  std::map<Vector, std::vector<Vector>, VecLess> groups;

  if (model.family() == Family::Fermat) {
    // Lift (p, v) to the spacetime vectors (F(v), v) and (F(v)(1 + 1/4), v).
    const MetricModel st = stationary_spacetime(model);
    const MetricModel forward = std::get<FermatParams>(model.params()).orientation == Orientation::Forward
                                    ? model
                                    : model.reversed();
    report.checked_family = "stationary spacetime of fermat";
    for (const auto& s : samples) {
      Vector x(s.point.size() + 1);
      x << 0.0, s.point;
      const double f = evaluate(forward, s).F;
      Vector light(x.size()), time(x.size());
      light << f, s.vector;
      time << 1.25 * f, s.vector;
      auto& g = groups[x];
      g.push_back(light);
      g.push_back(time);
      if (g.size() == 2) {
        Vector still = Vector::Zero(x.size());
        still[0] = 1.0;
        g.push_back(still);
      }
    }
    for (const auto& [x, vs] : groups) report.points.push_back(check_point(st, x, vs));
    return report;
  }

  report.checked_family = std::string(to_string(model.family()));
  for (const auto& s : samples) groups[s.point].push_back(s.vector);
  for (const auto& [x, vs] : groups) report.points.push_back(check_point(model, x, vs));
  return report;
}

}  // namespace finsler
