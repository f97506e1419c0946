#include "finsler/suite.hpp"

#include "finsler/causal_grid.hpp"
#include "finsler/distance_field.hpp"
#include "finsler/finsler_core.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/stationary.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace finsler {

namespace {

using Rng = std::mt19937_64;
constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vector random_point(Rng& rng, const Chart& chart, double margin) {
  Vector x(chart.dimension());
  for (int a = 0; a < chart.dimension(); ++a) {
    const auto& iv = chart.box[static_cast<std::size_t>(a)];
    x[a] = uniform(rng, iv.lo + margin, iv.hi - margin);
  }
  return x;
}

Vector random_direction(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Vector v(n);
  do {
    for (int a = 0; a < n; ++a) v[a] = g(rng);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool compare(double measured, double threshold, const std::string& rel) {
  if (rel == "<=") return measured <= threshold;
  if (rel == ">=") return measured >= threshold;
  return measured == threshold;
}

struct Out {
  std::string suite;
  std::vector<CriterionResult> items;
  void add(std::string name, double measured, double threshold, std::string rel, std::string detail = {}) {
    CriterionResult c;
    c.suite = suite;
    c.name = std::move(name);
    c.measured = measured;
    c.threshold = threshold;
    c.relation = std::move(rel);
    c.passed = std::isfinite(measured) && compare(measured, threshold, c.relation);
    c.detail = std::move(detail);
    items.push_back(std::move(c));
  }
};

// Shared position-dependent coefficients on [-2,2]^2.
Matrix metric2(const Vector& x) {
  Matrix h(2, 2);
  h << 1.0 + 0.3 * x[0] * x[0], 0.1 * x[0] * x[1], 0.1 * x[0] * x[1], 1.0 + 0.2 * x[1] * x[1];
  return h;
}
Vector oneform2(const Vector& x) { return vec({0.3 * std::sin(x[1]), 0.2 * std::cos(x[0])}); }
Vector wind2(const Vector& x) { return vec({0.4 * std::cos(x[1]), 0.3 * std::sin(x[0])}); }

Matrix minkowski3(const Vector& x) {
  Matrix g = Matrix::Identity(3, 3);
  g(0, 0) = -1.0;
  g(1, 1) = 1.0 + 0.1 * std::sin(x[1]);
  g(1, 2) = g(2, 1) = 0.1 * std::cos(x[2]);
  return g;
}

StationaryModel product_spacetime(double half_width) {
  return build_stationary(Chart::cube(2, half_width), constant_field(Matrix(Matrix::Identity(2, 2))),
                          constant_field(Vector(Vector::Zero(2))));
}

StationaryModel curved_stationary() {
  return build_stationary(
      Chart::cube(2, 2.0), metric2,
      [](const Vector& x) { return vec({0.3 * std::cos(x[1]), 0.2 * std::sin(x[0])}); });
}

// relative size of the smallest domain inequality, +inf when unrestricted
double relative_margin(const MetricModel& m, const Vector& x, const Vector& v) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : domain_conditions(m, x, v)) worst = std::min(worst, c.value / c.scale);
  return worst;
}

// Admissible samples with relative domain margin >= margin.
std::vector<TangentSample> admissible_samples(const MetricModel& m, int count, double margin, Rng& rng) {
  std::vector<TangentSample> out;
  const double edge = 0.1;
  int guard = 0;
  while (static_cast<int>(out.size()) < count && ++guard < 1000 * count) {
    const Vector x = random_point(rng, m.chart(), edge);
    if (!m.chart().contains(x)) continue;
    std::vector<TangentSample> cands;
    if (m.is_spacetime()) {
      for (auto& s : sample_cone(m, x, 8, rng))
        if (classify_domain(m, s).classification == DomainClass::Interior) cands.push_back(std::move(s));
    } else {
      cands.push_back({x, random_direction(rng, m.dimension()) * uniform(rng, 0.3, 3.0)});
    }
    for (auto& s : cands) {
      if (static_cast<int>(out.size()) >= count) break;
      if (relative_margin(m, s.point, s.vector) < margin) continue;
      if (classify_domain(m, s).classification != DomainClass::Interior) continue;
      out.push_back(std::move(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void hessian_consistency(Out& out, Rng& rng, const Tolerances& tol) {
  const auto models = builtin_models();
  for (const char* name : {"randers", "zermelo", "fermat"}) {
    const MetricModel* m = nullptr;
    for (const auto& [n, mm] : models)
      if (n == name) m = &mm;
    const auto samples = admissible_samples(*m, 1000, 0.1, rng);
    // Errors are measured against the largest entry of the exact tensor: with
    // the fixed difference step the rounding error is absolute per entry, so
    // entries near zero would dominate a plain ratio.
    double worst = 0.0, worst_large = 0.0;
    for (const auto& s : samples) {
      const Matrix e = fundamental_tensor(*m, s, {false, DerivativeMode::Exact}).matrix;
      const Matrix f = fundamental_tensor(*m, s, {false, DerivativeMode::FiniteDifference}).matrix;
      const double scale = e.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index k = 0; k < e.cols(); ++k) {
          const double d = std::abs(e(i, k) - f(i, k));
          worst = std::max(worst, d / scale);
          if (std::abs(e(i, k)) >= 0.1 * scale) worst_large = std::max(worst_large, d / std::abs(e(i, k)));
        }
    }
    out.add(std::string("exact-vs-fd/") + name, worst, tol["hessian_fd"], "<=",
            std::to_string(samples.size()) + " samples, error over the largest entry; plain ratio on entries above "
            "a tenth of it: " + fmt(worst_large));
  }
}

void randers_criterion(Out& out, Rng& rng, const Tolerances&) {
  // |beta|_h ranges over roughly 0.3..2.7, so both signs of alpha+beta occur.
  const VectorField beta = [](const Vector& x) { return vec({1.2 + 0.8 * std::sin(x[1]), 0.9 * std::cos(x[0])}); };
  const MetricModel m = MetricModel::randers(Chart::cube(2, 2.0), metric2, beta);
  int counted = 0, agree = 0, negative = 0, banded = 0;
  while (counted < 10000) {
    const Vector x = random_point(rng, m.chart(), 0.0);
    const Vector v = random_direction(rng, 2) * uniform(rng, 0.2, 5.0);
    const double alpha = std::sqrt(v.dot(metric2(x) * v));
    const double ab = alpha + beta(x).dot(v);
    if (std::abs(ab) <= 1e-6 * alpha) {
      ++banded;
      continue;
    }
    ++counted;
    const FundamentalTensor t = fundamental_tensor(m, {x, v}, {true, std::nullopt});
    const bool pd = t.eigenvalues.minCoeff() > 0.0;
    if (pd == (ab > 0.0)) ++agree;
    if (ab < 0.0) ++negative;
  }
  out.add("agreement", static_cast<double>(agree) / counted, 1.0, ">=",
          std::to_string(counted) + " samples (" + std::to_string(negative) + " with alpha+beta<0, " +
              std::to_string(banded) + " in the boundary band skipped)");
}

void constant_wind(Out& out, Rng&, const Tolerances& tol) {
  const double w = 0.5, d = 0.8, T = 0.5;
  const Chart chart = Chart::cube(2, 1.0);
  const MetricModel m = MetricModel::zermelo(chart, constant_field(Matrix(Matrix::Identity(2, 2))),
                                             constant_field(vec({w, 0.0})));
  const GridSpec grid = GridSpec::over_chart(chart, {201, 201});
  const DistanceField f = distance_field(m, FieldSource::at(Vector::Zero(2)), grid);
  const double down = field_value(m, f, vec({d, 0.0}));
  const double up = field_value(m, f, vec({-d, 0.0}));
  out.add("field-downwind", std::abs(down - d / (1 + w)) / (d / (1 + w)), tol["field_relative"], "<=",
          "value " + fmt(down) + " vs " + fmt(d / (1 + w)));
  out.add("field-upwind", std::abs(up - d / (1 - w)) / (d / (1 - w)), tol["field_relative"], "<=",
          "value " + fmt(up) + " vs " + fmt(d / (1 - w)));
  for (int sgn : {1, -1}) {
    const double speed = 1.0 + sgn * w;
    const Geodesic g = integrate_geodesic(m, Vector::Zero(2), vec({sgn * speed, 0.0}), T);
    const double disp = (g.end() - g.start()).norm();
    out.add(sgn > 0 ? "geodesic-downwind" : "geodesic-upwind", std::abs(disp - T * speed) / (T * speed), 0.01, "<=",
            "displacement " + fmt(disp) + " vs " + fmt(T * speed));
  }
}

void lift_nullity(Out& out, Rng& rng, const Tolerances& tol) {
  const StationaryModel sm = curved_stationary();
  const OdeOptions ode{1e-12, 1e-12};
  double worst = 0.0, residual = 0.0;
  int lifted = 0, failed = 0;
  for (int k = 0; k < 100; ++k) {
    const Vector x = random_point(rng, sm.chart, 1.0);
    Vector u = random_direction(rng, 2);
    u /= evaluate(sm.fermat, {x, u}).F;
    try {
      const Geodesic g = integrate_geodesic(sm.fermat, x, u, 1.0, ode);
      const SpacetimeCurve c = lift(sm, g.samples, true, true);
      worst = std::max(worst, c.max_nullity);
      if (c.pregeodesic_residual) residual = std::max(residual, *c.pregeodesic_residual);
      ++lifted;
    } catch (const Error&) {
      ++failed;
    }
  }
  out.add("max-nullity", failed ? std::numeric_limits<double>::infinity() : worst, tol["lift_nullity"], "<=",
          std::to_string(lifted) + " lifted unit-F geodesics, " + std::to_string(failed) +
              " failed; max pregeodesic residual " + fmt(residual));
}

// Hausdorff distance (in cells) between two node sets on the same grid.
double node_set_hausdorff(const GridSpec& grid, const std::vector<char>& a, const std::vector<char>& b) {
  const int W = 8;
  auto directed = [&](const std::vector<char>& from, const std::vector<char>& to) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!from[i] || to[i]) continue;
      double best = W + 1.0;
      for (int dy = -W; dy <= W; ++dy)
        for (int dx = -W; dx <= W; ++dx) {
          const int off[2] = {dx, dy};
          const auto j = grid.neighbor(i, off);
          if (j && to[*j]) best = std::min(best, std::hypot(dx, dy));
        }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

void product_future(Out& out, Rng&, const Tolerances&) {
  const StationaryModel sm = product_spacetime(1.0);
  const GridSpec grid = GridSpec::over_chart(sm.chart, {201, 201});
  const std::pair<Vector, double> cases[] = {{Vector::Zero(2), 0.6}, {vec({0.103, -0.051}), 0.45}};
  double worst = 0.0;
  std::string detail;
  for (const auto& [p, t0] : cases) {
    const FutureSlice s = chronological_future_slice(sm, p, t0, grid);
    std::vector<char> ball(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ball[i] = (grid.node(i) - p).norm() < t0;
    const double h = node_set_hausdorff(grid, s.mask, ball);
    worst = std::max(worst, h);
    detail += (detail.empty() ? "" : "; ") + std::string("t0=") + fmt(t0) + ": " + fmt(h) + " cells";
  }
  out.add("hausdorff-cells", worst, 2.0, "<=", detail);
}

void cauchy_horizon_suite(Out& out, Rng&, const Tolerances&) {
  const StationaryModel sm = product_spacetime(1.0);
  const GridSpec grid = GridSpec::over_chart(sm.chart, {201, 201});
  const double R = 0.6, h = grid.min_spacing();
  const HorizonGraph H = cauchy_horizon(sm, Region::ball(Vector::Zero(2), R), grid);
  out.add("apex-error-cells", std::abs(H.apex_value - R) / h, 2.0, "<=",
          "apex value " + fmt(H.apex_value) + " at " + fmt(grid.node(H.apex)[0]) + "," + fmt(grid.node(H.apex)[1]));
  out.add("boundary-cells", H.boundary_max / h, 1.0, "<=", "largest value next to the complement " + fmt(H.boundary_max));
}

void reachability(Out& out, Rng&, const Tolerances&) {
  const StationaryModel sm = product_spacetime(1.0);
  const GridSpec spatial = GridSpec::over_chart(sm.chart, {41, 41});
  const CausalGrid cg = CausalGrid::build(sm.spacetime, spatial, 20);
  const RelationCheck rc = check_relations(cg);
  out.add("chronological-in-causal", static_cast<double>(rc.chronological_not_causal), 0.0, "==",
          std::to_string(rc.nodes) + " nodes, " + std::to_string(rc.related_pairs) + " causal pairs");
  out.add("transitivity-violations",
          static_cast<double>(rc.closure_failures + rc.transpose_mismatches + rc.missing_reflexivity), 0.0, "==",
          "closure " + std::to_string(rc.closure_failures) + ", transpose " + std::to_string(rc.transpose_mismatches) +
              ", reflexivity " + std::to_string(rc.missing_reflexivity));
  out.add("chronology-irreflexive", static_cast<double>(rc.reflexive_chronology), 0.0, "==");

  const Vector px = Vector::Zero(2);
  const std::size_t p = cg.node(0, spatial.nearest(px));
  const Reachability r = causal_reachability(cg, p);
  const double h = spatial.min_spacing();
  double band = 0.0;
  int max_level = 0;
  // levels whose ball of radius l dt stays inside the spatial grid
  for (int l = 1; l < cg.levels(); ++l) {
    const double t = l * cg.dt();
    if (t > 1.0 - 2 * h) break;
    max_level = l;
    const FutureSlice s = chronological_future_slice(sm, px, t, spatial);
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      const bool grid_in = r.chronological[cg.node(l, i)] != 0;
      if (grid_in == (s.mask[i] != 0)) continue;
      band = std::max(band, std::abs(s.field.values[i] - t) / h);
    }
  }
  out.add("slice-band-cells", band, 2.0, "<=",
          "I+ slices at levels 1.." + std::to_string(max_level) + " vs field balls, dt=" + fmt(cg.dt()));
}

void homogeneity(Out& out, Rng& rng, const Tolerances& tol) {
  const double scales[] = {0.25, 0.5, 2.0, 4.0, 7.5};
  for (const auto& [name, m] : builtin_models()) {
    const auto samples = admissible_samples(m, 1000, 0.1, rng);
    double hom = 0.0, ident = 0.0;
    for (const auto& s : samples) {
      hom = std::max(hom, check_homogeneity(m, s, scales, tol["homogeneity"]).max_residual);
      ident = std::max(ident, fundamental_tensor(m, s).hessian_identity_residual);
    }
    const std::string detail = std::to_string(samples.size()) + " samples";
    out.add("homogeneity/" + name, hom, tol["homogeneity"], "<=", detail);
    out.add("hessian-identity/" + name, ident, tol["hessian_identity"], "<=", detail);
  }
}

void projective(Out& out, Rng& rng, const Tolerances& tol) {
  const MetricModel R = MetricModel::randers(Chart::cube(2, 2.0), metric2, oneform2);
  const ScalarField f = [](const Vector& x) { return 0.15 * std::sin(x[0]) * std::cos(x[1]); };
  const VectorField df = [](const Vector& x) {
    return vec({0.15 * std::cos(x[0]) * std::cos(x[1]), -0.15 * std::sin(x[0]) * std::sin(x[1])});
  };
  const MetricModel changed = projective_change(R, f, df);
  std::vector<std::pair<Vector, Vector>> pairs;
  while (pairs.size() < 100) {
    Vector p = random_point(rng, R.chart(), 1.0), q = random_point(rng, R.chart(), 1.0);
    if ((p - q).norm() > 0.2) pairs.emplace_back(std::move(p), std::move(q));
  }
  ShootOptions so;
  so.restarts = 2;
  const ProjectiveReport rep = compare_projective(R, changed, f, pairs, so);
  const std::string detail = std::to_string(pairs.size()) + " pairs, " + std::to_string(rep.failures) + " failed";
  out.add("path-hausdorff", rep.failures ? std::numeric_limits<double>::infinity() : rep.max_hausdorff,
          tol["path_deviation"], "<=", detail);
  out.add("length-shift-error", rep.failures ? std::numeric_limits<double>::infinity() : rep.max_length_error, 1e-8,
          "<=", detail);
}

void conjugate_points(Out& out, Rng&, const Tolerances&) {
  for (double R : {1.0, 2.0}) {
    const MatrixField h = [R](const Vector& x) {
      const double c = 2.0 * R / (1.0 + x.squaredNorm());
      return Matrix(c * c * Matrix::Identity(2, 2));
    };
    const MetricModel sphere = MetricModel::riemannian(Chart::cube(2, 3.0), h);
    const Geodesic g = integrate_geodesic(sphere, vec({1.0, 0.0}), vec({0.0, 1.0 / R}), 1.25 * kPi * R,
                                          {1e-11, 1e-11});
    const ConjugateScan scan = conjugate_point_scan(sphere, g);
    const double first = scan.conjugate_parameters.empty() ? std::numeric_limits<double>::infinity()
                                                           : scan.conjugate_parameters.front();
    out.add("sphere-R" + fmt(R), std::abs(first - kPi * R) / (kPi * R), 0.02, "<=",
            "first conjugate arclength " + fmt(first) + " vs pi R = " + fmt(kPi * R));
  }
  const Chart flat = Chart::cube(2, 5.0);
  const Matrix I = Matrix::Identity(2, 2);
  const std::pair<std::string, MetricModel> flats[] = {
      {"euclidean", MetricModel::riemannian(flat, constant_field(I))},
      {"randers-constant", MetricModel::randers(flat, constant_field(I), constant_field(vec({0.3, 0.1})))},
      {"zermelo-constant", MetricModel::zermelo(flat, constant_field(I), constant_field(vec({0.5, 0.0})))},
  };
  for (const auto& [name, m] : flats) {
    Vector u = vec({0.6, 0.8});
    u /= evaluate(m, {Vector::Zero(2), u}).F;
    const Geodesic g = integrate_geodesic(m, vec({-1.0, -1.0}), u, 3.0);
    const ConjugateScan scan = conjugate_point_scan(m, g);
    out.add("flat/" + name, static_cast<double>(scan.conjugate_parameters.size()), 0.0, "==",
            "conjugate parameters found");
  }
}

void separation(Out& out, Rng&, const Tolerances& tol) {
  const StationaryModel sm = product_spacetime(1.0);
  const double T = 1.2;
  double errors[2];
  std::string detail;
  const int counts[2] = {21, 41};
  for (int r = 0; r < 2; ++r) {
    const GridSpec spatial = GridSpec::over_chart(sm.chart, {counts[r], counts[r]});
    const double dt = 3.0 * spatial.min_spacing();
    const int levels = static_cast<int>(std::lround(T / dt)) + 1;
    const CausalGrid cg = CausalGrid::build(sm.spacetime, spatial, levels, dt);
    const std::size_t c = spatial.nearest(Vector::Zero(2));
    const double s = finsler_separation(cg, cg.node(0, c), cg.node(levels - 1, c));
    errors[r] = std::abs(s - T) / T;
    detail += (r ? "; " : "") + std::to_string(counts[r]) + "^2 x " + std::to_string(levels) + ": " + fmt(s);
  }
  out.add("static-pair-error", errors[0], tol["separation_relative"], "<=", detail);
  out.add("refined-error", errors[1], errors[0] + 1e-12, "<=", "refinement must not increase the error");
}

std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) h = (h ^ c) * 16777619u;
  return h;
}

using SuiteFn = std::function<void(Out&, Rng&, const Tolerances&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"hessian-consistency", hessian_consistency},
      {"randers-criterion", randers_criterion},
      {"constant-wind", constant_wind},
      {"lift-nullity", lift_nullity},
      {"product-future", product_future},
      {"cauchy-horizon", cauchy_horizon_suite},
      {"reachability", reachability},
      {"homogeneity", homogeneity},
      {"projective-change", projective},
      {"conjugate-points", conjugate_points},
      {"separation", separation},
  };
  return r;
}

}  // namespace

std::vector<std::pair<std::string, MetricModel>> builtin_models() {
  const Chart c2 = Chart::cube(2, 2.0), c3 = Chart::cube(3, 2.0);
  const Vector future = vec({1.0, 0.0, 0.0});
  std::vector<std::pair<std::string, MetricModel>> m;
  m.emplace_back("riemannian", MetricModel::riemannian(c2, metric2));
  m.emplace_back("randers", MetricModel::randers(c2, metric2, oneform2));
  m.emplace_back("zermelo", MetricModel::zermelo(c2, metric2, wind2));
  m.emplace_back("matsumoto", MetricModel::matsumoto(c2, metric2, oneform2));
  m.emplace_back("fermat", MetricModel::fermat(c2, metric2, wind2));
  m.emplace_back("bogoslovsky",
                 MetricModel::bogoslovsky(c3, minkowski3, constant_field(vec({1.0, 0.3, 0.0})), 0.3, future));
  m.emplace_back("kostelecky",
                 MetricModel::kostelecky(c3, minkowski3, constant_field(vec({0.1, 0.05, 0.0})),
                                         [](const Vector& x) { return vec({0.0, 0.2, 0.1 + 0.05 * x[0]}); }, 1.0, 1,
                                         future));
  m.emplace_back("lorentzian", MetricModel::lorentzian(c3, minkowski3, future));
  return m;
}

int SuiteReport::failures() const {
  int n = 0;
  for (const auto& c : criteria) n += c.passed ? 0 : 1;
  return n;
}

double SuiteReport::seconds() const {
  std::map<std::string, double> per_suite;
  for (const auto& c : criteria) per_suite[c.suite] = c.seconds;
  double s = 0.0;
  for (const auto& [k, v] : per_suite) s += v;
  return s;
}

Json SuiteReport::to_json(bool timing) const {
  Json j;
  j["suite"] = name;
  j["seed"] = seed;
  Json list = Json::array();
  for (const auto& c : criteria) {
    Json e;
    e["suite"] = c.suite;
    e["criterion"] = c.name;
    e["measured"] = json_number(c.measured);
    e["relation"] = c.relation;
    e["threshold"] = json_number(c.threshold);
    e["verdict"] = c.passed ? "pass" : "fail";
    if (!c.detail.empty()) e["detail"] = c.detail;
    if (timing) e["wall_time_s"] = c.seconds;
    list.push_back(std::move(e));
  }
  j["criteria"] = std::move(list);
  j["failures"] = failures();
  j["verdict"] = failures() == 0 ? "pass" : "fail";
  return j;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [n, f] : registry()) names.push_back(n);
  names.push_back("all");
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, const Tolerances& tolerances) {
  SuiteReport rep;
  rep.name = name;
  rep.seed = seed;
  bool found = false;
  for (const auto& [n, fn] : registry()) {
    if (name != "all" && name != n) continue;
    found = true;
    // each suite draws from its own stream so results do not depend on which
    // other suites ran before it
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      fnv1a(n)};
    Rng rng(seq);
    Out out{n, {}};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(out, rng, tolerances);
    } catch (const Error& e) {
      out.add("completed", 0.0, 1.0, ">=", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : out.items) {
      c.seconds = secs;
      rep.criteria.push_back(std::move(c));
    }
  }
  if (!found) {
    std::string list;
    for (const auto& s : suite_names()) list += (list.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::UsageError, "unknown suite '" + name + "' (available: " + list + ")");
  }
  return rep;
}

}  // namespace finsler
