#include "finsler/distance_field.hpp"
#include "finsler/finsler_core.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/stationary.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace finsler;
using namespace finsler::test;

namespace {

StationaryModel product(double half = 1.0) { return build_stationary(Chart::cube(2, half), identity(2), zero(2)); }

StationaryModel drift(double w, double half = 1.0) {
  return build_stationary(Chart::cube(2, half), identity(2), constant(vec({w, 0})));
}

double analytic_hausdorff(const GridSpec& grid, const std::vector<char>& mask, const Vector& p, double r) {
  // physical Hausdorff distance between the node set and the nodes of the ball
  double worst = 0.0;
  std::vector<Vector> in, ball;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (mask[i]) in.push_back(grid.node(i));
    if ((grid.node(i) - p).norm() < r) ball.push_back(grid.node(i));
  }
  auto directed = [&](const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double w = 0.0;
    for (const auto& x : a) {
      double best = 1e300;
      for (const auto& y : b) best = std::min(best, (x - y).norm());
      w = std::max(w, best);
    }
    return w;
  };
  worst = std::max(directed(in, ball), directed(ball, in));
  return worst;
}

}  // namespace

TEST(Build, ProductCase) {
  const StationaryModel sm = product();
  const TangentSample s{vec({0.2, 0.1}), vec({3, 4})};
  EXPECT_NEAR(evaluate(sm.fermat, s).F, 5.0, 1e-14);
  EXPECT_NEAR(evaluate(sm.reverse, s).F, 5.0, 1e-14);
}

TEST(Build, ConstantOmegaFormula) {
  const double w = 0.4;
  const StationaryModel sm = drift(w);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    const Vector v = vec({g(rng), g(rng)});
    const double expect = std::sqrt(v.squaredNorm() + w * w * v[0] * v[0]) + w * v[0];
    EXPECT_NEAR(evaluate(sm.fermat, {vec({0, 0}), v}).F, expect, 1e-13 * (1 + expect));
    EXPECT_EQ(evaluate(sm.reverse, {vec({0, 0}), v}).F, evaluate(sm.fermat, {vec({0, 0}), Vector(-v)}).F);
  }
}

TEST(Build, LorentzMetricBlocks) {
  const StationaryModel sm = drift(0.3);
  const Matrix gL = sm.lorentz_metric(vec({0, 0}));
  EXPECT_EQ(gL(0, 0), -1.0);
  EXPECT_EQ(gL(0, 1), 0.3);
  EXPECT_EQ(gL(1, 0), 0.3);
  EXPECT_EQ(gL(1, 1), 1.0);
}

TEST(Build, RejectsIndefiniteG0) {
  Matrix bad(2, 2);
  bad << 1, 0, 0, -0.5;
  try {
    build_stationary(Chart::cube(2, 1.0), constant_field(bad), zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidCoefficients);
  }
}

TEST(Build, ZermeloNormalForm) {
  // the stationary model built from (g, W) has the Zermelo metric as its F
  const Vector W = vec({0.3, -0.2});
  const StationaryModel sm = stationary_from_zermelo(Chart::cube(2, 1.0), identity(2), constant(W));
  const MetricModel z = MetricModel::zermelo(Chart::cube(2, 1.0), identity(2), constant(W));
  for (const Vector& v : {vec({1, 0}), vec({-0.3, 0.7}), vec({0.1, -2})})
    EXPECT_NEAR(evaluate(sm.fermat, {vec({0, 0}), v}).F, evaluate(z, {vec({0, 0}), v}).F, 1e-13);
}

TEST(Lift, ProductLine) {
  const StationaryModel sm = product();
  const Geodesic g = integrate_geodesic(sm.fermat, vec({0, 0}), vec({0.6, 0.8}), 0.5);
  const SpacetimeCurve c = lift(sm, g.samples);
  EXPECT_LE(c.max_nullity, 1e-14);
  EXPECT_FALSE(c.past_directed);
  for (const auto& s : c.samples) EXPECT_NEAR(s.x[0], s.s, 1e-14);
  for (auto ch : c.segments) EXPECT_EQ(ch, CausalCharacter::Lightlike);
}

TEST(Lift, ConstantOmegaUnitLine) {
  const StationaryModel sm = drift(0.35);
  Vector u = vec({0.2, -0.9});
  u /= evaluate(sm.fermat, {vec({0, 0}), u}).F;
  const Geodesic g = integrate_geodesic(sm.fermat, vec({0, 0}), u, 0.8);
  const SpacetimeCurve c = lift(sm, g.samples, true, true);
  EXPECT_LE(c.max_nullity, 1e-8);
  ASSERT_TRUE(c.pregeodesic_residual.has_value());
  EXPECT_LE(*c.pregeodesic_residual, 1e-6);
}

TEST(Lift, PastLiftOfReverseCurve) {
  const StationaryModel sm = drift(0.35);
  Vector u = vec({0.5, 0.5});
  u /= evaluate(sm.reverse, {vec({0, 0}), u}).F;
  const Geodesic g = integrate_geodesic(sm.reverse, vec({0, 0}), u, 0.5);
  const SpacetimeCurve c = lift(sm, g.samples, false);
  EXPECT_TRUE(c.past_directed);
  EXPECT_LE(c.max_nullity, 1e-8);
}

TEST(Lift, NotUnitSpeed) {
  const StationaryModel sm = product();
  const Geodesic g = integrate_geodesic(sm.fermat, vec({0, 0}), vec({1.2, 0}), 0.5);
  try {
    lift(sm, g.samples);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitSpeed);
  }
}

TEST(FutureSlice, ProductBall) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {101, 101});
  const FutureSlice s = chronological_future_slice(sm, vec({0, 0}), 0.5, grid);
  EXPECT_LE(analytic_hausdorff(grid, s.mask, vec({0, 0}), 0.5), 2 * grid.min_spacing());
  EXPECT_TRUE(s.region.contains(vec({0.3, 0.3})));
  EXPECT_FALSE(s.region.contains(vec({0.4, 0.4})));
}

TEST(FutureSlice, DriftedBall) {
  // Zermelo form with wind w: downwind reach t0 (1 + w), upwind t0 (1 - w)
  const double w = 0.4, t0 = 0.5;
  const StationaryModel sm = stationary_from_zermelo(Chart::cube(2, 1.0), identity(2), constant(vec({w, 0})));
  const GridSpec grid = GridSpec::over_chart(sm.chart, {201, 201});
  const FutureSlice s = chronological_future_slice(sm, vec({0, 0}), t0, grid);
  double down = 0, up = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector y = grid.node(i);
    if (!s.mask[i] || std::abs(y[1]) > 1e-12) continue;
    down = std::max(down, y[0]);
    up = std::max(up, -y[0]);
  }
  EXPECT_NEAR(down, t0 * (1 + w), 2 * grid.min_spacing());
  EXPECT_NEAR(up, t0 * (1 - w), 2 * grid.min_spacing());
}

TEST(FutureSlice, PastUsesReverseMetric) {
  const StationaryModel sm = drift(0.3);
  const GridSpec grid = GridSpec::over_chart(sm.chart, {41, 41});
  const FutureSlice past = chronological_future_slice(sm, vec({0, 0}), 0.4, grid, true);
  FieldOptions o;
  o.direction = FieldDirection::Reverse;
  const DistanceField f = distance_field(sm.fermat, FieldSource::at(vec({0, 0})), grid, o);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(past.mask[i] != 0, f.values[i] < 0.4);
}

TEST(FutureSlice, ShrinksToPoint) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {41, 41});
  const FutureSlice s = chronological_future_slice(sm, vec({0, 0}), 1e-9, grid);
  EXPECT_EQ(std::count(s.mask.begin(), s.mask.end(), 1), 1);
  EXPECT_TRUE(s.mask[grid.nearest(vec({0, 0}))]);
}

TEST(FutureSlice, MonotoneRefinement) {
  const StationaryModel sm = product();
  double previous = 1e300;
  for (int n : {26, 51, 101}) {
    const GridSpec grid = GridSpec::over_chart(sm.chart, {n, n});
    const FutureSlice s = chronological_future_slice(sm, vec({0.01, -0.02}), 0.55, grid);
    const double err = analytic_hausdorff(grid, s.mask, vec({0.01, -0.02}), 0.55);
    EXPECT_LE(err, previous) << n;
    previous = err;
  }
}

TEST(Horizon, FlatDisk) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {101, 101});
  const double R = 0.5;
  const Region A = Region::ball(vec({0, 0}), R);
  const HorizonGraph H = cauchy_horizon(sm, A, grid);
  EXPECT_NEAR(H.apex_value, R, 2 * grid.min_spacing());
  EXPECT_LE(H.boundary_max, grid.min_spacing() + 1e-15);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!A.contains(grid.node(i))) EXPECT_EQ(H.values[i], 0.0);
}

TEST(Horizon, ConstantWindApexShiftsDownwind) {
  const double w = 0.4, R = 0.5;
  const StationaryModel sm = stationary_from_zermelo(Chart::cube(2, 1.0), identity(2), constant(vec({w, 0})));
  const GridSpec grid = GridSpec::over_chart(sm.chart, {101, 101});
  const HorizonGraph H = cauchy_horizon(sm, Region::ball(vec({0, 0}), R), grid);
  EXPECT_GE(H.apex_value, R / (1 + w) - grid.min_spacing());
  EXPECT_LE(H.apex_value, R / (1 - w) + grid.min_spacing());
  EXPECT_GT(grid.node(H.apex)[0], 0.0);
}

TEST(Horizon, BoundedByEveryExteriorPoint) {
  const StationaryModel sm = drift(0.3);
  const GridSpec grid = GridSpec::over_chart(sm.chart, {41, 41});
  const Region A = Region::ball(vec({0.1, 0}), 0.6);
  const HorizonGraph H = cauchy_horizon(sm, A, grid);
  for (const Vector& x : {vec({-0.9, -0.9}), vec({0.9, 0.0}), vec({0.0, 0.9}), vec({-0.8, 0.2})}) {
    ASSERT_FALSE(A.contains(x));
    const DistanceField f = distance_field(sm.fermat, FieldSource::at(x), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(H.values[i], f.values[i] + 1e-12);
  }
}

TEST(Horizon, EmptyComplement) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {11, 11});
  try {
    cauchy_horizon(sm, Region::everything(), grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyComplement);
  }
}

TEST(Ladder, FlatCasePasses) {
  const StationaryModel sm = product(3.0);
  LadderOptions o;
  o.radius = 0.5;
  o.pair_budget = 4;
  const LadderReport r = causal_ladder_report(sm, o);
  ASSERT_EQ(r.findings.size(), 4u);
  for (const auto& f : r.findings) {
    EXPECT_TRUE(f.passed) << f.name << ": " << f.detail;
    if (f.name == "causally-continuous") EXPECT_FALSE(f.computed);
    else EXPECT_TRUE(f.proxy);
  }
}

TEST(Ladder, PunctureBreaksCausalSimplicity) {
  const Chart chart({{-1, 1}, {-1, 1}}, {}, Region::punctured(Region::everything(), {vec({0, 0})}));
  const StationaryModel sm = build_stationary(chart, identity(2), zero(2));
  LadderOptions o;
  o.radius = 0.3;
  o.centers = {vec({0.5, 0.5})};
  o.pair_budget = 2;
  const LadderReport r = causal_ladder_report(sm, o);
  bool simple_checked = false;
  for (const auto& f : r.findings)
    if (f.name == "causally-simple") {
      simple_checked = true;
      EXPECT_FALSE(f.passed);
      EXPECT_TRUE(f.witness.has_value());
    }
  EXPECT_TRUE(simple_checked);
}

TEST(Ladder, ShrinkingMetricEscapes) {
  // g0 decays fast towards the chart edge, so geodesics leave the chart
  // within a short F-length: the completeness proxy must flag it
  const MatrixField g0 = [](const Vector& x) { return Matrix(std::exp(-3 * x.squaredNorm()) * Matrix::Identity(2, 2)); };
  const StationaryModel sm = build_stationary(Chart::cube(2, 1.0), g0, zero(2));
  LadderOptions o;
  o.radius = 1.0;
  o.pair_budget = 1;
  o.grid_per_axis = 41;
  const LadderReport r = causal_ladder_report(sm, o);
  for (const auto& f : r.findings)
    if (f.name == "cauchy-slices") {
      EXPECT_FALSE(f.passed);
      EXPECT_TRUE(f.witness.has_value());
    }
}

TEST(Classify, Basics) {
  const StationaryModel sm = product();
  EXPECT_EQ(classify_vector(sm, vec({0, 0}), vec({1, 0, 0})).character, CausalCharacter::Timelike);
  EXPECT_EQ(classify_vector(sm, vec({0, 0}), vec({1, 1, 0})).character, CausalCharacter::Lightlike);
  EXPECT_EQ(classify_vector(sm, vec({0, 0}), vec({0, 1, 0})).character, CausalCharacter::None);
  EXPECT_EQ(classify_vector(sm, vec({0, 0}), vec({0, 0, 0})).character, CausalCharacter::Null);
  EXPECT_EQ(classify_vector(sm, vec({0, 0}), vec({-1, 0, 0})).character, CausalCharacter::None);
}

TEST(Classify, CoherentWithLorentzMetric) {
  const StationaryModel sm = build_stationary(
      Chart::cube(2, 1.0), identity(2), [](const Vector& x) { return vec({0.4 * std::cos(x[1]), 0.3}); });
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  int timelike = 0;
  for (int k = 0; k < 2000; ++k) {
    const Vector x = vec({u(rng), u(rng)}), v = vec({u(rng), u(rng), u(rng)});
    const VectorClass c = classify_vector(sm, x, v);
    const double gL = v.dot(sm.lorentz_metric(x) * v);
    if (c.character == CausalCharacter::Timelike) {
      ++timelike;
      EXPECT_LT(gL, 0.0);
      EXPECT_GT(v[0], 0.0);
    }
    // the same answer through the generic cone model
    const Vector p = vec({0, x[0], x[1]});
    const VectorClass cone = classify_vector(sm.spacetime, p, v);
    if (c.character == CausalCharacter::Timelike || c.character == CausalCharacter::None)
      EXPECT_EQ(cone.character, c.character);
  }
  EXPECT_GT(timelike, 100);
}

TEST(Temporal, TimeFunction) {
  const StationaryModel sm = drift(0.3);
  std::mt19937_64 rng(1);
  const auto samples = sample_causal_vectors(sm, 500, rng);
  const TemporalReport r = verify_temporal(sm.spacetime, [](const Vector& p) { return p[0]; }, samples);
  EXPECT_TRUE(r.temporal);
  EXPECT_GT(r.min_dtau, 0.0);
}

TEST(Temporal, SpatialCoordinateFails) {
  const StationaryModel sm = product();
  const std::vector<TangentSample> samples = {{vec({0, 0, 0}), vec({1, -1, 0})}, {vec({0, 0, 0}), vec({1, 0.5, 0})}};
  const TemporalReport r = verify_temporal(sm.spacetime, [](const Vector& p) { return p[1]; }, samples);
  EXPECT_FALSE(r.temporal);
  ASSERT_TRUE(r.worst.has_value());
  EXPECT_LT(r.worst->vector[1], 0.0);
}

TEST(Temporal, PerturbedTimeBelowBound) {
  const StationaryModel sm = drift(0.2);
  const ScalarField f = [](const Vector& x) { return std::sin(2 * x[0]) + x[1]; };
  const VectorField df = [](const Vector& x) { return vec({2 * std::cos(2 * x[0]), 1.0}); };
  std::mt19937_64 rng(4);
  std::vector<TangentSample> spatial;
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 400; ++k) spatial.push_back({vec({u(rng), u(rng)}), vec({u(rng), u(rng)})});
  const double eps = temporal_epsilon_bound(sm, df, spatial);
  ASSERT_TRUE(std::isfinite(eps));
  ASSERT_GT(eps, 0.0);
  // lightlike vectors (F(u), u) over the same directions
  std::vector<TangentSample> causal;
  for (const auto& s : spatial) {
    Vector v(3);
    v << evaluate(sm.fermat, s).F, s.vector;
    causal.push_back({vec({0, s.point[0], s.point[1]}), v});
  }
  auto tau = [&](double e) { return [f, e](const Vector& p) { return p[0] + e * f(p.tail(2)); }; };
  EXPECT_TRUE(verify_temporal(sm.spacetime, tau(0.9 * eps), causal).temporal);
  EXPECT_FALSE(verify_temporal(sm.spacetime, tau(1.1 * eps), causal).temporal);
}
