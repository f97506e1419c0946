#include "finsler/finsler_core.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/stationary.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace finsler;
using namespace finsler::test;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<CurvePoint> sampled(std::function<Vector(double)> c, int n = 41) {
  std::vector<CurvePoint> out;
  for (int i = 0; i < n; ++i) out.push_back({i / (n - 1.0), c(i / (n - 1.0))});
  return out;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

MetricModel curved_randers() {
  return MetricModel::randers(
      Chart::cube(2, 2.0),
      [](const Vector& x) {
        Matrix h(2, 2);
        h << 1.0 + 0.3 * x[0] * x[0], 0.1 * x[0] * x[1], 0.1 * x[0] * x[1], 1.0 + 0.2 * x[1] * x[1];
        return h;
      },
      [](const Vector& x) { return vec({0.3 * std::sin(x[1]), 0.2 * std::cos(x[0])}); });
}

}  // namespace

TEST(EulerLagrange, StraightLinesAreGeodesics) {
  const auto line = sampled([](double t) { return vec({-0.5 + t, 0.2 + 0.5 * t}); });
  EXPECT_LE(max_of(euler_lagrange_residual(euclidean(), line)), 1e-6);
  EXPECT_LE(max_of(euler_lagrange_residual(wind(0.5), line)), 1e-6);
}

TEST(EulerLagrange, CircleIsNot) {
  const auto arc = sampled([](double t) { return vec({0.5 * std::cos(t), 0.5 * std::sin(t)}); });
  EXPECT_GT(max_of(euler_lagrange_residual(euclidean(), arc)), 0.5);
}

TEST(Integrate, EuclideanLine) {
  const Geodesic g = integrate_geodesic(euclidean(), vec({0, 0}), vec({1, 0}), 2.0);
  EXPECT_NEAR((g.end() - vec({2, 0})).norm(), 0.0, 1e-12);
  EXPECT_NEAR(g.length, 2.0, 1e-12);
  EXPECT_TRUE(g.affine);
  EXPECT_FALSE(g.exited_chart);
}

TEST(Integrate, ConstantWindDisplacement) {
  // |dx - T W| = T for the unit-time trajectory
  const double w = 0.5, T = 0.6;
  const Vector W = vec({w, 0});
  const MetricModel m = wind(w);
  for (double angle : {0.0, 0.7, 2.0, kPi}) {
    const Vector dir = vec({std::cos(angle), std::sin(angle)});
    const Vector u = dir / evaluate(m, {vec({0, 0}), dir}).F;
    const Geodesic g = integrate_geodesic(m, vec({0, 0}), u, T);
    const Vector dx = g.end() - g.start();
    EXPECT_NEAR((dx - T * W).norm(), T, 1e-9) << angle;
    EXPECT_NEAR(dx.normalized().dot(dir), 1.0, 1e-12);
  }
  const Geodesic down = integrate_geodesic(m, vec({0, 0}), vec({1 + w, 0}), T);
  EXPECT_NEAR(down.end()[0], T * (1 + w), 1e-10);
}

TEST(Integrate, ProductFermatIsStraight) {
  const StationaryModel sm = build_stationary(Chart::cube(2, 2.0), identity(2), zero(2));
  const Geodesic g = integrate_geodesic(sm.fermat, vec({-1, 0.5}), vec({0.6, -0.8}), 1.5);
  for (const auto& s : g.samples) {
    const Vector d = s.x - vec({-1, 0.5});
    EXPECT_NEAR(d[0] * -0.8 - d[1] * 0.6, 0.0, 1e-12);
  }
}

TEST(Integrate, ConstantSpeedInvariant) {
  const MetricModel m = curved_randers();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    const Vector x = vec({u(rng), u(rng)}), v = vec({u(rng), u(rng)});
    const Geodesic g = integrate_geodesic(m, x, v, 1.0);
    EXPECT_LE(g.speed_drift, 1e-6);
    const double F0 = evaluate(m, {x, v}).F;
    for (const auto& s : g.samples) EXPECT_NEAR(evaluate(m, {s.x, s.v}).F, F0, 1e-6 * F0);
  }
}

TEST(Integrate, StopsAtChartBoundary) {
  const Geodesic g = integrate_geodesic(euclidean(2, 1.0), vec({0, 0}), vec({1, 0}), 5.0);
  EXPECT_TRUE(g.exited_chart);
  ASSERT_TRUE(g.exit_point.has_value());
  EXPECT_NEAR(g.end()[0], 1.0, 1e-6);
  EXPECT_GT((*g.exit_point)[0], 1.0);
}

TEST(Integrate, OutputTimes) {
  const std::vector<double> times = {0.25, 0.5, 0.75, 1.0};
  const Geodesic g = integrate_parameter(wind(0.3), vec({0, 0}), vec({0.2, 0.1}), 1.0, {}, times);
  ASSERT_GE(g.samples.size(), times.size());
  EXPECT_NEAR(g.samples.back().t, 1.0, 1e-15);
  EXPECT_NEAR((g.end() - vec({0.2, 0.1})).norm(), 0.0, 1e-12);
}

TEST(Shoot, EuclideanSegment) {
  const auto gs = shoot(euclidean(), vec({-1, -0.5}), vec({0.8, 1.1}));
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_NEAR(gs[0].length, (vec({0.8, 1.1}) - vec({-1, -0.5})).norm(), 1e-9);
  EXPECT_LE((gs[0].end() - vec({0.8, 1.1})).norm(), 1e-9);
}

TEST(Shoot, DownwindTime) {
  const double d = 0.8, w = 0.5;
  const auto gs = shoot(wind(w), vec({-0.4, 0}), vec({-0.4 + d, 0}));
  EXPECT_NEAR(gs.front().length, d / (1 + w), 1e-9);
}

TEST(Shoot, CylinderWindingClasses) {
  // x periodic with period 2; from x = 0 the antipodal point x = 1 is reached
  // by going left or right, both of length 1
  const Chart cyl({{-1, 1}, {-1, 1}}, {true, false});
  const MetricModel m = MetricModel::randers(cyl, identity(2), zero(2));
  const auto gs = shoot(m, vec({0, 0}), vec({1, 0.2}));
  ASSERT_GE(gs.size(), 2u);
  const double expect = std::hypot(1.0, 0.2);
  EXPECT_NEAR(gs[0].length, expect, 1e-8);
  EXPECT_NEAR(gs[1].length, expect, 1e-8);
  EXPECT_LT(gs[0].initial_velocity()[0] * gs[1].initial_velocity()[0], 0.0);
}

TEST(Shoot, NoConnectionOnEmptyCone) {
  // Lorentzian future cone: q is spacelike-separated from p
  Matrix g = Matrix::Identity(2, 2);
  g(0, 0) = -1;
  const MetricModel m = MetricModel::lorentzian(Chart::cube(2, 2.0), constant_field(g), vec({1, 0}));
  try {
    shoot(m, vec({0, 0}), vec({0.1, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConnection);
  }
}

TEST(Projective, ConstantPotentialChangesNothing) {
  const MetricModel R = curved_randers();
  const MetricModel C = projective_change(R, [](const Vector&) { return 3.0; });
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    const TangentSample s{vec({u(rng), u(rng)}), vec({u(rng), u(rng)})};
    EXPECT_NEAR(evaluate(R, s).F, evaluate(C, s).F, 1e-15);
  }
}

TEST(Projective, LinearPotentialOnEuclidean) {
  const MetricModel R = MetricModel::randers(Chart::cube(2, 2.0), identity(2), zero(2));
  const ScalarField f = [](const Vector& x) { return 0.3 * x[0] - 0.2 * x[1]; };
  const MetricModel C = projective_change(R, f, constant(vec({0.3, -0.2})));
  const std::vector<std::pair<Vector, Vector>> pairs = {{vec({-1, -1}), vec({1, 0.5})}, {vec({0.5, 1}), vec({-1, 0})}};
  const ProjectiveReport r = compare_projective(R, C, f, pairs);
  EXPECT_EQ(r.failures, 0);
  EXPECT_LE(r.max_hausdorff, 1e-9);
  EXPECT_LE(r.max_length_error, 1e-9);
}

TEST(Projective, LengthsShiftByPotential) {
  const MetricModel R = curved_randers();
  const ScalarField f = [](const Vector& x) { return 0.1 * std::sin(x[0] + 2 * x[1]); };
  const MetricModel C = projective_change(R, f);
  // along an arbitrary (non-geodesic) path the F-lengths differ by f(q) - f(p)
  auto length = [](const MetricModel& m) {
    double L = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      const Vector x = vec({-0.5 + t, 0.3 * std::sin(3 * t)});
      const Vector v = vec({1.0, 0.9 * std::cos(3 * t)});
      L += evaluate(m, {x, v}).F / n;
    }
    return L;
  };
  const double shift = f(vec({0.5, 0.3 * std::sin(3.0)})) - f(vec({-0.5, 0}));
  EXPECT_NEAR(length(C) - length(R), shift, 1e-6);
}

TEST(Projective, PositivityViolated) {
  const MetricModel R = MetricModel::randers(Chart::cube(2, 1.0), identity(2), constant(vec({0.5, 0})));
  try {
    projective_change(R, [](const Vector& x) { return 0.8 * x[0]; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PositivityViolated);
  }
}

TEST(Conjugate, RoundSphere) {
  const double R = 1.5;
  const MetricModel sphere = MetricModel::riemannian(Chart::cube(2, 3.0), [R](const Vector& x) {
    const double c = 2 * R / (1 + x.squaredNorm());
    return Matrix(c * c * Matrix::Identity(2, 2));
  });
  const Geodesic g = integrate_geodesic(sphere, vec({1, 0}), vec({0, 1 / R}), 1.2 * kPi * R, {1e-11, 1e-11});
  const ConjugateScan s = conjugate_point_scan(sphere, g);
  ASSERT_FALSE(s.conjugate_parameters.empty());
  EXPECT_NEAR(s.conjugate_parameters.front(), kPi * R, 0.02 * kPi * R);
}

TEST(Conjugate, FlatHasNone) {
  const Geodesic g = integrate_geodesic(euclidean(2, 5.0), vec({-2, -1}), vec({0.8, 0.6}), 4.0);
  EXPECT_TRUE(conjugate_point_scan(euclidean(2, 5.0), g).conjugate_parameters.empty());
  const MetricModel w = wind(0.5, 5.0);
  const Geodesic gw = integrate_geodesic(w, vec({-2, -1}), vec({0.5, 0.5}), 3.0);
  EXPECT_TRUE(conjugate_point_scan(w, gw).conjugate_parameters.empty());
}

TEST(Hausdorff, Polylines) {
  const std::vector<Vector> a = {vec({0, 0}), vec({1, 0})}, b = {vec({0, 0.1}), vec({1, 0.1})};
  EXPECT_NEAR(polyline_hausdorff(a, b), 0.1, 1e-15);
  EXPECT_NEAR(polyline_hausdorff(a, a), 0.0, 1e-15);
}
