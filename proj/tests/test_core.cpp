#include "finsler/finsler_core.hpp"
#include "finsler/stationary.hpp"
#include "finsler/suite.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace finsler;
using namespace finsler::test;

namespace {

// Zermelo norm straight from the navigation picture: F(v) is the time t with
// |v/t - W|_g = 1, found by bisection (the residual decreases in t).
double zermelo_oracle(const Matrix& g, const Vector& W, const Vector& v) {
  auto phi = [&](double t) {
    const Vector u = v / t - W;
    return u.dot(g * u) - 1.0;
  };
  double lo = 1e-12, hi = 1.0;
  while (phi(hi) > 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Central-difference Hessian of L/2 written independently of the library.
Matrix numeric_hessian(const MetricModel& m, const Vector& x, const Vector& v) {
  const Eigen::Index n = v.size();
  const double h = 1e-3 * v.norm();
  Matrix H(n, n);
  auto L = [&](const Vector& w) { return evaluate(m, {x, w}).L; };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      Vector ei = Vector::Zero(n), ek = Vector::Zero(n);
      ei[i] = h;
      ek[k] = h;
      H(i, k) = 0.5 * (L(v + ei + ek) - L(v + ei - ek) - L(v - ei + ek) + L(v - ei - ek)) / (4 * h * h);
    }
  return H;
}

Matrix minkowski(int n) {
  Matrix g = Matrix::Identity(n, n);
  g(0, 0) = -1.0;
  return g;
}

}  // namespace

TEST(Evaluate, EuclideanRanders) {
  const MetricModel m = MetricModel::randers(Chart::cube(2, 1.0), identity(2), zero(2));
  EXPECT_DOUBLE_EQ(evaluate(m, {vec({0, 0}), vec({3, 4})}).F, 5.0);
}

TEST(Evaluate, WindlessZermeloIsRiemannian) {
  Matrix g(2, 2);
  g << 2.0, 0.3, 0.3, 1.0;
  const MetricModel m = MetricModel::zermelo(Chart::cube(2, 1.0), constant_field(g), zero(2));
  const Vector v = vec({0.7, -1.3});
  EXPECT_NEAR(evaluate(m, {vec({0, 0}), v}).F, std::sqrt(v.dot(g * v)), 1e-14);
}

TEST(Evaluate, ConstantWindDownwind) {
  const MetricModel m = wind(0.5);
  EXPECT_NEAR(evaluate(m, {vec({0, 0}), vec({1, 0})}).F, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(zermelo_oracle(Matrix::Identity(2, 2), vec({0.5, 0}), vec({1, 0})), 2.0 / 3.0, 1e-12);
}

TEST(Evaluate, ZermeloMatchesNavigationOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const MatrixField g = [](const Vector& x) {
    Matrix m(2, 2);
    m << 1.5 + 0.2 * x[0], 0.2, 0.2, 1.0 + 0.1 * x[1] * x[1];
    return m;
  };
  const VectorField W = [](const Vector& x) { return vec({0.4 * std::cos(x[1]), 0.3 * x[0]}); };
  const MetricModel m = MetricModel::zermelo(Chart::cube(2, 1.0), g, W);
  for (int k = 0; k < 200; ++k) {
    const Vector x = vec({u(rng), u(rng)}), v = vec({u(rng), u(rng)});
    const double F = evaluate(m, {x, v}).F;
    EXPECT_GT(F, 0.0);
    EXPECT_NEAR(F, zermelo_oracle(g(x), W(x), v), 1e-10 * (1 + F));
  }
}

TEST(Evaluate, Errors) {
  const MetricModel m = euclidean();
  EXPECT_THROW(evaluate(m, {vec({0, 0}), vec({0, 0})}), Error);
  const MetricModel lor = MetricModel::lorentzian(Chart::cube(2, 1.0), constant_field(minkowski(2)), vec({1, 0}));
  try {
    evaluate(lor, {vec({0, 0}), vec({0.2, 1.0})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutsideDomain);
  }
  // lightlike: boundary of the cone, L extended by zero
  EXPECT_EQ(evaluate(lor, {vec({0, 0}), vec({1.0, 1.0})}).L, 0.0);
}

TEST(Homogeneity, BuiltinsAreExactlyHomogeneous) {
  std::mt19937_64 rng(3);
  const double two[] = {2.0}, one[] = {1.0};
  for (const auto& [name, m] : builtin_models()) {
    const Vector x = m.chart().center();
    for (const auto& s : sample_cone(m, x, 20, rng)) {
      if (classify_domain(m, s).classification != DomainClass::Interior) continue;
      EXPECT_LE(check_homogeneity(m, s, two).max_residual, 1e-12) << name;
      EXPECT_EQ(check_homogeneity(m, s, one).max_residual, 0.0) << name;
    }
  }
}

TEST(Homogeneity, NonHomogeneousTableIsFlagged) {
  const MetricModel m = MetricModel::tabulated(Chart::cube(2, 1.0), [](const Vector&, const Vector& v) {
    return v.squaredNorm() + 1.0;
  });
  const double scales[] = {0.5, 2.0};
  const HomogeneityReport r = check_homogeneity(m, {vec({0, 0}), vec({1, 0})}, scales);
  EXPECT_TRUE(r.flagged);
  EXPECT_GT(r.max_residual, r.tolerance);
}

TEST(FundamentalTensor, RiemannianIsConstantInV) {
  Matrix h(3, 3);
  h << 2, 0.1, 0, 0.1, 1, 0.2, 0, 0.2, 3;
  const MetricModel m = MetricModel::riemannian(Chart::cube(3, 1.0), constant_field(h));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    const Vector v = vec({g(rng), g(rng), g(rng)});
    EXPECT_LE((fundamental_tensor(m, {vec({0, 0, 0}), v}).matrix - h).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(FundamentalTensor, MatchesIndependentDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& [name, m] : builtin_models()) {
    if (m.is_spacetime()) continue;
    for (int k = 0; k < 20; ++k) {
      const Vector x = vec({u(rng), u(rng)}), v = vec({u(rng), u(rng)});
      if (v.norm() < 0.1) continue;
      const Matrix e = fundamental_tensor(m, {x, v}).matrix;
      const Matrix oracle = numeric_hessian(m, x, v);
      EXPECT_LE((e - oracle).cwiseAbs().maxCoeff(), 1e-5 * e.cwiseAbs().maxCoeff()) << name;
    }
  }
}

TEST(FundamentalTensor, RandersPositiveWhereAlphaPlusBetaPositive) {
  // |beta| = 1.5 > 1: a conic Randers metric
  const MetricModel m = MetricModel::randers(Chart::cube(2, 1.0), identity(2), constant(vec({1.5, 0.0})));
  const Vector x = vec({0, 0});
  for (int k = 0; k < 72; ++k) {
    const double a = 2 * std::numbers::pi * (k + 0.5) / 72;
    const Vector v = vec({std::cos(a), std::sin(a)});
    const double ab = 1.0 + 1.5 * v[0];
    const FundamentalTensor t = fundamental_tensor(m, {x, v}, {true, std::nullopt});
    if (ab > 0) EXPECT_EQ(t.signature, (Signature{2, 0, 0})) << a;
    else EXPECT_NE(t.signature, (Signature{2, 0, 0})) << a;
  }
}

TEST(FundamentalTensor, HessianIdentity) {
  std::mt19937_64 rng(11);
  for (const auto& [name, m] : builtin_models())
    for (const auto& s : sample_cone(m, m.chart().center(), 10, rng)) {
      // boundary samples sit where L vanishes; the identity is only claimed inside
      const DomainVerdict d = classify_domain(m, s);
      if (d.classification != DomainClass::Interior || d.margin < 0.05) continue;
      EXPECT_LE(fundamental_tensor(m, s).hessian_identity_residual, 1e-8) << name;
    }
}

TEST(Domain, MatsumotoCriterion) {
  const MetricModel m = MetricModel::matsumoto(Chart::cube(2, 1.0), identity(2), constant(vec({0.6, 0.0})));
  const DomainVerdict d = classify_domain(m, {vec({0, 0}), vec({1, 0})});
  EXPECT_NEAR(d.margin, 0.4 * -0.2, 1e-15);
  EXPECT_EQ(d.classification, DomainClass::Outside);
  EXPECT_EQ(classify_domain(m, {vec({0, 0}), vec({-1, 0})}).classification, DomainClass::Interior);
}

TEST(Domain, BogoslovskyHalfSpace) {
  const MetricModel m = MetricModel::bogoslovsky(Chart::cube(3, 1.0), constant_field(minkowski(3)),
                                                 constant(vec({1.0, 2.0, 0.0})), 0.3, vec({1, 0, 0}));
  const Vector x = vec({0, 0, 0});
  EXPECT_EQ(classify_domain(m, {x, vec({1.0, 0.2, 0.1})}).classification, DomainClass::Interior);
  // future timelike but omega(v) < 0
  EXPECT_EQ(classify_domain(m, {x, vec({1.0, -0.9, 0.0})}).classification, DomainClass::Outside);
  EXPECT_EQ(classify_domain(m, {x, vec({-1.0, 0.0, 0.0})}).classification, DomainClass::Outside);
}

TEST(Domain, KosteleckyDegeneracyLocus) {
  // b = 0: F = m sqrt(-g0(v,v)) + g0(v,a) vanishes on a cone of timelike
  // directions. Find it along v(s) = (1, s, 0) and check the tensor there.
  const MetricModel m = MetricModel::kostelecky(Chart::cube(3, 1.0), constant_field(minkowski(3)),
                                                constant(vec({0, 2.0, 0})), zero(3), 1.0, 1, vec({1, 0, 0}));
  const Vector x = vec({0, 0, 0});
  auto d = [&](double s) { return *degeneracy_value(m, x, vec({1, s, 0})); };
  double lo = -0.9, hi = 0.0;
  ASSERT_LT(d(lo), 0);
  ASSERT_GT(d(hi), 0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (d(mid) < 0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  EXPECT_NEAR(s, -1 / std::sqrt(5.0), 1e-12);
  const TangentSample at{x, vec({1, s, 0})};
  EXPECT_TRUE(classify_domain(m, at).degenerate);
  const FundamentalTensor t = fundamental_tensor(m, at, {true, std::nullopt});
  EXPECT_GT(t.signature.zero, 0);
  EXPECT_FALSE(classify_domain(m, {x, vec({1, 0.3, 0})}).degenerate);
}

TEST(SpacetimeConditions, FermatPasses) {
  const StationaryModel sm = build_stationary(
      Chart::cube(2, 1.0), identity(2), [](const Vector& x) { return vec({0.3 + 0.1 * x[1], -0.2}); });
  std::mt19937_64 rng(2);
  std::vector<TangentSample> samples;
  for (const Vector& p : {vec({0, 0, 0}), vec({0, 0.5, -0.3})})
    for (auto& s : sample_cone(sm.spacetime, p, 12, rng)) samples.push_back(s);
  const SpacetimeConditionReport r = verify_spacetime_conditions(sm.fermat, samples);
  EXPECT_TRUE(r.passes());
  for (const auto& p : r.points) EXPECT_EQ(p.interior_signature_failures, 0);
}

TEST(SpacetimeConditions, TabulatedLorentzianHasLorentzSignature) {
  const Matrix g = minkowski(3);
  const MetricModel m = MetricModel::tabulated(
      Chart::cube(3, 1.0), [g](const Vector&, const Vector& v) { return -v.dot(g * v); },
      [g](const Vector&, const Vector& v) { return std::min(-v.dot(g * v) / v.squaredNorm(), v[0] / v.norm()); });
  std::mt19937_64 rng(4);
  const auto samples = sample_cone(m, vec({0, 0, 0}), 12, rng);
  const SpacetimeConditionReport r = verify_spacetime_conditions(m, samples);
  EXPECT_TRUE(r.passes());
  for (const auto& s : samples) {
    if (classify_domain(m, s).classification != DomainClass::Interior) continue;
    EXPECT_EQ(fundamental_tensor(m, s).signature, (Signature{1, 2, 0}));
  }
}

TEST(SpacetimeConditions, KosteleckyNearDegeneracyFails) {
  const MetricModel m = MetricModel::kostelecky(Chart::cube(3, 1.0), constant_field(minkowski(3)),
                                                constant(vec({0, 2.0, 0})), zero(3), 1.0, 1, vec({1, 0, 0}));
  const double s = -1 / std::sqrt(5.0);
  const Vector x = vec({0, 0, 0});
  std::vector<TangentSample> samples = {{x, vec({1, s + 1e-3, 0})}, {x, vec({1, s + 1e-2, 0.0})},
                                        {x, vec({1, 0.2, 0.1})}};
  const SpacetimeConditionReport r = verify_spacetime_conditions(m, samples);
  EXPECT_FALSE(r.passes());
}

TEST(Fermat, ReverseDuality) {
  const StationaryModel sm = build_stationary(
      Chart::cube(2, 1.0), identity(2), [](const Vector& x) { return vec({0.4 * std::sin(x[0]), 0.3}); });
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const Vector x = vec({u(rng), u(rng)}), v = vec({u(rng), u(rng)});
    EXPECT_EQ(evaluate(sm.reverse, {x, v}).F, evaluate(sm.fermat, {x, Vector(-v)}).F);
  }
}

TEST(Validation, RejectsBadCoefficients) {
  Matrix indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  EXPECT_THROW(MetricModel::riemannian(Chart::cube(2, 1.0), constant_field(indefinite)), Error);
  try {
    MetricModel::zermelo(Chart::cube(2, 1.0), identity(2), constant(vec({1.5, 0})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
  }
}
