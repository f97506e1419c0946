#include "finsler/causal_grid.hpp"
#include "finsler/distance_field.hpp"
#include "finsler/stationary.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace finsler;
using namespace finsler::test;

namespace {

StationaryModel product() { return build_stationary(Chart::cube(2, 1.0), identity(2), zero(2)); }

}  // namespace

TEST(CausalGrid, LightSpeedOfProduct) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {11, 11});
  EXPECT_NEAR(max_light_speed(sm.spacetime, grid), 1.0, 1e-6);
}

TEST(CausalGrid, DefaultStep) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {21, 21});
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 4);
  EXPECT_NEAR(cg.dt(), 3 * grid.min_spacing(), 1e-6);
  EXPECT_EQ(cg.size(), 4 * grid.size());
  EXPECT_GT(cg.edge_count(), 0u);
}

TEST(CausalGrid, ReachMatchesFieldBall) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {41, 41});
  const double h = grid.min_spacing();
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 6, 3 * h);
  const std::size_t center = grid.nearest(vec({0, 0}));
  const Reachability r = causal_reachability(cg, cg.node(0, center));
  const DistanceField f = distance_field(sm.fermat, FieldSource::at(vec({0, 0})), grid);
  const int level = 5;
  const double t = level * cg.dt();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool in = r.causal[cg.node(level, i)];
    if (f.values[i] <= t - 2 * h) EXPECT_TRUE(in) << i;
    if (f.values[i] > t + 2 * h) EXPECT_FALSE(in) << i;
  }
}

TEST(CausalGrid, RelationsOnSmallGrid) {
  const StationaryModel sm = build_stationary(
      Chart::cube(2, 1.0), identity(2), [](const Vector& x) { return vec({0.3 * std::sin(x[1]), 0.2}); });
  const GridSpec grid = GridSpec::over_chart(sm.chart, {11, 11});
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 5);
  const RelationCheck rc = check_relations(cg);
  EXPECT_EQ(rc.nodes, cg.size());
  EXPECT_TRUE(rc.transitive());
  EXPECT_EQ(rc.chronological_not_causal, 0u);
  EXPECT_EQ(rc.reflexive_chronology, 0u);
  EXPECT_GE(rc.related_pairs, cg.size());
}

TEST(CausalGrid, ReflexiveAndIrreflexive) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {11, 11});
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 3);
  const std::size_t p = cg.node(0, grid.nearest(vec({0, 0})));
  const Reachability r = causal_reachability(cg, p);
  EXPECT_TRUE(r.causal[p]);
  EXPECT_FALSE(r.chronological[p]);
  for (std::size_t i = 0; i < cg.size(); ++i)
    if (r.chronological[i]) EXPECT_TRUE(r.causal[i]);
}

TEST(CausalGrid, SeparationOfStaticObserver) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {21, 21});
  const double h = grid.min_spacing();
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 5, 3 * h);
  const std::size_t c = grid.nearest(vec({0, 0}));
  const double T = 4 * cg.dt();
  EXPECT_NEAR(finsler_separation(cg, cg.node(0, c), cg.node(4, c)), T, 0.05 * T);
}

TEST(CausalGrid, SeparationOutsideFutureIsZero) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {21, 21});
  const double h = grid.min_spacing();
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 3, 3 * h);
  const std::size_t p = cg.node(0, grid.nearest(vec({-0.8, 0})));
  const std::size_t q = cg.node(2, grid.nearest(vec({0.8, 0})));
  EXPECT_EQ(finsler_separation(cg, p, q), 0.0);
  // q earlier than p
  EXPECT_EQ(finsler_separation(cg, q, p), 0.0);
}

TEST(CausalGrid, SeparationAlongLightRayIsZero) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {21, 21});
  const double h = grid.min_spacing();
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 4, 3 * h);
  const std::size_t p = cg.node(0, grid.nearest(vec({-0.5, 0})));
  const std::size_t q = cg.node(3, grid.nearest(vec({-0.5 + 9 * h, 0})));
  EXPECT_NEAR(finsler_separation(cg, p, q), 0.0, 1e-12);
  EXPECT_TRUE(causal_reachability(cg, p).causal[q]);
}

TEST(CausalGrid, TimelikeEdgesAreClassifiedByMidpoint) {
  const StationaryModel sm = product();
  const GridSpec grid = GridSpec::over_chart(sm.chart, {11, 11});
  const CausalGrid cg = CausalGrid::build(sm.spacetime, grid, 2, 3 * grid.min_spacing());
  const std::size_t n = cg.node(0, grid.nearest(vec({0, 0})));
  int light = 0, time = 0;
  for (std::size_t k = 0; k < cg.offsets().size(); ++k) {
    const auto& e = cg.offsets()[k];
    const double r2 = static_cast<double>(e[0] * e[0] + e[1] * e[1]);
    if (cg.kind(n, k) == CausalGrid::EdgeKind::Timelike) {
      ++time;
      EXPECT_LT(r2, 9.0);
    } else if (cg.kind(n, k) == CausalGrid::EdgeKind::Lightlike) {
      ++light;
      EXPECT_NEAR(r2, 9.0, 1e-9);
    } else {
      EXPECT_GT(r2, 9.0);
    }
  }
  EXPECT_GT(time, 0);
  EXPECT_EQ(light, 4);
}
