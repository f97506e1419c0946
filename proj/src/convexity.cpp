#include "finsler/convexity.hpp"

#include "finsler/distance_field.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace finsler {

std::string_view to_string(PairVerdict v) {
  switch (v) {
    case PairVerdict::Inside: return "inside";
    case PairVerdict::ExitsD: return "exits";
    case PairVerdict::NoConnection: return "no-connection";
  }
  return "unknown";
}

namespace {

double segment_distance(const Vector& c, const Vector& a, const Vector& b, Vector& closest) {
  const Vector ab = b - a;
  const double l2 = ab.squaredNorm();
  const double t = l2 > 0.0 ? std::clamp((c - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
  closest = a + t * ab;
  return (c - closest).norm();
}

}  // namespace

std::optional<Vector> leaves_region(const MetricModel& model, const Geodesic& g, const Region& D) {
  const Chart& chart = model.chart();
  std::vector<double> times(400);
  const double T = g.samples.back().t;
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = T * static_cast<double>(k + 1) / times.size();
  std::vector<Vector> pts;
  try {
    const Geodesic dense = integrate_parameter(model, g.start(), g.initial_velocity(), T, {}, times);
    for (const auto& s : dense.samples) pts.push_back(s.x);
  } catch (const Error&) {
    for (const auto& s : g.samples) pts.push_back(s.x);
  }
  for (const auto& x : pts)
    if (!D.contains(chart.wrap(x))) return chart.wrap(x);
  // Isolated deleted points: closest approach of the polyline.
  double extent = 0.0;
  for (const auto& iv : chart.box) extent = std::max(extent, iv.width());
  const double tol = 1e-6 * std::max(1.0, extent);
  for (const auto& c : D.deleted_points()) {
    Vector closest;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Vector a = chart.wrap(pts[i]);
      const Vector b = a + (pts[i + 1] - pts[i]);
      if (segment_distance(c, a, b, closest) <= tol) return c;
    }
  }
  return std::nullopt;
}

ConvexityReport convexity_check(const MetricModel& model, const Region& D, const ConvexityOptions& o) {
  const Chart& chart = model.chart();
  const int n = model.dimension();
  const MetricModel free = model.without_region();
  ConvexityReport rep;
  rep.region = D.description();

  auto inside = [&](const Vector& x) { return chart.contains(x) && D.contains(chart.wrap(x)); };
  std::vector<std::pair<Vector, Vector>> pairs;
  for (const auto& pq : o.pairs) pairs.push_back(pq);

  double extent = 0.0;
  for (const auto& iv : chart.box) extent = std::max(extent, iv.width());
  if (o.probe_deleted_points) {
    for (const auto& c : D.deleted_points()) {
      for (int k = 0; k < 4; ++k) {
        Vector u = Vector::Zero(n);
        if (n == 1) {
          u[0] = 1.0;
        } else {
          const double a = std::numbers::pi * (k + 0.5) / 4.0;
          u[0] = std::cos(a);
          u[1] = std::sin(a);
        }
        const double r = 0.2 * extent;
        const Vector p = c - r * u, q = c + r * u;
        if (inside(p) && inside(q)) pairs.emplace_back(p, q);
      }
    }
  }

  std::mt19937_64 rng(o.seed);
  auto sample_point = [&]() -> std::optional<Vector> {
    for (int attempt = 0; attempt < 2000; ++attempt) {
      Vector x(n);
      for (int a = 0; a < n; ++a) {
        const auto& iv = chart.box[static_cast<std::size_t>(a)];
        // stay a little inside the box so shooting has room
        const double m = chart.is_periodic(a) ? 0.0 : 0.02 * iv.width();
        std::uniform_real_distribution<double> u(iv.lo + m, iv.hi - m);
        x[a] = u(rng);
      }
      if (inside(x)) return x;
    }
    return std::nullopt;
  };
  for (int k = 0; k < o.pair_budget; ++k) {
    auto p = sample_point();
    auto q = sample_point();
    if (!p || !q) break;
    pairs.emplace_back(*p, *q);
  }

  const GridSpec grid = default_grid(model, o.grid_per_axis);
  for (const auto& [p, q] : pairs) {
    ConvexityPair cp;
    cp.p = p;
    cp.q = q;
    ShootOptions so = o.shoot;
    try {
      const auto field = distance_field(model, FieldSource::at(p), grid, {3, FieldDirection::Forward, D});
      const auto path = field.trace(grid.nearest(q));
      if (path.size() >= 2 && std::isfinite(field.values[grid.nearest(q)])) {
        // path runs from q back to the source; its last step leaves p
        so.hint = Vector(path[path.size() - 2] - path.back());
      }
    } catch (const Error&) {
    }
    try {
      const auto geos = shoot(free, p, q, so);
      const Geodesic& g = geos.front();
      cp.length = g.length;
      if (auto w = leaves_region(free, g, D)) {
        cp.verdict = PairVerdict::ExitsD;
        cp.witness = *w;
        rep.counterexamples.push_back(rep.pairs.size());
      } else {
        cp.verdict = PairVerdict::Inside;
      }
    } catch (const Error&) {
      cp.verdict = PairVerdict::NoConnection;
      ++rep.no_connection;
    }
    rep.pairs.push_back(std::move(cp));
  }
  rep.convex = rep.counterexamples.empty();
  return rep;
}

}  // namespace finsler
