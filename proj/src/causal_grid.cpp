#include "finsler/causal_grid.hpp"

#include "finsler/finsler_core.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace finsler {

namespace {

std::vector<std::vector<int>> all_offsets(int n, int K) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n), -K);
  for (;;) {
    out.push_back(e);
    std::size_t a = 0;
    while (a < e.size() && ++e[a] > K) e[a++] = -K;
    if (a == e.size()) break;
  }
  return out;
}

std::vector<Vector> direction_fan(int n) {
  std::vector<Vector> dirs;
  if (n == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  // axis and diagonal directions in every coordinate plane
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int k = 0; k < 16; ++k) {
        Vector u = Vector::Zero(n);
        const double ang = 2.0 * std::numbers::pi * k / 16;
        u[a] = std::cos(ang);
        u[b] = std::sin(ang);
        dirs.push_back(u);
      }
  return dirs;
}

// Coordinate speed of light along u at (t, x).
double light_speed(const MetricModel& cone, const Vector& X, const Vector& u) {
  const int n = static_cast<int>(u.size());
  Vector w(n + 1);
  w << 1.0, u;
  if (const auto* p = std::get_if<LorentzianParams>(&cone.params()); p && !cone.is_reversed()) {
    // g00 + 2 s g(e0, u) + s^2 g(u, u) = 0, future root
    const Matrix g = p->g(cone.chart().wrap(X));
    const double a = u.dot(g.block(1, 1, n, n) * u);
    const double b = (g.block(0, 1, 1, n) * u)(0);
    const double c = g(0, 0);
    if (a > 0.0) return (-b + std::sqrt(b * b - a * c)) / a;
  }
  auto causal = [&](double s) {
    Vector v(n + 1);
    v << 1.0, s * u;
    return classify_domain(cone, {X, v}).classification != DomainClass::Outside;
  };
  double hi = 1.0;
  int guard = 0;
  while (causal(hi) && guard++ < 60) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (causal(mid) ? lo : hi) = mid;
  }
  return lo;
}

using Row = std::vector<std::uint64_t>;

inline bool test(const std::uint64_t* row, std::size_t i) { return (row[i >> 6] >> (i & 63)) & 1u; }
inline void set(std::uint64_t* row, std::size_t i) { row[i >> 6] |= std::uint64_t{1} << (i & 63); }

}  // namespace

double max_light_speed(const MetricModel& cone, const GridSpec& spatial, double t) {
  const auto dirs = direction_fan(spatial.dimension());
  const std::size_t stride = std::max<std::size_t>(1, spatial.size() / 2000);
  double vmax = 0.0;
  for (std::size_t i = 0; i < spatial.size(); i += stride) {
    const Vector x = spatial.node(i);
    Vector X(x.size() + 1);
    X << t, x;
    if (!cone.chart().contains(X)) continue;
    for (const auto& u : dirs) vmax = std::max(vmax, light_speed(cone, X, u));
  }
  if (!(vmax > 0.0) || !std::isfinite(vmax))
    throw Error(ErrorCode::InvariantViolation, "no finite light speed on the spatial grid");
  return vmax;
}

CausalGrid CausalGrid::build(const MetricModel& cone, const GridSpec& spatial, int levels, std::optional<double> dt,
                             int K, double t0) {
  if (cone.dimension() != spatial.dimension() + 1)
    throw Error(ErrorCode::UsageError, "causal grid needs a spacetime model over the spatial grid");
  if (levels < 2 || K < 1) throw Error(ErrorCode::UsageError, "causal grid needs >= 2 levels and K >= 1");
  CausalGrid g;
  g.spatial_ = spatial;
  g.levels_ = levels;
  g.K_ = K;
  g.t0_ = t0;
  g.dt_ = dt ? *dt : K * spatial.min_spacing() / max_light_speed(cone, spatial, t0);
  if (!(g.dt_ > 0.0)) throw Error(ErrorCode::UsageError, "time step must be positive");
  g.offsets_ = all_offsets(spatial.dimension(), K);
  const std::size_t m = g.offsets_.size();
  g.kinds_.assign(g.size() * m, EdgeKind::None);
  g.weights_.assign(g.size() * m, 0.0);

  const int n = spatial.dimension();
  std::vector<Vector> chords;
  for (const auto& e : g.offsets_) {
    Vector v(n + 1);
    v[0] = g.dt_;
    for (int a = 0; a < n; ++a) v[a + 1] = e[static_cast<std::size_t>(a)] * spatial.spacing[a];
    chords.push_back(v);
  }
  // all edges must be future directed: the static chord is timelike
  {
    const Vector X = g.position(0);
    Vector up = Vector::Zero(n + 1);
    up[0] = 1.0;
    if (classify_domain(cone, {X, up}).classification != DomainClass::Interior)
      throw Error(ErrorCode::InvariantViolation, "d/dt is not future timelike; edges would not be future directed");
  }
  for (int l = 0; l + 1 < levels; ++l) {
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      const std::size_t u = g.node(l, i);
      const Vector X = g.position(u);
      if (!cone.chart().contains(X)) continue;
      for (std::size_t k = 0; k < m; ++k) {
        const auto j = spatial.neighbor(i, g.offsets_[k]);
        if (!j) continue;
        const Vector Y = g.position(g.node(l + 1, *j));
        if (!cone.chart().contains(Y)) continue;
        const Vector mid = X + 0.5 * chords[k];
        const auto c = classify_domain(cone, {mid, chords[k]}).classification;
        if (c == DomainClass::Interior) {
          g.kinds_[u * m + k] = EdgeKind::Timelike;
          g.weights_[u * m + k] = std::sqrt(std::max(0.0, lagrangian_value(cone, mid, chords[k])));
        } else if (c == DomainClass::Boundary) {
          g.kinds_[u * m + k] = EdgeKind::Lightlike;
        }
      }
    }
  }
  return g;
}

Vector CausalGrid::position(std::size_t node) const {
  const Vector x = spatial_.node(spatial_of(node));
  Vector X(x.size() + 1);
  X << t0_ + level_of(node) * dt_, x;
  return X;
}

std::optional<std::size_t> CausalGrid::target(std::size_t node, std::size_t k) const {
  const int l = level_of(node);
  if (l + 1 >= levels_) return std::nullopt;
  const auto j = spatial_.neighbor(spatial_of(node), offsets_[k]);
  if (!j) return std::nullopt;
  return this->node(l + 1, *j);
}

std::size_t CausalGrid::edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(kinds_.begin(), kinds_.end(), [](EdgeKind k) { return k != EdgeKind::None; }));
}

Reachability causal_reachability(const CausalGrid& grid, std::size_t p) {
  Reachability r;
  r.causal.assign(grid.size(), 0);
  r.chronological.assign(grid.size(), 0);
  r.causal[p] = 1;
  const std::size_t S = grid.spatial_size();
  for (int l = grid.level_of(p); l + 1 < grid.levels(); ++l) {
    for (std::size_t i = 0; i < S; ++i) {
      const std::size_t u = grid.node(l, i);
      if (!r.causal[u]) continue;
      for (std::size_t k = 0; k < grid.offsets().size(); ++k) {
        const auto kind = grid.kind(u, k);
        if (kind == CausalGrid::EdgeKind::None) continue;
        const std::size_t v = *grid.target(u, k);
        r.causal[v] = 1;
        if (kind == CausalGrid::EdgeKind::Timelike || r.chronological[u]) r.chronological[v] = 1;
      }
    }
  }
  return r;
}

RelationCheck check_relations(const CausalGrid& grid) {
  RelationCheck rc;
  const std::size_t N = grid.size(), S = grid.spatial_size(), W = (N + 63) / 64;
  const std::size_t m = grid.offsets().size();
  const int L = grid.levels();
  rc.nodes = N;
  using Kind = CausalGrid::EdgeKind;

  // J+ rows for every node, top level down
  std::vector<std::uint64_t> J(N * W, 0);
  auto jrow = [&](std::size_t u) { return J.data() + u * W; };
  for (int l = L - 1; l >= 0; --l) {
    for (std::size_t i = 0; i < S; ++i) {
      const std::size_t u = grid.node(l, i);
      std::uint64_t* row = jrow(u);
      set(row, u);
      for (std::size_t k = 0; k < m; ++k) {
        if (grid.kind(u, k) == Kind::None) continue;
        const std::uint64_t* tr = jrow(*grid.target(u, k));
        for (std::size_t w = grid.node(l + 1, 0) / 64; w < W; ++w) row[w] |= tr[w];
      }
    }
  }

  // I+ rows, two levels at a time; compared against J+
  std::vector<std::uint64_t> Icur(S * W), Inext(S * W, 0);
  for (int l = L - 1; l >= 0; --l) {
    std::fill(Icur.begin(), Icur.end(), 0);
    for (std::size_t i = 0; i < S; ++i) {
      const std::size_t u = grid.node(l, i);
      std::uint64_t* row = Icur.data() + i * W;
      for (std::size_t k = 0; k < m; ++k) {
        const Kind kind = grid.kind(u, k);
        if (kind == Kind::None) continue;
        const std::size_t v = *grid.target(u, k);
        const std::uint64_t* src = kind == Kind::Timelike ? jrow(v) : Inext.data() + grid.spatial_of(v) * W;
        const std::uint64_t* inx = Inext.data() + grid.spatial_of(v) * W;
        for (std::size_t w = grid.node(l + 1, 0) / 64; w < W; ++w) row[w] |= src[w] | inx[w];
      }
      const std::uint64_t* jr = jrow(u);
      for (std::size_t w = 0; w < W; ++w) rc.chronological_not_causal += static_cast<std::size_t>(std::popcount(row[w] & ~jr[w]));
      if (test(row, u)) ++rc.reflexive_chronology;
    }
    std::swap(Icur, Inext);
  }

  // reflexivity, edge closure, pair count
  for (std::size_t u = 0; u < N; ++u) {
    const std::uint64_t* row = jrow(u);
    if (!test(row, u)) ++rc.missing_reflexivity;
    for (std::size_t w = 0; w < W; ++w) rc.related_pairs += static_cast<std::size_t>(std::popcount(row[w]));
    for (std::size_t k = 0; k < m; ++k) {
      if (grid.kind(u, k) == Kind::None) continue;
      const std::size_t v = *grid.target(u, k);
      const std::uint64_t* tr = jrow(v);
      for (std::size_t w = v / 64; w < W; ++w)
        if (tr[w] & ~row[w]) {
          ++rc.closure_failures;
          break;
        }
    }
  }

  // J- computed forward, two levels at a time, must be the transpose of J+
  std::vector<std::uint64_t> Pprev(S * W, 0), Pcur(S * W);
  for (int l = 0; l < L; ++l) {
    std::fill(Pcur.begin(), Pcur.end(), 0);
    for (std::size_t i = 0; i < S; ++i) set(Pcur.data() + i * W, grid.node(l, i));
    if (l > 0) {
      for (std::size_t i = 0; i < S; ++i) {
        const std::size_t u = grid.node(l - 1, i);
        for (std::size_t k = 0; k < m; ++k) {
          if (grid.kind(u, k) == Kind::None) continue;
          const std::size_t v = *grid.target(u, k);
          std::uint64_t* dst = Pcur.data() + grid.spatial_of(v) * W;
          const std::uint64_t* src = Pprev.data() + i * W;
          const std::size_t end = std::min(W, (grid.node(l, 0) + 63) / 64 + 1);
          for (std::size_t w = 0; w < end; ++w) dst[w] |= src[w];
        }
      }
    }
    const std::size_t upto = grid.node(l, 0) + S;
    for (std::size_t u = 0; u < upto; ++u) {
      const std::uint64_t* jr = jrow(u);
      for (std::size_t i = 0; i < S; ++i)
        if (test(Pcur.data() + i * W, u) != test(jr, grid.node(l, i))) ++rc.transpose_mismatches;
    }
    std::swap(Pcur, Pprev);
  }
  return rc;
}

double finsler_separation(const CausalGrid& grid, std::size_t p, std::size_t q) {
  if (grid.level_of(q) < grid.level_of(p)) return 0.0;
  const double none = -std::numeric_limits<double>::infinity();
  std::vector<double> best(grid.size(), none);
  best[p] = 0.0;
  const std::size_t S = grid.spatial_size();
  for (int l = grid.level_of(p); l < grid.level_of(q); ++l) {
    for (std::size_t i = 0; i < S; ++i) {
      const std::size_t u = grid.node(l, i);
      if (best[u] == none) continue;
      for (std::size_t k = 0; k < grid.offsets().size(); ++k) {
        const auto kind = grid.kind(u, k);
        if (kind == CausalGrid::EdgeKind::None) continue;
        const std::size_t v = *grid.target(u, k);
        const double c = best[u] + (kind == CausalGrid::EdgeKind::Timelike ? grid.weight(u, k) : 0.0);
        if (c > best[v]) best[v] = c;
      }
    }
  }
  return best[q] == none ? 0.0 : best[q];
}

}  // namespace finsler
