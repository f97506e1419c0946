#include "finsler/distance_field.hpp"

#include "finsler/finsler_core.hpp"
#include "finsler/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>

namespace finsler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_domain(const MetricModel& m) {
  switch (m.family()) {
    case Family::Matsumoto:
    case Family::Tabulated:
    case Family::Bogoslovsky:
    case Family::Kostelecky:
    case Family::Lorentzian:
      return true;
    default:
      return false;
  }
}

// F at (x, d), +inf where d is not an admissible direction.
double speed(const MetricModel& model, bool domain, const Vector& x, const Vector& d) {
  if (domain && classify_domain(model, {x, d}).classification != DomainClass::Interior) return kInf;
  const double L = lagrangian_value(model, x, d);
  if (!(L > 0.0) || !std::isfinite(L)) return kInf;
  return std::sqrt(L);
}

Vector physical(const std::vector<int>& e, const GridSpec& g) {
  Vector d(g.dimension());
  for (int a = 0; a < g.dimension(); ++a) d[a] = e[static_cast<std::size_t>(a)] * g.spacing[a];
  return d;
}

double sign_of(FieldDirection d) { return d == FieldDirection::Forward ? 1.0 : -1.0; }

bool node_allowed(const MetricModel& model, const std::optional<Region>& restrict_to, const Vector& x) {
  if (!model.chart().contains(x)) return false;
  return !restrict_to || restrict_to->contains(x);
}

// Mean F-length of the axis offsets at x: the local size of one cell.
double cell_scale(const MetricModel& model, bool domain, const GridSpec& grid, const Vector& x) {
  double sum = 0.0;
  int count = 0;
  for (int a = 0; a < grid.dimension(); ++a) {
    for (double s : {-1.0, 1.0}) {
      Vector d = Vector::Zero(grid.dimension());
      d[a] = s * grid.spacing[a];
      const double f = speed(model, domain, x, d);
      if (std::isfinite(f)) {
        sum += f;
        ++count;
      }
    }
  }
  return count ? sum / count : grid.min_spacing();
}

}  // namespace

std::string_view to_string(FieldDirection d) { return d == FieldDirection::Forward ? "fwd" : "rev"; }

FieldSource FieldSource::at(Vector p) {
  FieldSource s;
  s.point = std::move(p);
  return s;
}

FieldSource FieldSource::inside(Region r) {
  FieldSource s;
  s.region = std::move(r);
  return s;
}

FieldSource FieldSource::of_nodes(std::vector<std::size_t> nodes) {
  FieldSource s;
  s.nodes = std::move(nodes);
  return s;
}

std::string FieldSource::description() const {
  if (point) {
    std::string out = "point(";
    for (Eigen::Index i = 0; i < point->size(); ++i) out += (i ? "," : "") + std::to_string((*point)[i]);
    return out + ")";
  }
  if (region) return "region(" + region->description() + ")";
  return "nodes(" + std::to_string(nodes.size()) + ")";
}

StencilReport stencil_report(const GridSpec& grid, int order) {
  const auto offs = stencil_offsets(grid.dimension(), order);
  StencilReport r;
  r.offsets = static_cast<int>(offs.size());
  const int n = grid.dimension();
  if (n == 1) return r;
  std::vector<Vector> dirs;
  for (const auto& e : offs) dirs.push_back(physical(e, grid).normalized());
  if (n == 2) {
    std::vector<double> ang;
    for (const auto& d : dirs) ang.push_back(std::atan2(d[1], d[0]));
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2.0 * std::numbers::pi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    r.max_angular_gap = gap / 2.0;
  } else {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int s = 0; s < 4000; ++s) {
      Vector u(n);
      for (int i = 0; i < n; ++i) u[i] = nd(rng);
      u.normalize();
      double best = -1.0;
      for (const auto& d : dirs) best = std::max(best, u.dot(d));
      r.max_angular_gap = std::max(r.max_angular_gap, std::acos(std::clamp(best, -1.0, 1.0)));
    }
  }
  r.anisotropy_ratio = 1.0 / std::cos(r.max_angular_gap);
  return r;
}

std::vector<Vector> DistanceField::trace(std::size_t node) const {
  std::vector<Vector> pts{grid.node(node)};
  std::size_t cur = node;
  while (parent[cur] != kNoParent) {
    const auto& e = offsets[static_cast<std::size_t>(parent_offset[cur])];
    pts.push_back(pts.back() - physical(e, grid));
    cur = parent[cur];
  }
  return pts;
}

std::size_t DistanceField::reached() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return std::isfinite(v); }));
}

DistanceField distance_field(const MetricModel& model, const FieldSource& source, const GridSpec& grid,
                             const FieldOptions& options) {
  if (grid.dimension() != model.dimension())
    throw Error(ErrorCode::UsageError, "grid dimension does not match the model");
  if (options.stencil < 1) throw Error(ErrorCode::UsageError, "stencil order must be at least 1");
  const bool domain = has_domain(model);
  const double s = sign_of(options.direction);
  const std::size_t N = grid.size();

  DistanceField f;
  f.grid = grid;
  f.direction = options.direction;
  f.stencil = options.stencil;
  f.source = source.description();
  f.values.assign(N, kInf);
  f.parent.assign(N, kNoParent);
  f.parent_offset.assign(N, -1);
  f.offsets = stencil_offsets(grid.dimension(), options.stencil);
  f.report = stencil_report(grid, options.stencil);
  f.settle_order.reserve(N);

  std::vector<char> allowed(N);
  for (std::size_t i = 0; i < N; ++i) allowed[i] = node_allowed(model, options.restrict_to, grid.node(i));

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  auto seed = [&](std::size_t node, double value) {
    if (value < f.values[node]) {
      f.values[node] = value;
      pq.emplace(value, node);
    }
  };

  if (source.point) {
    const Vector& p = *source.point;
    if (p.size() != grid.dimension()) throw Error(ErrorCode::UsageError, "source dimension mismatch");
    const std::size_t near = grid.nearest(p);
    if (model.chart().displacement(grid.node(near), p).norm() <= 1e-12 * grid.min_spacing()) {
      seed(near, 0.0);
    } else {
      const auto base = grid.cell(p);
      const int n = grid.dimension();
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> off(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) off[static_cast<std::size_t>(a)] = (mask >> a) & 1;
        auto y = grid.neighbor(grid.flat_index(base), off);
        if (!y || !allowed[*y]) continue;
        const Vector d = model.chart().displacement(p, grid.node(*y));
        seed(*y, speed(model, domain, p, s * d));
      }
    }
  } else if (source.region) {
    for (std::size_t i = 0; i < N; ++i)
      if (source.region->contains(grid.node(i))) seed(i, 0.0);
  } else {
    for (std::size_t i : source.nodes) {
      if (i >= N) throw Error(ErrorCode::UsageError, "source node outside the grid");
      seed(i, 0.0);
    }
  }
  for (std::size_t i = 0; i < N; ++i)
    if (std::isfinite(f.values[i])) f.source_nodes.push_back(i);
  if (f.source_nodes.empty()) throw Error(ErrorCode::UsageError, "field source covers no grid node");

  std::vector<Vector> steps;
  for (const auto& e : f.offsets) steps.push_back(s * physical(e, grid));

  std::vector<char> settled(N, 0);
  while (!pq.empty()) {
    const auto [d, z] = pq.top();
    pq.pop();
    if (settled[z] || d > f.values[z]) continue;
    settled[z] = 1;
    f.settle_order.push_back(z);
    const Vector xz = grid.node(z);
    for (std::size_t k = 0; k < f.offsets.size(); ++k) {
      const auto y = grid.neighbor(z, f.offsets[k]);
      if (!y || settled[*y] || !allowed[*y]) continue;
      const double cost = 0.5 * (speed(model, domain, xz, steps[k]) + speed(model, domain, grid.node(*y), steps[k]));
      if (!std::isfinite(cost)) continue;
      const double nv = d + cost;
      if (nv < f.values[*y]) {
        f.values[*y] = nv;
        f.parent[*y] = z;
        f.parent_offset[*y] = static_cast<int>(k);
        pq.emplace(nv, *y);
      }
    }
  }
  return f;
}

double field_value(const MetricModel& model, const DistanceField& field, const Vector& q) {
  const GridSpec& g = field.grid;
  const bool domain = has_domain(model);
  const double s = sign_of(field.direction);
  const auto base = g.cell(q);
  const int n = g.dimension();
  const int k = field.stencil;
  std::vector<int> off(static_cast<std::size_t>(n), -k);
  double best = kInf;
  const std::size_t b = g.flat_index(base);
  for (;;) {
    if (auto y = g.neighbor(b, off); y && std::isfinite(field.values[*y])) {
      const Vector xy = g.node(*y);
      const Vector d = model.chart().displacement(xy, q);
      const double tail = d.norm() == 0.0 ? 0.0 : speed(model, domain, xy, s * d);
      best = std::min(best, field.values[*y] + tail);
    }
    std::size_t a = 0;
    while (a < off.size() && ++off[a] > k + 1) off[a++] = -k;
    if (a == off.size()) break;
  }
  return best;
}

GridSpec default_grid(const MetricModel& model, int per_axis) {
  const int n = model.dimension();
  if (per_axis <= 0) per_axis = n == 1 ? 1001 : n == 2 ? 121 : n == 3 ? 41 : 15;
  return GridSpec::over_chart(model.chart(), std::vector<int>(static_cast<std::size_t>(n), per_axis));
}

double field_distance(const MetricModel& model, const Vector& p, const Vector& q, const GridSpec& grid,
                      int stencil) {
  if (p == q) return 0.0;
  const auto f = distance_field(model, FieldSource::at(p), grid, {stencil, FieldDirection::Forward, {}});
  return field_value(model, f, q);
}

double symmetrized_distance(const MetricModel& model, const Vector& p, const Vector& q, const GridSpec& grid,
                            int stencil) {
  if (p == q) return 0.0;
  const bool p_first = std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end());
  const Vector& a = p_first ? p : q;
  const Vector& b = p_first ? q : p;
  const auto fwd = distance_field(model, FieldSource::at(a), grid, {stencil, FieldDirection::Forward, {}});
  const auto rev = distance_field(model, FieldSource::at(a), grid, {stencil, FieldDirection::Reverse, {}});
  const double ab = field_value(model, fwd, b);
  const double ba = field_value(model, rev, b);
  if (!std::isfinite(ab) || !std::isfinite(ba))
    throw Error(ErrorCode::Unreachable, "one-way distance is infinite");
  return 0.5 * (ab + ba);
}

CutLocusReport cut_locus_probe(const MetricModel& model, const Vector& p, const GridSpec& grid,
                               const CutLocusOptions& o) {
  const auto field = distance_field(model, FieldSource::at(p), grid, {o.stencil, FieldDirection::Forward, {}});
  const bool domain = has_domain(model);
  const double cos_spread = std::cos(o.spread_degrees * std::numbers::pi / 180.0);
  CutLocusReport rep;
  std::vector<Vector> steps, units;
  for (const auto& e : field.offsets) {
    steps.push_back(physical(e, grid));
    units.push_back(steps.back().normalized());
  }
  for (std::size_t y = 0; y < grid.size(); ++y) {
    const double vy = field.values[y];
    if (!std::isfinite(vy) || field.parent[y] == kNoParent || grid.on_outer_layer(y)) continue;
    const Vector xy = grid.node(y);
    const double cell = cell_scale(model, domain, grid, xy);
    if (vy < 2.0 * o.stencil * cell) continue;  // too close to the source to resolve
    const double slack = o.slack_cells * cell;
    std::vector<std::size_t> near;
    for (std::size_t k = 0; k < field.offsets.size(); ++k) {
      std::vector<int> back = field.offsets[k];
      for (int& c : back) c = -c;
      const auto z = grid.neighbor(y, back);
      if (!z || !std::isfinite(field.values[*z])) continue;
      const double cost = 0.5 * (speed(model, domain, grid.node(*z), steps[k]) + speed(model, domain, xy, steps[k]));
      if (field.values[*z] + cost <= vy + slack) near.push_back(k);
    }
    bool spread = false;
    for (std::size_t i = 0; i < near.size() && !spread; ++i)
      for (std::size_t j = i + 1; j < near.size(); ++j)
        if (units[near[i]].dot(units[near[j]]) < cos_spread) { spread = true; break; }
    if (spread) rep.flagged.push_back(y);
  }

  if (o.validation_budget > 0 && !rep.flagged.empty()) {
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(o.validation_budget), rep.flagged.size());
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t node = rep.flagged[(2 * i + 1) * rep.flagged.size() / (2 * m)];
      rep.checked_nodes.push_back(node);
      ++rep.checked;
      try {
        const auto geos = shoot(model, p, grid.node(node));
        if (geos.size() >= 2 &&
            (geos[1].length - geos[0].length) <= o.equal_length_tolerance * geos[0].length)
          ++rep.confirmed;
      } catch (const Error&) {
      }
    }
  }
  return rep;
}

}  // namespace finsler
