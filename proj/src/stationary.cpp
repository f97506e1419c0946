#include "finsler/stationary.hpp"

#include "finsler/finsler_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace finsler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fermat_speed(const StationaryModel& sm, const Vector& x, const Vector& u) {
  if (u.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return std::sqrt(std::max(0.0, lagrangian_value(sm.fermat, x, u)));
}

Vector spacetime_point(double t, const Vector& x) {
  Vector X(x.size() + 1);
  X << t, x;
  return X;
}

Vector central_gradient(const ScalarField& f, const Vector& x) {
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

CausalCharacter combine(CausalCharacter a, CausalCharacter b) {
  using C = CausalCharacter;
  if (a == b && (a == C::Timelike || a == C::Lightlike)) return a;
  const auto causal = [](C c) { return c == C::Timelike || c == C::Lightlike || c == C::Causal; };
  return causal(a) && causal(b) ? C::Causal : C::None;
}

std::vector<Vector> fan(int n, int count, std::mt19937_64& rng) {
  std::vector<Vector> out;
  std::normal_distribution<double> nd;
  for (int k = 0; k < count; ++k) {
    Vector u(n);
    if (n == 1) {
      u[0] = k % 2 ? -1.0 : 1.0;
    } else if (n == 2) {
      const double a = 2.0 * std::numbers::pi * k / count;
      u << std::cos(a), std::sin(a);
    } else {
      for (int i = 0; i < n; ++i) u[i] = nd(rng);
      u.normalize();
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace

std::string_view to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
    case CausalCharacter::Causal: return "causal";
    case CausalCharacter::Null: return "null";
    case CausalCharacter::None: return "none";
  }
  return "none";
}

Matrix StationaryModel::lorentz_metric(const Vector& x) const {
  const Eigen::Index m = x.size();
  Matrix g(m + 1, m + 1);
  g(0, 0) = -1.0;
  const Vector om = omega(x);
  g.block(1, 0, m, 1) = om;
  g.block(0, 1, 1, m) = om.transpose();
  g.block(1, 1, m, m) = g0(x);
  return g;
}

StationaryModel build_stationary(const Chart& chart, MatrixField g0, VectorField omega, DerivativeMode mode) {
  std::vector<Vector> points;
  try {
    points = MetricModel::riemannian(chart, g0).lattice_samples(5);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidCoefficients, std::string("g0: ") + e.what());
  }
  const int n = chart.dimension();
  for (const auto& x0 : points) {
    const Vector x = chart.wrap(x0);
    const Vector om = omega(x);
    if (om.size() != n || !om.allFinite())
      throw Error(ErrorCode::InvalidCoefficients, "omega has the wrong size or is not finite");
    Matrix gl(n + 1, n + 1);
    gl(0, 0) = -1.0;
    gl.block(1, 0, n, 1) = om;
    gl.block(0, 1, 1, n) = om.transpose();
    gl.block(1, 1, n, n) = g0(x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gl, Eigen::EigenvaluesOnly);
    const Signature sig = signature_of(es.eigenvalues(), kZeroEigenvalueTolerance);
    if (!(sig == Signature{n, 1, 0}))
      throw Error(ErrorCode::InvalidCoefficients, "g_L is not Lorentzian at a lattice sample");
  }
  StationaryModel sm{chart, g0, omega,
                     MetricModel::fermat(chart, g0, omega, Orientation::Forward, mode),
                     MetricModel::fermat(chart, g0, omega, Orientation::Forward, mode).reversed(),
                     stationary_spacetime(chart, g0, omega)};
  return sm;
}

StationaryModel stationary_from_zermelo(const Chart& chart, MatrixField g, VectorField wind, DerivativeMode mode) {
  auto lambda = [g, wind](const Vector& x) {
    const Vector w = wind(x);
    return 1.0 - w.dot(g(x) * w);
  };
  MatrixField g0 = [g, lambda](const Vector& x) { return Matrix(g(x) / lambda(x)); };
  VectorField omega = [g, wind, lambda](const Vector& x) { return Vector(-(g(x) * wind(x)) / lambda(x)); };
  return build_stationary(chart, std::move(g0), std::move(omega), mode);
}

VectorClass classify_vector(const StationaryModel& sm, const Vector& x, const Vector& v) {
  VectorClass c;
  const int n = sm.spatial_dimension();
  if (v.size() != n + 1) throw Error(ErrorCode::UsageError, "spacetime vector has the wrong size");
  c.lorentz_norm = v.dot(sm.lorentz_metric(x) * v);
  if (v.cwiseAbs().maxCoeff() == 0.0) {
    c.character = CausalCharacter::Null;
    return c;
  }
  const double vt = v[0];
  const Vector vx = v.tail(n);
  c.margin = vt - fermat_speed(sm, x, vx);
  const double band = kBoundaryBand * std::max(std::abs(vt), vx.norm());
  if (c.margin > band) c.character = CausalCharacter::Timelike;
  else if (c.margin >= -band && vt > 0.0) c.character = CausalCharacter::Lightlike;
  else c.character = CausalCharacter::None;
  return c;
}

VectorClass classify_vector(const MetricModel& cone, const Vector& point, const Vector& v) {
  VectorClass c;
  if (v.cwiseAbs().maxCoeff() == 0.0) {
    c.character = CausalCharacter::Null;
    return c;
  }
  const DomainVerdict d = classify_domain(cone, {point, v});
  c.margin = d.margin;
  c.character = d.classification == DomainClass::Interior   ? CausalCharacter::Timelike
                : d.classification == DomainClass::Boundary ? CausalCharacter::Lightlike
                                                            : CausalCharacter::None;
  return c;
}

SpacetimeCurve lift(const StationaryModel& sm, const std::vector<GeodesicSample>& curve, bool forward,
                    bool is_geodesic, double unit_tolerance) {
  SpacetimeCurve out;
  out.past_directed = !forward;
  const double sign = forward ? 1.0 : -1.0;
  const MetricModel& planar = forward ? sm.fermat : sm.reverse;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& s = curve[i];
    const double F = std::sqrt(std::max(0.0, lagrangian_value(planar, s.x, s.v)));
    if (!(std::abs(F - 1.0) <= unit_tolerance))
      throw Error(ErrorCode::NotUnitSpeed, "curve speed " + std::to_string(F) + " at sample " + std::to_string(i));
    SpacetimeSample st;
    st.s = s.t;
    st.x = spacetime_point(sign * s.t, s.x);
    st.v = spacetime_point(sign, s.v);
    const Vector future = sign * st.v;
    st.character = classify_vector(sm, s.x, future).character;
    out.max_nullity = std::max(out.max_nullity, std::abs(st.v.dot(sm.lorentz_metric(sm.chart.wrap(s.x)) * st.v)));
    out.samples.push_back(std::move(st));
  }
  for (std::size_t i = 1; i < out.samples.size(); ++i)
    out.segments.push_back(combine(out.samples[i - 1].character, out.samples[i].character));

  if (is_geodesic) {
    double worst = 0.0;
    for (const auto& s : curve) {
      // the curve's own acceleration from its geodesic equation, lifted
      const Vector ax = geodesic_acceleration(planar, s.x, s.v);
      const Vector A = spacetime_point(0.0, ax);
      const Vector X = spacetime_point(sign * s.t, s.x);
      const Vector V = spacetime_point(sign, s.v);
      const Vector r = A - geodesic_acceleration(sm.spacetime, X, V);
      const Vector perp = r - (r.dot(V) / V.dot(V)) * V;
      worst = std::max(worst, perp.norm());
    }
    out.pregeodesic_residual = worst;
  }
  return out;
}

FutureSlice chronological_future_slice(const StationaryModel& sm, const Vector& p, double t0, const GridSpec& grid,
                                       bool past, int stencil) {
  if (!(t0 > 0.0)) throw Error(ErrorCode::UsageError, "slice time must be positive");
  auto field = std::make_shared<DistanceField>(
      distance_field(sm.fermat, FieldSource::at(p), grid,
                     {stencil, past ? FieldDirection::Reverse : FieldDirection::Forward, {}}));
  std::vector<char> mask(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) mask[i] = field->values[i] < t0;
  const MetricModel model = sm.fermat;
  Region region([field, model, t0](const Vector& x) { return field_value(model, *field, x) < t0; },
                std::string(past ? "I-" : "I+") + " slice at |t|=" + std::to_string(t0));
  return FutureSlice{*field, t0, past, std::move(mask), std::move(region)};
}

HorizonGraph cauchy_horizon(const StationaryModel& sm, const Region& A, const GridSpec& grid, int stencil) {
  HorizonGraph h;
  h.grid = grid;
  h.region = A.description();
  const std::size_t N = grid.size();
  std::vector<char> inA(N);
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < N; ++i) {
    const Vector x = grid.node(i);
    inA[i] = A.contains(x);
    if (!inA[i] && sm.chart.contains(x)) sources.push_back(i);
  }
  if (sources.empty()) throw Error(ErrorCode::EmptyComplement, "the complement of A has no grid node");
  const auto field = distance_field(sm.fermat, FieldSource::of_nodes(sources), grid, {stencil, FieldDirection::Forward, {}});
  h.values = field.values;
  h.in_closure.assign(N, 0);
  const int n = grid.dimension();
  double apex = -1.0;
  for (std::size_t i = 0; i < N; ++i) {
    bool edge = false;
    for (int a = 0; a < n && !edge; ++a) {
      for (int s : {-1, 1}) {
        std::vector<int> off(static_cast<std::size_t>(n), 0);
        off[static_cast<std::size_t>(a)] = s;
        if (auto j = grid.neighbor(i, off); j && inA[*j] != inA[i]) { edge = true; break; }
      }
    }
    h.in_closure[i] = inA[i] || edge;
    if (!inA[i]) continue;
    if (std::isfinite(h.values[i]) && h.values[i] > apex) {
      apex = h.values[i];
      h.apex = i;
    }
    if (edge) h.boundary_max = std::max(h.boundary_max, h.values[i]);
  }
  h.apex_value = std::max(apex, 0.0);
  return h;
}

LadderReport causal_ladder_report(const StationaryModel& sm, const LadderOptions& o) {
  LadderReport rep;
  const Chart& chart = sm.chart;
  const int n = chart.dimension();
  const std::vector<Vector> centers = o.centers.empty() ? std::vector<Vector>{chart.center()} : o.centers;
  const Region D = chart.region.value_or(Region::everything());

  LadderFinding cc;
  cc.name = "causally-continuous";
  cc.clause = "every standard stationary spacetime is causally continuous";
  cc.proxy = false;
  cc.computed = false;
  cc.detail = "cited statement; no finite certificate exists, nothing is computed";
  rep.findings.push_back(cc);

  ConvexityOptions co;
  co.pair_budget = o.pair_budget;
  co.seed = o.seed;
  co.grid_per_axis = o.grid_per_axis;
  rep.convexity = convexity_check(sm.fermat, D, co);
  LadderFinding conv;
  conv.name = "causally-simple";
  conv.clause = "causally simple iff (M, F) is convex";
  conv.passed = rep.convexity.convex;
  if (!conv.passed) conv.witness = rep.convexity.pairs[rep.convexity.counterexamples.front()].witness;
  conv.detail = "proxy: geometric convexity of the chart interior on " + std::to_string(rep.convexity.pairs.size()) +
                " sampled pairs (" + std::to_string(rep.convexity.counterexamples.size()) + " counterexamples, " +
                std::to_string(rep.convexity.no_connection) + " without connection)";
  rep.findings.push_back(conv);

  LadderFinding gh;
  gh.name = "globally-hyperbolic";
  gh.clause = "globally hyperbolic iff closed balls of the symmetrized distance are compact";
  const GridSpec grid = default_grid(sm.fermat, o.grid_per_axis);
  for (const auto& c : centers) {
    if (!gh.passed) break;
    const auto fwd = distance_field(sm.fermat, FieldSource::at(c), grid, {3, FieldDirection::Forward, {}});
    const auto rev = distance_field(sm.fermat, FieldSource::at(c), grid, {3, FieldDirection::Reverse, {}});
    for (std::size_t i = 0; i < grid.size() && gh.passed; ++i) {
      const double ds = 0.5 * (fwd.values[i] + rev.values[i]);
      if (!(ds <= o.radius)) continue;
      bool touches = grid.on_outer_layer(i);
      for (int a = 0; a < n && !touches; ++a)
        for (int s : {-1, 1}) {
          std::vector<int> off(static_cast<std::size_t>(n), 0);
          off[static_cast<std::size_t>(a)] = s;
          auto j = grid.neighbor(i, off);
          if (j && !chart.contains(grid.node(*j))) { touches = true; break; }
        }
      if (touches) {
        gh.passed = false;
        gh.witness = grid.node(i);
      }
    }
    for (const auto& del : D.deleted_points()) {
      if (!gh.passed) break;
      const double ds = 0.5 * (field_value(sm.fermat, fwd, del) + field_value(sm.fermat, rev, del));
      if (ds < o.radius) {
        gh.passed = false;
        gh.witness = del;
      }
    }
  }
  gh.detail = "proxy: symmetrized balls of radius " + std::to_string(o.radius) +
              (gh.passed ? " stay inside the chart" : " reach the chart edge or a missing point");
  rep.findings.push_back(gh);

  LadderFinding cs;
  cs.name = "cauchy-slices";
  cs.clause = "slices t = const are Cauchy iff d_F is forward and backward complete";
  std::mt19937_64 rng(o.seed);
  const auto dirs = fan(n, o.directions, rng);
  const MetricModel free = sm.fermat.without_region();
  int runs = 0;
  for (const auto& c : centers) {
    for (const auto& u : dirs) {
      for (const MetricModel* m : {&sm.fermat, &sm.reverse}) {
        if (!cs.passed) break;
        ++runs;
        const double F = std::sqrt(lagrangian_value(*m, c, u));
        try {
          const Geodesic g = integrate_geodesic(*m, c, u / F, o.radius);
          if (g.exited_chart) {
            cs.passed = false;
            cs.witness = g.exit_point.value_or(g.end());
          } else if (!D.deleted_points().empty()) {
            if (auto w = leaves_region(m == &sm.fermat ? free : free.reversed(), g, D)) {
              cs.passed = false;
              cs.witness = *w;
            }
          }
        } catch (const Error& e) {
          cs.passed = false;
          cs.witness = c;
          cs.detail = std::string("integration failed: ") + e.what() + "; ";
        }
      }
    }
  }
  cs.detail += "proxy: " + std::to_string(runs) + " forward and backward geodesics of length " +
               std::to_string(o.radius) + (cs.passed ? " stay in the chart" : " include a chart exit");
  rep.findings.push_back(cs);
  return rep;
}

TemporalReport verify_temporal(const MetricModel& cone, const ScalarField& tau, const std::vector<TangentSample>& samples,
                               std::optional<VectorField> gradient) {
  TemporalReport r;
  r.min_dtau = kInf;
  for (const auto& s : samples) {
    const auto c = classify_vector(cone, s.point, s.vector).character;
    if (c != CausalCharacter::Timelike && c != CausalCharacter::Lightlike) {
      ++r.skipped;
      continue;
    }
    const Vector g = gradient ? (*gradient)(s.point) : central_gradient(tau, s.point);
    const double d = g.dot(s.vector);
    ++r.samples;
    if (d < r.min_dtau) {
      r.min_dtau = d;
      r.worst = s;
    }
  }
  r.temporal = r.samples > 0 && r.min_dtau > 0.0;
  return r;
}

double temporal_epsilon_bound(const StationaryModel& sm, const VectorField& df,
                              const std::vector<TangentSample>& spatial_samples) {
  double bound = kInf;
  for (const auto& s : spatial_samples) {
    const double d = df(s.point).dot(s.vector);
    if (d < 0.0) bound = std::min(bound, fermat_speed(sm, s.point, s.vector) / -d);
  }
  return bound;
}

std::vector<TangentSample> sample_causal_vectors(const StationaryModel& sm, int count, std::mt19937_64& rng) {
  const int n = sm.spatial_dimension();
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TangentSample> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < count && guard++ < 100 * count) {
    Vector x(n);
    for (int a = 0; a < n; ++a) {
      const auto& iv = sm.chart.box[static_cast<std::size_t>(a)];
      x[a] = iv.lo + (0.05 + 0.9 * unit(rng)) * iv.width();
    }
    if (!sm.chart.contains(x)) continue;
    Vector u(n);
    for (int a = 0; a < n; ++a) u[a] = nd(rng);
    const double F = fermat_speed(sm, x, u);
    Vector v(n + 1);
    switch (out.size() % 3) {
      case 0: v << F, u; break;
      case 1: v << F * (1.0 + 0.01 + unit(rng)), u; break;
      default: v << 0.5 + 1.5 * unit(rng), Vector::Zero(n); break;
    }
    out.push_back({spacetime_point(2.0 * unit(rng) - 1.0, x), v});
  }
  return out;
}

}  // namespace finsler
