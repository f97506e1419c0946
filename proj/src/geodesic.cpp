#include "finsler/geodesic.hpp"

#include "finsler/finsler_core.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace finsler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Step for x-derivatives of the coefficient fields: cube root of epsilon
// balances truncation against cancellation for a central difference.
double x_step(double xi) { return 6e-6 * (1.0 + std::abs(xi)); }

Vector gradient_x(const MetricModel& model, const Vector& x, const Vector& v) {
  const int n = model.dimension();
  Vector g(n);
  Vector xp = x, xm = x;
  for (int i = 0; i < n; ++i) {
    const double h = x_step(x[i]);
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (lagrangian_value(model, xp, v) - lagrangian_value(model, xm, v)) / (2.0 * h);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

// D_x(grad_v L)[w] as one directional central difference.
Vector mixed_term(const MetricModel& model, const Vector& x, const Vector& v, const Vector& w) {
  const double wn = w.norm();
  if (wn == 0.0) return Vector::Zero(model.dimension());
  const double eps = x_step(x.norm()) / wn;
  const Vector gp = lagrangian_jet(model, x + eps * w, v, 1).gradient;
  const Vector gm = lagrangian_jet(model, x - eps * w, v, 1).gradient;
  return (gp - gm) / (2.0 * eps);
}

struct NonFinite {};

using State = Vector;  // (x, v)

State rhs(const MetricModel& model, const State& y) {
  const int n = model.dimension();
  const Vector x = y.head(n), v = y.tail(n);
  const Vector a = geodesic_acceleration(model, x, v);
  if (!a.allFinite()) throw NonFinite{};
  State out(2 * n);
  out << v, a;
  return out;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
  State y;
  State k7;
  double error = 0.0;
};

StepResult dp_step(const MetricModel& model, const State& y, const State& k1, double h,
                   const OdeOptions& o) {
  (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system
  const State k2 = rhs(model, y + h * (a21 * k1));
  const State k3 = rhs(model, y + h * (a31 * k1 + a32 * k2));
  const State k4 = rhs(model, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const State k5 = rhs(model, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const State k6 = rhs(model, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  StepResult r;
  r.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  r.k7 = rhs(model, r.y);
  const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * r.k7);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double sc = o.absolute_tolerance +
                      o.relative_tolerance * std::max(std::abs(y[i]), std::abs(r.y[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  r.error = std::sqrt(acc / static_cast<double>(y.size()));
  return r;
}

double speed_of(const MetricModel& model, const Vector& x, const Vector& v) {
  return std::sqrt(std::max(0.0, lagrangian_value(model, x, v)));
}

void finish(const MetricModel& model, Geodesic& g) {
  const auto& s0 = g.samples.front();
  const double L0 = lagrangian_value(model, s0.x, s0.v);
  const double F0 = std::sqrt(std::max(0.0, L0));
  const bool lightlike = F0 <= 1e-9 * std::max(1.0, s0.v.norm());
  g.speed_drift = 0.0;
  for (const auto& s : g.samples) {
    if (lightlike)
      g.speed_drift = std::max(g.speed_drift, std::abs(lagrangian_value(model, s.x, s.v) - L0));
    else
      g.speed_drift = std::max(g.speed_drift, std::abs(speed_of(model, s.x, s.v) - F0) / F0);
  }
  g.length = F0 * (g.samples.back().t - s0.t);
}

Vector lattice_direction(int n, int k, int count, std::mt19937_64& rng) {
  Vector d(n);
  if (n == 1) {
    d[0] = k % 2 == 0 ? 1.0 : -1.0;
  } else if (n == 2) {
    const double a = 2.0 * std::numbers::pi * k / count;
    d << std::cos(a), std::sin(a);
  } else {
    std::normal_distribution<double> nd;
    for (int i = 0; i < n; ++i) d[i] = nd(rng);
  }
  return d.normalized();
}

double angle_between(const Vector& a, const Vector& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double point_segment(const Vector& p, const Vector& a, const Vector& b) {
  const Vector ab = b - a;
  const double l2 = ab.squaredNorm();
  const double t = l2 > 0.0 ? std::clamp((p - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double directed_hausdorff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = kInf;
    if (b.size() == 1) best = (p - b[0]).norm();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) best = std::min(best, point_segment(p, b[i], b[i + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

// Distance from p to the cubic Hermite segment through samples a, b.
double point_hermite(const Vector& p, const GeodesicSample& a, const GeodesicSample& b) {
  const double dt = b.t - a.t;
  auto at = [&](double s) -> Vector {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.x + (s3 - 2 * s2 + s) * dt * a.v + (-2 * s3 + 3 * s2) * b.x +
           (s3 - s2) * dt * b.v;
  };
  // golden-section on |at(s) - p|^2, seeded by the chord projection
  double lo = 0.0, hi = 1.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = (at(c) - p).squaredNorm(), fd = (at(d) - p).squaredNorm();
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      hi = d, d = c, fd = fc;
      c = hi - g * (hi - lo);
      fc = (at(c) - p).squaredNorm();
    } else {
      lo = c, c = d, fc = fd;
      d = lo + g * (hi - lo);
      fd = (at(d) - p).squaredNorm();
    }
  }
  return std::sqrt(std::min({fc, fd, (a.x - p).squaredNorm(), (b.x - p).squaredNorm()}));
}

double directed_curve_distance(const Geodesic& a, const Geodesic& b) {
  double worst = 0.0;
  const auto& bs = b.samples;
  for (const auto& s : a.samples) {
    std::size_t k = 0;
    double near = kInf;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const double d = (bs[i].x - s.x).squaredNorm();
      if (d < near) near = d, k = i;
    }
    double best = std::sqrt(near);
    if (k > 0) best = std::min(best, point_hermite(s.x, bs[k - 1], bs[k]));
    if (k + 1 < bs.size()) best = std::min(best, point_hermite(s.x, bs[k], bs[k + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double curve_hausdorff(const Geodesic& a, const Geodesic& b) {
  if (a.samples.empty() || b.samples.empty()) return kInf;
  return std::max(directed_curve_distance(a, b), directed_curve_distance(b, a));
}

Vector geodesic_acceleration(const MetricModel& model, const Vector& x, const Vector& v) {
  const LagrangianJet jet = lagrangian_jet(model, x, v, 2);
  const Vector rhs_vec = gradient_x(model, x, v) - mixed_term(model, x, v, v);
  if (!jet.hessian.allFinite() || !rhs_vec.allFinite())
    return Vector::Constant(model.dimension(), std::numeric_limits<double>::quiet_NaN());
  return jet.hessian.fullPivLu().solve(rhs_vec);
}

std::vector<double> euler_lagrange_residual(const MetricModel& model, std::span<const CurvePoint> curve) {
  std::vector<double> out(curve.size(), 0.0);
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double h0 = curve[i].t - curve[i - 1].t, h1 = curve[i + 1].t - curve[i].t;
    const Vector& xm = curve[i - 1].x;
    const Vector& x = curve[i].x;
    const Vector& xp = curve[i + 1].x;
    // nonuniform three-point formulas
    const Vector v = (-h1 / (h0 * (h0 + h1))) * xm + ((h1 - h0) / (h0 * h1)) * x +
                     (h0 / (h1 * (h0 + h1))) * xp;
    const Vector a = 2.0 * (h0 * xp - (h0 + h1) * x + h1 * xm) / (h0 * h1 * (h0 + h1));
    if (classify_domain(model, {x, v}).classification == DomainClass::Outside)
      throw Error(ErrorCode::OutsideDomain, "curve velocity leaves the domain at sample " + std::to_string(i));
    const LagrangianJet jet = lagrangian_jet(model, x, v, 2);
    out[i] = (jet.hessian * a + mixed_term(model, x, v, v) - gradient_x(model, x, v)).norm();
  }
  return out;
}

Geodesic integrate_parameter(const MetricModel& model, const Vector& p, const Vector& v, double t_end,
                             const OdeOptions& o, std::span<const double> output_times) {
  const int n = model.dimension();
  if (p.size() != n || v.size() != n) throw Error(ErrorCode::UsageError, "dimension mismatch");
  if (!(t_end > 0.0)) throw Error(ErrorCode::UsageError, "integration span must be positive");
  const Chart& chart = model.chart();

  Geodesic g;
  State y(2 * n);
  y << p, v;
  double t = 0.0;
  g.samples.push_back({0.0, p, v});
  std::size_t next_out = 0;
  while (next_out < output_times.size() && output_times[next_out] <= 0.0) ++next_out;

  State k1;
  try {
    k1 = rhs(model, y);
  } catch (const NonFinite&) {
    throw Error(ErrorCode::StiffnessFailure, "acceleration undefined at the initial data");
  }
  double h = std::min(o.initial_step, t_end);
  int steps = 0;
  bool shrinking_for_exit = false;
  while (t < t_end) {
    if (++steps > o.max_steps) throw Error(ErrorCode::StiffnessFailure, "step budget exhausted");
    const double target = next_out < output_times.size() ? std::min(output_times[next_out], t_end) : t_end;
    const double step = std::min(h, target - t);
    StepResult r;
    try {
      r = dp_step(model, y, k1, step, o);
    } catch (const NonFinite&) {
      h = step * 0.25;
      if (h < o.min_step)
        throw Error(ErrorCode::StiffnessFailure, "acceleration undefined along the curve at t=" + std::to_string(t));
      continue;
    }
    if (!(r.error <= 1.0)) {
      const double f = std::isfinite(r.error) ? std::max(0.2, 0.9 * std::pow(r.error, -0.2)) : 0.2;
      h = step * f;
      if (h < o.min_step)
        throw Error(ErrorCode::StiffnessFailure, "step size underflow at t=" + std::to_string(t));
      continue;
    }
    const Vector xnew = r.y.head(n);
    if (!chart.contains(xnew)) {
      g.exit_point = xnew;
      if (step > 1e-10 * std::max(1.0, t_end)) {
        h = step * 0.5;
        shrinking_for_exit = true;
        continue;
      }
      g.exited_chart = true;
      break;
    }
    t = (step == target - t) ? target : t + step;
    y = r.y;
    k1 = r.k7;
    const bool at_output = next_out < output_times.size() && t == target;
    if (output_times.empty() || at_output || t >= t_end) g.samples.push_back({t, y.head(n), y.tail(n)});
    if (at_output) ++next_out;
    if (!shrinking_for_exit) {
      const double f = r.error > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(r.error, -0.2))) : 5.0;
      h = step * f;
    }
  }
  if (!g.exited_chart) g.exit_point.reset();
  finish(model, g);
  return g;
}

Geodesic integrate_geodesic(const MetricModel& model, const Vector& p, const Vector& v,
                            double length_budget, const OdeOptions& options) {
  if (!(length_budget > 0.0)) throw Error(ErrorCode::UsageError, "length budget must be positive");
  const DomainVerdict verdict = classify_domain(model, {p, v});
  if (verdict.classification == DomainClass::Outside)
    throw Error(ErrorCode::OutsideDomain, "initial velocity outside the domain");
  const double F = evaluate(model, {p, v}).F;
  const double t_end = F > 1e-12 * v.norm() ? length_budget / F : length_budget;
  return integrate_parameter(model, p, v, t_end, options);
}

std::vector<Geodesic> shoot(const MetricModel& model, const Vector& p, const Vector& q,
                            const ShootOptions& o) {
  const int n = model.dimension();
  const Chart& chart = model.chart();
  const Vector d = chart.displacement(p, q);
  const double scale = std::max(d.norm(), 1e-3);

  auto endpoint = [&](const Vector& v0, Geodesic* keep) -> std::optional<Vector> {
    try {
      if (classify_domain(model, {p, v0}).classification == DomainClass::Outside) return std::nullopt;
      Geodesic g = integrate_parameter(model, p, v0, 1.0, o.ode);
      if (g.exited_chart) return std::nullopt;
      Vector e = g.end();
      if (keep) *keep = std::move(g);
      return e;
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  std::vector<Vector> guesses;
  if (o.hint && o.hint->norm() > 0.0) guesses.push_back(o.hint->normalized() * scale);
  if (d.norm() > 0.0) guesses.push_back(d);
  for (int a = 0; a < n; ++a) {
    if (!chart.is_periodic(a)) continue;
    const double period = chart.box[static_cast<std::size_t>(a)].width();
    for (double s : {-1.0, 1.0}) {
      Vector w = d;
      w[a] += s * period;
      guesses.push_back(w);
    }
  }
  std::mt19937_64 rng(0x5eed);
  for (int k = 0; k < o.restarts; ++k) guesses.push_back(scale * lattice_direction(n, k, o.restarts, rng));

  std::vector<Geodesic> found;
  for (const Vector& guess : guesses) {
    Vector v = guess;
    Geodesic current;
    auto x1 = endpoint(v, &current);
    if (!x1) continue;
    Vector r = chart.displacement(*x1, q);
    bool ok = false;
    for (int it = 0; it < o.max_newton_iterations; ++it) {
      if (r.norm() <= o.endpoint_tolerance) {
        ok = true;
        break;
      }
      Matrix J(n, n);
      bool jac_ok = true;
      for (int i = 0; i < n; ++i) {
        const double delta = 1e-7 * std::max(1.0, v.norm());
        Vector vp = v;
        vp[i] += delta;
        auto xp = endpoint(vp, nullptr);
        if (!xp) {
          vp[i] = v[i] - delta;
          xp = endpoint(vp, nullptr);
          if (!xp) { jac_ok = false; break; }
          J.col(i) = (*x1 - *xp) / delta;
        } else {
          J.col(i) = (*xp - *x1) / delta;
        }
      }
      if (!jac_ok) break;
      const Vector dv = J.fullPivLu().solve(r);
      if (!dv.allFinite()) break;
      double lambda = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 14; ++ls, lambda *= 0.5) {
        const Vector vn = v + lambda * dv;
        Geodesic trial;
        auto xn = endpoint(vn, &trial);
        if (!xn) continue;
        const Vector rn = chart.displacement(*xn, q);
        if (rn.norm() < r.norm()) {
          v = vn;
          x1 = xn;
          r = rn;
          current = std::move(trial);
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (!ok && r.norm() <= o.endpoint_tolerance) ok = true;
    if (!ok) continue;
    if (o.confine_to) {
      bool inside = true;
      for (const auto& s : current.samples)
        if (!o.confine_to->contains(chart.wrap(s.x))) { inside = false; break; }
      if (!inside) continue;
    }
    found.push_back(std::move(current));
  }
  if (found.empty())
    throw Error(ErrorCode::NoConnection, "no geodesic connection found after " +
                                             std::to_string(guesses.size()) + " restarts");
  std::stable_sort(found.begin(), found.end(),
                   [](const Geodesic& a, const Geodesic& b) { return a.length < b.length; });
  std::vector<Geodesic> unique;
  const double tol = o.dedupe_degrees * std::numbers::pi / 180.0;
  for (auto& g : found) {
    bool dup = false;
    for (const auto& u : unique)
      if (angle_between(g.initial_velocity(), u.initial_velocity()) < tol) { dup = true; break; }
    if (!dup) unique.push_back(std::move(g));
  }
  return unique;
}

ConjugateScan conjugate_point_scan(const MetricModel& model, const Geodesic& geodesic, int resolution,
                                   const OdeOptions& options) {
  if (geodesic.samples.size() < 2 || resolution < 4)
    throw Error(ErrorCode::UsageError, "conjugate scan needs a non-trivial geodesic");
  const int n = model.dimension();
  const Vector p = geodesic.samples.front().x;
  const Vector v = geodesic.samples.front().v;
  const double T = geodesic.samples.back().t - geodesic.samples.front().t;
  const double F0 = speed_of(model, p, v);
  std::vector<double> times(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k) times[static_cast<std::size_t>(k)] = T * (k + 1) / resolution;

  auto run = [&](const Vector& v0) {
    Geodesic g = integrate_parameter(model, p, v0, T, options, times);
    std::vector<Vector> xs;
    for (std::size_t i = 1; i < g.samples.size(); ++i) xs.push_back(g.samples[i].x);
    return xs;
  };
  const double delta = 1e-6 * std::max(1.0, v.norm());
  std::vector<std::vector<Vector>> plus(static_cast<std::size_t>(n)), minus(static_cast<std::size_t>(n));
  std::size_t usable = times.size();
  for (int i = 0; i < n; ++i) {
    Vector vp = v, vm = v;
    vp[i] += delta;
    vm[i] -= delta;
    plus[static_cast<std::size_t>(i)] = run(vp);
    minus[static_cast<std::size_t>(i)] = run(vm);
    usable = std::min({usable, plus[static_cast<std::size_t>(i)].size(), minus[static_cast<std::size_t>(i)].size()});
  }

  ConjugateScan scan;
  double max_abs = 0.0;
  for (std::size_t k = 0; k < usable; ++k) {
    Matrix J(n, n);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      J.col(i) = (plus[ui][k] - minus[ui][k]) / (2.0 * delta);
    }
    const double t = times[k];
    const double nd = J.determinant() / std::pow(t, n);
    scan.determinant.emplace_back(F0 * t, nd);
    max_abs = std::max(max_abs, std::abs(nd));
  }
  for (std::size_t k = 1; k < scan.determinant.size(); ++k) {
    const auto [s0, d0] = scan.determinant[k - 1];
    const auto [s1, d1] = scan.determinant[k];
    if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
      scan.conjugate_parameters.push_back(s0 + (s1 - s0) * d0 / (d0 - d1));
    } else if (k + 1 < scan.determinant.size()) {
      const double d2 = scan.determinant[k + 1].second;
      const double a = std::abs(d1);
      if (a < 1e-4 * max_abs && a <= std::abs(d0) && a <= std::abs(d2) && d0 * d2 > 0.0)
        scan.ill_conditioned.push_back(s1);
    }
  }
  return scan;
}

MetricModel projective_change(const MetricModel& randers, const ScalarField& f, std::optional<VectorField> df) {
  MatrixField h;
  VectorField beta;
  if (const auto* r = std::get_if<RandersParams>(&randers.params())) {
    h = r->h;
    beta = r->beta;
  } else if (const auto* rm = std::get_if<RiemannianParams>(&randers.params())) {
    h = rm->h;
    const int n = randers.dimension();
    beta = [n](const Vector&) { return Vector(Vector::Zero(n)); };
  } else {
    throw Error(ErrorCode::UsageError, "projective change applies to Randers metrics");
  }
  if (randers.is_reversed()) {
    beta = [b = beta](const Vector& x) { return Vector(-b(x)); };
  }
  VectorField grad = df ? *df : VectorField([f](const Vector& x) {
    Vector g(x.size());
    Vector xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double s = x_step(x[i]);
      xp[i] = x[i] + s;
      xm[i] = x[i] - s;
      g[i] = (f(xp) - f(xm)) / (2.0 * s);
      xp[i] = xm[i] = x[i];
    }
    return g;
  });
  VectorField changed = [beta, grad](const Vector& x) { return Vector(beta(x) + grad(x)); };
  const Chart& chart = randers.chart();
  for (const Vector& x0 : randers.lattice_samples(5)) {
    const Vector x = chart.wrap(x0);
    const Vector b = changed(x);
    const double norm = std::sqrt(b.dot(h(x).ldlt().solve(b)));
    if (!(norm < 1.0))
      throw Error(ErrorCode::PositivityViolated,
                  "R + df is not positive: |beta + df| = " + std::to_string(norm) + " at a lattice sample");
  }
  return MetricModel::randers(chart, h, changed, randers.derivative_mode());
}

double polyline_hausdorff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.empty() || b.empty()) return kInf;
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

ProjectiveReport compare_projective(const MetricModel& original, const MetricModel& changed,
                                    const ScalarField& f,
                                    const std::vector<std::pair<Vector, Vector>>& pairs,
                                    const ShootOptions& options) {
  ProjectiveReport rep;
  std::vector<double> times(201);
  for (int k = 0; k <= 200; ++k) times[static_cast<std::size_t>(k)] = k / 200.0;
  auto dense = [&](const MetricModel& m, const Geodesic& g) {
    return integrate_parameter(m, g.start(), g.initial_velocity(), 1.0, options.ode, times);
  };
  for (const auto& [p, q] : pairs) {
    PathComparison c;
    c.p = p;
    c.q = q;
    try {
      const auto go = shoot(original, p, q, options);
      const auto gc = shoot(changed, p, q, options);
      c.length_original = go.front().length;
      c.length_changed = gc.front().length;
      c.potential_difference = f(q) - f(p);
      c.length_error = std::abs((c.length_changed - c.length_original) - c.potential_difference);
      c.hausdorff = curve_hausdorff(dense(original, go.front()), dense(changed, gc.front()));
    } catch (const Error&) {
      ++rep.failures;
      c.hausdorff = c.length_error = kInf;
    }
    rep.max_hausdorff = std::max(rep.max_hausdorff, c.hausdorff);
    rep.max_length_error = std::max(rep.max_length_error, c.length_error);
    rep.pairs.push_back(std::move(c));
  }
  return rep;
}

}  // namespace finsler
