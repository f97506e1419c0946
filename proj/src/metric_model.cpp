#include "finsler/metric_model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace finsler {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Riemannian: return "riemannian";
    case Family::Randers: return "randers";
    case Family::Zermelo: return "zermelo";
    case Family::Matsumoto: return "matsumoto";
    case Family::Fermat: return "fermat";
    case Family::Bogoslovsky: return "bogoslovsky";
    case Family::Kostelecky: return "kostelecky";
    case Family::Lorentzian: return "lorentzian";
    case Family::Tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A one-homogeneous function of v with its first two derivatives.
struct Piece {
  double f = 0.0;
  Vector df;
  Matrix d2f;
};

// f = sqrt(sign * v'Qv)
Piece root_of_quadratic(const Matrix& q, const Vector& v, int order, double sign = 1.0) {
  Piece p;
  const Vector qv = sign * (q * v);
  const double s2 = v.dot(qv);
  p.f = s2 >= 0.0 ? std::sqrt(s2) : kNaN;
  if (order >= 1) p.df = qv / p.f;
  if (order >= 2) p.d2f = (sign * q - qv * qv.transpose() / s2) / p.f;
  return p;
}

Piece linear(const Vector& b, const Vector& v, int order) {
  Piece p;
  p.f = b.dot(v);
  if (order >= 1) p.df = b;
  if (order >= 2) p.d2f = Matrix::Zero(v.size(), v.size());
  return p;
}

Piece sum(const Piece& a, const Piece& b, double cb, int order) {
  Piece p;
  p.f = a.f + cb * b.f;
  if (order >= 1) p.df = a.df + cb * b.df;
  if (order >= 2) p.d2f = a.d2f + cb * b.d2f;
  return p;
}

// F = phi(u, w) for one-homogeneous u, w; partials of phi supplied.
struct Partials {
  double f, fu, fw, fuu, fuw, fww;
};

Piece compose(const Piece& u, const Piece& w, const Partials& d, int order) {
  Piece p;
  p.f = d.f;
  if (order >= 1) p.df = d.fu * u.df + d.fw * w.df;
  if (order >= 2) {
    p.d2f = d.fuu * u.df * u.df.transpose() +
            d.fuw * (u.df * w.df.transpose() + w.df * u.df.transpose()) +
            d.fww * w.df * w.df.transpose() + d.fu * u.d2f + d.fw * w.d2f;
  }
  return p;
}

LagrangianJet square(const Piece& F, int order) {
  LagrangianJet j;
  j.value = F.f * F.f;
  if (order >= 1) j.gradient = 2.0 * F.f * F.df;
  if (order >= 2) j.hessian = 2.0 * (F.df * F.df.transpose() + F.f * F.d2f);
  return j;
}

LagrangianJet quadratic(const Matrix& q, const Vector& v, int order) {
  LagrangianJet j;
  const Vector qv = q * v;
  j.value = v.dot(qv);
  if (order >= 1) j.gradient = 2.0 * qv;
  if (order >= 2) j.hessian = 2.0 * q;
  return j;
}

// Zermelo data as Randers data: h = (lambda g + gW gW^T)/lambda^2, b = -gW/lambda.
std::pair<Matrix, Vector> zermelo_to_randers(const Matrix& g, const Vector& w) {
  const Vector gw = g * w;
  const double lambda = 1.0 - w.dot(gw);
  Matrix h = (lambda * g + gw * gw.transpose()) / (lambda * lambda);
  Vector b = -gw / lambda;
  return {std::move(h), std::move(b)};
}

Piece randers_piece(const Matrix& h, const Vector& beta, const Vector& v, int order) {
  return sum(root_of_quadratic(h, v, order), linear(beta, v, order), 1.0, order);
}

Piece fermat_piece(const FermatParams& p, const Vector& x, const Vector& v, int order) {
  const Vector om = p.omega(x);
  const Matrix h = p.g0(x) + om * om.transpose();
  const double sign = p.orientation == Orientation::Forward ? 1.0 : -1.0;
  return sum(root_of_quadratic(h, v, order), linear(om, v, order), sign, order);
}

Piece matsumoto_piece(const Matrix& h, const Vector& beta, const Vector& v, int order) {
  const Piece u = root_of_quadratic(h, v, order);
  const Piece w = linear(beta, v, order);
  const double a = u.f, b = w.f, d = a - b;
  const double d2 = d * d, d3 = d2 * d;
  return compose(u, w,
                 {a * a / d, (a * a - 2.0 * a * b) / d2, a * a / d2, 2.0 * b * b / d3,
                  -2.0 * a * b / d3, 2.0 * a * a / d3},
                 order);
}

Piece bogoslovsky_piece(const BogoslovskyParams& p, const Vector& x, const Vector& v, int order) {
  const Piece u = root_of_quadratic(p.g0(x), v, order, -1.0);
  const Piece w = linear(p.omega(x), v, order);
  const double b = p.exponent;
  const double f = std::pow(u.f, 1.0 - b) * std::pow(w.f, b);
  const double uu = u.f, ww = w.f;
  return compose(u, w,
                 {f, (1.0 - b) * f / uu, b * f / ww, -(1.0 - b) * b * f / (uu * uu),
                  (1.0 - b) * b * f / (uu * ww), b * (b - 1.0) * f / (ww * ww)},
                 order);
}

Piece kostelecky_piece(const KosteleckyParams& p, const Vector& x, const Vector& v, int order) {
  const Matrix g = p.g0(x);
  const Vector a = p.a(x);
  const Vector b = p.b(x);
  const Piece u = root_of_quadratic(g, v, order, -1.0);
  const Vector ga = g * a;
  Piece out;
  out.f = p.mass * u.f + ga.dot(v);
  if (order >= 1) out.df = p.mass * u.df + ga;
  if (order >= 2) out.d2f = p.mass * u.d2f;
  const Vector gb = g * b;
  const Matrix q = gb * gb.transpose() - b.dot(gb) * g;
  if (q.cwiseAbs().maxCoeff() > 0.0) {
    out = sum(out, root_of_quadratic(q, v, order), static_cast<double>(p.branch), order);
  }
  return out;
}

LagrangianJet raw_jet(const MetricModel& m, const Vector& xw, const Vector& v, int order) {
  return std::visit(
      [&](const auto& p) -> LagrangianJet {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RiemannianParams>) {
          return quadratic(p.h(xw), v, order);
        } else if constexpr (std::is_same_v<P, RandersParams>) {
          return square(randers_piece(p.h(xw), p.beta(xw), v, order), order);
        } else if constexpr (std::is_same_v<P, ZermeloParams>) {
          const auto [h, b] = zermelo_to_randers(p.g(xw), p.wind(xw));
          return square(randers_piece(h, b, v, order), order);
        } else if constexpr (std::is_same_v<P, MatsumotoParams>) {
          return square(matsumoto_piece(p.h(xw), p.beta(xw), v, order), order);
        } else if constexpr (std::is_same_v<P, FermatParams>) {
          return square(fermat_piece(p, xw, v, order), order);
        } else if constexpr (std::is_same_v<P, BogoslovskyParams>) {
          return square(bogoslovsky_piece(p, xw, v, order), order);
        } else if constexpr (std::is_same_v<P, KosteleckyParams>) {
          return square(kostelecky_piece(p, xw, v, order), order);
        } else if constexpr (std::is_same_v<P, LorentzianParams>) {
          return quadratic(-p.g(xw), v, order);
        } else {
          LagrangianJet j;
          j.value = p.lagrangian(xw, v);
          return j;
        }
      },
      m.params());
}

double eigen_min(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::string point_str(const Vector& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

[[noreturn]] void violation(const std::string& what, const Vector& x) {
  throw Error(ErrorCode::InvariantViolation, what + " at x = " + point_str(x));
}

void check_symmetric(const Matrix& m, const char* name, const Vector& x, Eigen::Index n) {
  if (m.rows() != n || m.cols() != n) violation(std::string(name) + " has wrong shape", x);
  if (!m.allFinite()) violation(std::string(name) + " is not finite", x);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    violation(std::string(name) + " is not symmetric", x);
}

void check_positive_definite(const Matrix& m, const char* name, const Vector& x, Eigen::Index n) {
  check_symmetric(m, name, x, n);
  if (!(eigen_min(m) > 0.0)) violation(std::string(name) + " is not positive definite", x);
}

void check_lorentzian(const Matrix& m, const Vector& t, const char* name, const Vector& x,
                      Eigen::Index n) {
  check_symmetric(m, name, x, n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double tol = 1e-9 * ev.cwiseAbs().maxCoeff();
  int neg = 0, pos = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol) ++neg;
    if (ev[i] > tol) ++pos;
  }
  if (neg != 1 || pos != n - 1) violation(std::string(name) + " is not Lorentzian", x);
  if (t.size() != n) violation("time orientation has wrong dimension", x);
  if (!(t.dot(m * t) < 0.0)) violation("time orientation is not timelike", x);
}

void check_vector(const Vector& v, const char* name, const Vector& x, Eigen::Index n) {
  if (v.size() != n) violation(std::string(name) + " has wrong dimension", x);
  if (!v.allFinite()) violation(std::string(name) + " is not finite", x);
}

}  // namespace

MetricModel::MetricModel(Family family, Chart chart, FamilyParams params, DerivativeMode mode)
    : family_(family),
      chart_(std::move(chart)),
      params_(std::make_shared<const FamilyParams>(std::move(params))),
      mode_(mode) {
  if (chart_.dimension() < 2) throw Error(ErrorCode::SchemaError, "chart dimension must be >= 2");
  if (family_ == Family::Tabulated) mode_ = DerivativeMode::FiniteDifference;
  validate_at(lattice_samples(5));
}

MetricModel MetricModel::riemannian(Chart chart, MatrixField h, DerivativeMode mode) {
  return MetricModel(Family::Riemannian, std::move(chart), RiemannianParams{std::move(h)}, mode);
}

MetricModel MetricModel::randers(Chart chart, MatrixField h, VectorField beta, DerivativeMode mode) {
  return MetricModel(Family::Randers, std::move(chart), RandersParams{std::move(h), std::move(beta)},
                     mode);
}

MetricModel MetricModel::zermelo(Chart chart, MatrixField g, VectorField wind, DerivativeMode mode) {
  return MetricModel(Family::Zermelo, std::move(chart), ZermeloParams{std::move(g), std::move(wind)},
                     mode);
}

MetricModel MetricModel::matsumoto(Chart chart, MatrixField h, VectorField beta, DerivativeMode mode) {
  return MetricModel(Family::Matsumoto, std::move(chart),
                     MatsumotoParams{std::move(h), std::move(beta)}, mode);
}

MetricModel MetricModel::fermat(Chart chart, MatrixField g0, VectorField omega,
                                Orientation orientation, DerivativeMode mode) {
  return MetricModel(Family::Fermat, std::move(chart),
                     FermatParams{std::move(g0), std::move(omega), orientation}, mode);
}

MetricModel MetricModel::bogoslovsky(Chart chart, MatrixField g0, VectorField omega, double exponent,
                                     Vector time_orientation, DerivativeMode mode) {
  if (!(exponent > 0.0 && exponent < 1.0))
    throw Error(ErrorCode::InvalidCoefficients, "Bogoslovsky exponent must lie in (0,1)");
  return MetricModel(
      Family::Bogoslovsky, std::move(chart),
      BogoslovskyParams{std::move(g0), std::move(omega), exponent, std::move(time_orientation)}, mode);
}

MetricModel MetricModel::kostelecky(Chart chart, MatrixField g0, VectorField a, VectorField b,
                                    double mass, int branch, Vector time_orientation,
                                    DerivativeMode mode) {
  if (branch != 1 && branch != -1)
    throw Error(ErrorCode::InvalidCoefficients, "Kostelecky branch must be +1 or -1");
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidCoefficients, "Kostelecky mass must be positive");
  return MetricModel(Family::Kostelecky, std::move(chart),
                     KosteleckyParams{std::move(g0), std::move(a), std::move(b), mass, branch,
                                      std::move(time_orientation)},
                     mode);
}

MetricModel MetricModel::lorentzian(Chart chart, MatrixField g, Vector time_orientation,
                                    DerivativeMode mode) {
  return MetricModel(Family::Lorentzian, std::move(chart),
                     LorentzianParams{std::move(g), std::move(time_orientation)}, mode);
}

MetricModel MetricModel::tabulated(Chart chart, LagrangianFunction lagrangian,
                                   std::optional<LagrangianFunction> margin) {
  return MetricModel(Family::Tabulated, std::move(chart),
                     TabulatedParams{std::move(lagrangian), std::move(margin)},
                     DerivativeMode::FiniteDifference);
}

MetricModel MetricModel::reversed() const {
  MetricModel m = *this;
  m.reversed_ = !reversed_;
  return m;
}

MetricModel MetricModel::with_derivative_mode(DerivativeMode mode) const {
  MetricModel m = *this;
  m.mode_ = family_ == Family::Tabulated ? DerivativeMode::FiniteDifference : mode;
  return m;
}

MetricModel MetricModel::without_region() const {
  MetricModel m = *this;
  m.chart_.region.reset();
  return m;
}

bool MetricModel::is_spacetime() const {
  return family_ == Family::Bogoslovsky || family_ == Family::Kostelecky ||
         family_ == Family::Lorentzian;
}

std::vector<Vector> MetricModel::lattice_samples(int per_axis) const {
  const int n = dimension();
  std::vector<Vector> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vector x(n);
    for (int a = 0; a < n; ++a) {
      const auto& iv = chart_.box[static_cast<std::size_t>(a)];
      x[a] = iv.lo + iv.width() * (idx[static_cast<std::size_t>(a)] + 0.5) / per_axis;
    }
    if (!chart_.region || chart_.region->contains(x)) out.push_back(std::move(x));
    int a = 0;
    while (a < n && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  return out;
}

void MetricModel::validate_at(const std::vector<Vector>& points) const {
  const Eigen::Index n = dimension();
  for (const Vector& x0 : points) {
    const Vector x = chart_.wrap(x0);
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, RiemannianParams>) {
            check_positive_definite(p.h(x), "h", x, n);
          } else if constexpr (std::is_same_v<P, RandersParams> || std::is_same_v<P, MatsumotoParams>) {
            check_positive_definite(p.h(x), "h", x, n);
            check_vector(p.beta(x), "beta", x, n);
          } else if constexpr (std::is_same_v<P, ZermeloParams>) {
            const Matrix g = p.g(x);
            check_positive_definite(g, "g", x, n);
            const Vector w = p.wind(x);
            check_vector(w, "W", x, n);
            if (!(w.dot(g * w) < 1.0)) violation("g(W,W) < 1 fails", x);
          } else if constexpr (std::is_same_v<P, FermatParams>) {
            const Matrix g0 = p.g0(x);
            check_positive_definite(g0, "g0", x, n);
            const Vector om = p.omega(x);
            check_vector(om, "omega", x, n);
            // h-norm of omega with h = g0 + omega omega^T must stay below 1.
            const Matrix h = g0 + om * om.transpose();
            const double s = om.dot(h.ldlt().solve(om));
            if (!(s < 1.0)) violation("Fermat metric is not a Randers metric", x);
          } else if constexpr (std::is_same_v<P, BogoslovskyParams>) {
            check_lorentzian(p.g0(x), p.time_orientation, "g0", x, n);
            check_vector(p.omega(x), "omega", x, n);
          } else if constexpr (std::is_same_v<P, KosteleckyParams>) {
            check_lorentzian(p.g0(x), p.time_orientation, "g0", x, n);
            check_vector(p.a(x), "a", x, n);
            check_vector(p.b(x), "b", x, n);
          } else if constexpr (std::is_same_v<P, LorentzianParams>) {
            check_lorentzian(p.g(x), p.time_orientation, "g", x, n);
          } else {
            if (!p.lagrangian) violation("tabulated model has no Lagrangian", x);
          }
        },
        *params_);
  }
}

double lagrangian_value(const MetricModel& model, const Vector& x, const Vector& v) {
  const Vector xw = model.chart().wrap(x);
  return raw_jet(model, xw, model.is_reversed() ? Vector(-v) : v, 0).value;
}

LagrangianJet lagrangian_jet_fd(const MetricModel& model, const Vector& x, const Vector& v, int order) {
  const Eigen::Index n = v.size();
  const double h = std::max(1e-4, 1e-4 * v.norm());
  auto L = [&](const Vector& w) { return lagrangian_value(model, x, w); };

  LagrangianJet j;
  j.value = L(v);
  if (order < 1) return j;

  auto gradient = [&](double step) {
    Vector g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e[i] = step;
      g[i] = (L(v + e) - L(v - e)) / (2.0 * step);
    }
    return g;
  };
  j.gradient = (4.0 * gradient(0.5 * h) - gradient(h)) / 3.0;
  if (order < 2) return j;

  auto hessian = [&](double step) {
    Matrix H(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = i; k < n; ++k) {
        Vector ei = Vector::Zero(n), ek = Vector::Zero(n);
        ei[i] = step;
        ek[k] = step;
        H(i, k) = (L(v + ei + ek) - L(v + ei - ek) - L(v - ei + ek) + L(v - ei - ek)) /
                  (4.0 * step * step);
        H(k, i) = H(i, k);
      }
    }
    return H;
  };
  j.hessian = (4.0 * hessian(0.5 * h) - hessian(h)) / 3.0;
  return j;
}

LagrangianJet lagrangian_jet(const MetricModel& model, const Vector& x, const Vector& v, int order) {
  if (order == 0) {
    LagrangianJet j;
    j.value = lagrangian_value(model, x, v);
    return j;
  }
  if (model.derivative_mode() == DerivativeMode::FiniteDifference || !model.has_closed_form())
    return lagrangian_jet_fd(model, x, v, order);
  const Vector xw = model.chart().wrap(x);
  if (!model.is_reversed()) return raw_jet(model, xw, v, order);
  LagrangianJet j = raw_jet(model, xw, -v, order);
  if (order >= 1) j.gradient = -j.gradient;
  return j;
}

std::vector<DomainCondition> domain_conditions(const MetricModel& model, const Vector& x,
                                               const Vector& v_in) {
  const Vector xw = model.chart().wrap(x);
  const Vector v = model.is_reversed() ? Vector(-v_in) : v_in;
  const double vn = v.norm();
  return std::visit(
      [&](const auto& p) -> std::vector<DomainCondition> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RandersParams>) {
          const double alpha = std::sqrt(v.dot(p.h(xw) * v));
          return {{alpha + p.beta(xw).dot(v), alpha}};
        } else if constexpr (std::is_same_v<P, MatsumotoParams>) {
          const double alpha = std::sqrt(v.dot(p.h(xw) * v));
          const double beta = p.beta(xw).dot(v);
          return {{(alpha - beta) * (alpha - 2.0 * beta), alpha * alpha}};
        } else if constexpr (std::is_same_v<P, BogoslovskyParams>) {
          const Matrix g = p.g0(xw);
          const Vector om = p.omega(xw);
          const Vector gt = g * p.time_orientation;
          return {{-v.dot(g * v), vn * vn},
                  {om.dot(v), vn * om.norm()},
                  {-gt.dot(v), vn * gt.norm()}};
        } else if constexpr (std::is_same_v<P, KosteleckyParams>) {
          const Matrix g = p.g0(xw);
          const Vector gt = g * p.time_orientation;
          return {{-v.dot(g * v), vn * vn}, {-gt.dot(v), vn * gt.norm()}};
        } else if constexpr (std::is_same_v<P, LorentzianParams>) {
          const Matrix g = p.g(xw);
          const Vector gt = g * p.time_orientation;
          return {{-v.dot(g * v), vn * vn}, {-gt.dot(v), vn * gt.norm()}};
        } else if constexpr (std::is_same_v<P, TabulatedParams>) {
          if (!p.margin) return {};
          return {{(*p.margin)(xw, v), vn}};
        } else {
          // riemannian, zermelo, fermat: positive on the whole slit tangent space
          return {};
        }
      },
      model.params());
}

std::optional<double> degeneracy_value(const MetricModel& model, const Vector& x, const Vector& v_in) {
  const auto* p = std::get_if<KosteleckyParams>(&model.params());
  if (!p) return std::nullopt;
  const Vector xw = model.chart().wrap(x);
  const Vector v = model.is_reversed() ? Vector(-v_in) : v_in;
  const Matrix g = p->g0(xw);
  const double q = -v.dot(g * v);
  return p->mass * std::sqrt(std::max(q, 0.0)) + v.dot(g * p->a(xw));
}

}  // namespace finsler
