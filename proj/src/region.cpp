#include "finsler/region.hpp"

#include <cmath>
#include <sstream>

namespace finsler {

namespace {

std::string vec_str(const Vector& v) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

std::string join(const std::vector<Region>& parts, const char* op) {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += std::string(" ") + op + " ";
    s += parts[i].description();
  }
  return s + ")";
}

}  // namespace

Region Region::everything() {
  return Region([](const Vector&) { return true; }, "everything");
}

Region Region::box(Vector lo, Vector hi) {
  std::string d = "box(" + vec_str(lo) + "," + vec_str(hi) + ")";
  return Region(
      [lo = std::move(lo), hi = std::move(hi)](const Vector& x) {
        return ((x - lo).array() > 0.0).all() && ((hi - x).array() > 0.0).all();
      },
      std::move(d));
}

Region Region::ball(Vector center, double radius) {
  std::ostringstream os;
  os << "ball(" << vec_str(center) << "," << radius << ")";
  return Region(
      [c = std::move(center), radius](const Vector& x) { return (x - c).norm() < radius; },
      os.str());
}

Region Region::halfspace(Vector normal, double offset) {
  std::ostringstream os;
  os << "halfspace(" << vec_str(normal) << "<" << offset << ")";
  return Region([nrm = std::move(normal), offset](const Vector& x) { return nrm.dot(x) < offset; },
                os.str());
}

Region Region::union_of(std::vector<Region> parts) {
  std::string d = join(parts, "or");
  return Region(
      [parts = std::move(parts)](const Vector& x) {
        for (const auto& p : parts)
          if (p.contains(x)) return true;
        return false;
      },
      std::move(d));
}

Region Region::intersection_of(std::vector<Region> parts) {
  std::string d = join(parts, "and");
  std::vector<Vector> deleted;
  for (const auto& p : parts) deleted.insert(deleted.end(), p.deleted_.begin(), p.deleted_.end());
  Region r(
      [parts = std::move(parts)](const Vector& x) {
        for (const auto& p : parts)
          if (!p.contains(x)) return false;
        return true;
      },
      std::move(d));
  r.deleted_ = std::move(deleted);
  return r;
}

Region Region::difference(Region a, Region b) {
  std::string d = "(" + a.description() + " minus " + b.description() + ")";
  auto deleted = a.deleted_;
  Region r([a = std::move(a), b = std::move(b)](const Vector& x) {
    return a.contains(x) && !b.contains(x);
  }, std::move(d));
  r.deleted_ = std::move(deleted);
  return r;
}

Region Region::complement(Region a) {
  std::string d = "not " + a.description();
  return Region([a = std::move(a)](const Vector& x) { return !a.contains(x); }, std::move(d));
}

Region Region::punctured(Region base, std::vector<Vector> points) {
  std::string d = base.description() + " minus {";
  for (std::size_t i = 0; i < points.size(); ++i) d += (i ? "," : "") + vec_str(points[i]);
  d += "}";
  Region r(
      [base, points](const Vector& x) {
        if (!base.contains(x)) return false;
        for (const auto& p : points)
          if (x == p) return false;
        return true;
      },
      std::move(d));
  r.deleted_ = base.deleted_;
  r.deleted_.insert(r.deleted_.end(), points.begin(), points.end());
  return r;
}

Chart::Chart(std::vector<Interval> box_, std::vector<bool> periodic_, std::optional<Region> region_)
    : box(std::move(box_)), periodic(std::move(periodic_)), region(std::move(region_)) {
  if (box.size() < 1) throw Error(ErrorCode::SchemaError, "chart needs at least one axis");
  if (periodic.empty()) periodic.assign(box.size(), false);
  if (periodic.size() != box.size())
    throw Error(ErrorCode::SchemaError, "chart periodic flags do not match dimension");
  for (const auto& iv : box)
    if (!(iv.hi > iv.lo)) throw Error(ErrorCode::SchemaError, "chart interval is empty");
}

Chart Chart::cube(int n, double half_width) {
  return Chart(std::vector<Interval>(static_cast<std::size_t>(n), Interval{-half_width, half_width}));
}

Vector Chart::wrap(const Vector& x) const {
  Vector y = x;
  for (int i = 0; i < dimension(); ++i) {
    if (!is_periodic(i)) continue;
    const auto& iv = box[static_cast<std::size_t>(i)];
    double t = std::fmod(y[i] - iv.lo, iv.width());
    if (t < 0) t += iv.width();
    y[i] = iv.lo + t;
  }
  return y;
}

Vector Chart::displacement(const Vector& a, const Vector& b) const {
  Vector d = b - a;
  for (int i = 0; i < dimension(); ++i) {
    if (!is_periodic(i)) continue;
    const double w = box[static_cast<std::size_t>(i)].width();
    d[i] -= w * std::round(d[i] / w);
  }
  return d;
}

bool Chart::in_box(const Vector& x) const {
  for (int i = 0; i < dimension(); ++i) {
    if (is_periodic(i)) continue;
    const auto& iv = box[static_cast<std::size_t>(i)];
    if (!(x[i] >= iv.lo && x[i] <= iv.hi)) return false;
  }
  return true;
}

bool Chart::contains(const Vector& x) const {
  if (!in_box(x)) return false;
  return !region || region->contains(wrap(x));
}

Vector Chart::center() const {
  Vector c(dimension());
  for (int i = 0; i < dimension(); ++i) {
    const auto& iv = box[static_cast<std::size_t>(i)];
    c[i] = 0.5 * (iv.lo + iv.hi);
  }
  return c;
}

}  // namespace finsler
