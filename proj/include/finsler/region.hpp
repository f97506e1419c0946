#pragma once

#include "finsler/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace finsler {

/// Deterministic point-membership predicate on a chart (open regions D,
/// sets A in a slice, punctured charts).
class Region {
 public:
  using Predicate = std::function<bool(const Vector&)>;

  Region(Predicate contains, std::string description)
      : contains_(std::make_shared<const Predicate>(std::move(contains))),
        description_(std::move(description)) {}

  bool contains(const Vector& x) const { return (*contains_)(x); }
  const std::string& description() const { return description_; }

  static Region everything();
  static Region box(Vector lo, Vector hi);
  static Region ball(Vector center, double radius);
  /// { x : normal . x < offset }
  static Region halfspace(Vector normal, double offset);
  static Region union_of(std::vector<Region> parts);
  static Region intersection_of(std::vector<Region> parts);
  static Region difference(Region a, Region b);
  static Region complement(Region a);
  /// `base` with isolated points removed. Point-membership sampling never hits
  /// them, so curve checks also test closest approach to deleted_points().
  static Region punctured(Region base, std::vector<Vector> points);

  const std::vector<Vector>& deleted_points() const { return deleted_; }

 private:
  std::shared_ptr<const Predicate> contains_;
  std::string description_;
  std::vector<Vector> deleted_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// A single coordinate chart: bounding box, optional periodic axes (flat
/// cylinders/tori) and an optional open-region predicate.
struct Chart {
  std::vector<Interval> box;
  std::vector<bool> periodic;
  std::optional<Region> region;

  Chart() = default;
  Chart(std::vector<Interval> box_, std::vector<bool> periodic_ = {},
        std::optional<Region> region_ = std::nullopt);

  static Chart cube(int n, double half_width);

  int dimension() const { return static_cast<int>(box.size()); }
  bool is_periodic(int axis) const { return periodic[static_cast<std::size_t>(axis)]; }

  /// Maps periodic coordinates into [lo, hi).
  Vector wrap(const Vector& x) const;
  /// Smallest representative of b - a on periodic axes.
  Vector displacement(const Vector& a, const Vector& b) const;
  /// Inside the box on non-periodic axes (closed box).
  bool in_box(const Vector& x) const;
  /// in_box and, when present, inside the region.
  bool contains(const Vector& x) const;
  Vector center() const;
};

}  // namespace finsler
