#pragma once

#include "finsler/fields.hpp"
#include "finsler/metric_model.hpp"

#include <initializer_list>

namespace finsler::test {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline MatrixField identity(int n) { return constant_field(Matrix(Matrix::Identity(n, n))); }
inline VectorField zero(int n) { return constant_field(Vector(Vector::Zero(n))); }
inline VectorField constant(Vector v) { return constant_field(std::move(v)); }

inline MetricModel euclidean(int n = 2, double half = 2.0) {
  return MetricModel::riemannian(Chart::cube(n, half), identity(n));
}

inline MetricModel wind(double w, double half = 1.0) {
  return MetricModel::zermelo(Chart::cube(2, half), identity(2), constant(vec({w, 0.0})));
}

}  // namespace finsler::test
