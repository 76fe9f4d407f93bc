#pragma once

#include <array>
#include <vector>

#include "gapcert/geometry.hpp"

namespace gapcert {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Symmetric coefficient matrix A(x) of the divergence-form operator.
struct CoefficientField {
  enum class Kind { constant, checkerboard };
  Kind kind = Kind::constant;
  int dim = 2;
  Matrix3 matrix{};                 // constant case, scale already applied
  double period = 1.0;              // checkerboard cell size
  Point origin{};                   // checkerboard anchor
  std::array<double, 2> values{};   // checkerboard: values[parity] * identity

  static CoefficientField identity(int dim, double scale = 1.0);
  static CoefficientField diagonal(int dim, const std::vector<double>& diag);

  Matrix3 at(const Point& x) const;
  bool has_cross_terms() const;
  /// Smallest / largest eigenvalue of A over the whole field.
  double lower_ellipticity() const;
  double upper_ellipticity() const;
};

/// Piecewise-constant potential: background plus well values on primitives
/// (overlapping wells add up). A point on a primitive's boundary belongs to it.
struct PotentialField {
  int dim = 2;
  double background = 0.0;
  struct Well {
    Primitive shape;
    double value = 0.0;
  };
  std::vector<Well> wells;

  double operator()(const Point& x) const;
  /// Negative part max(-V, 0).
  double negative_part(const Point& x) const;
  double min_value() const;
};

/// Eigenvalues of a symmetric dim x dim matrix, ascending.
std::array<double, 3> symmetric_eigenvalues(const Matrix3& a, int dim);

}  // namespace gapcert
