#include "gapcert/fields.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gapcert/errors.hpp"

namespace gapcert {

CoefficientField CoefficientField::identity(int dim, double scale) {
  CoefficientField f;
  f.dim = dim;
  for (int i = 0; i < dim; ++i) f.matrix[i][i] = scale;
  return f;
}

CoefficientField CoefficientField::diagonal(int dim, const std::vector<double>& diag) {
  CoefficientField f;
  f.dim = dim;
  for (int i = 0; i < dim; ++i) f.matrix[i][i] = diag.at(i);
  return f;
}

Matrix3 CoefficientField::at(const Point& x) const {
  if (kind == Kind::constant) return matrix;
  long parity = 0;
  for (int i = 0; i < dim; ++i) parity += static_cast<long>(std::floor((x[i] - origin[i]) / period));
  const double v = values[((parity % 2) + 2) % 2];
  Matrix3 m{};
  for (int i = 0; i < dim; ++i) m[i][i] = v;
  return m;
}

bool CoefficientField::has_cross_terms() const {
  if (kind != Kind::constant) return false;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j && matrix[i][j] != 0.0) return true;
  return false;
}

double CoefficientField::lower_ellipticity() const {
  if (kind == Kind::checkerboard) return std::min(values[0], values[1]);
  return symmetric_eigenvalues(matrix, dim)[0];
}

double CoefficientField::upper_ellipticity() const {
  if (kind == Kind::checkerboard) return std::max(values[0], values[1]);
  return symmetric_eigenvalues(matrix, dim)[dim - 1];
}

std::array<double, 3> symmetric_eigenvalues(const Matrix3& a, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = a[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::array<double, 3> out{};
  for (int i = 0; i < dim; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double PotentialField::operator()(const Point& x) const {
  double v = background;
  for (const auto& w : wells)
    if (w.shape.signed_distance(x, dim) <= 0.0) v += w.value;
  return v;
}

double PotentialField::negative_part(const Point& x) const { return std::max(-(*this)(x), 0.0); }

double PotentialField::min_value() const {
  double neg = 0.0;
  for (const auto& w : wells) neg += std::min(w.value, 0.0);
  return background + neg;
}

}  // namespace gapcert
