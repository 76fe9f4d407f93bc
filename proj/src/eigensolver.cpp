#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <cstdlib>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "gapcert/errors.hpp"
#include "gapcert/pde.hpp"

namespace gapcert {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Orthonormalizes the columns of Z against Q and among themselves by
// repeated classical Gram-Schmidt (re-orthogonalize while a pass removes more
// than 30% of the norm). Columns that collapse into span(Q) are dropped.
void orthonormalize(const Mat& Q, Mat& Z) {
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    Vec z = Z.col(j);
    const double orig = z.norm();
    if (!(orig > 0)) continue;
    double before = orig;
    bool ok = false;
    for (int pass = 0; pass < 4; ++pass) {
      if (Q.cols() > 0) z -= Q * (Q.transpose() * z);
      if (kept > 0) z -= Z.leftCols(kept) * (Z.leftCols(kept).transpose() * z);
      const double after = z.norm();
      if (after < 1e-13 * orig) break;
      if (after > 0.7 * before) {
        ok = true;
        break;
      }
      before = after;
    }
    if (!ok) continue;
    Z.col(kept++) = z / z.norm();
  }
  Z.conservativeResize(Eigen::NoChange, kept);
}

}  // namespace

EigenResult lowest_eigenpairs(const DiscreteOperator& op, int k, const EigenOptions& opt) {
  if (k != 2) throw Error(ErrorKind::invalid_input, "exactly two eigenpairs are computed");
  const SpMat H = op.symmetric_form();
  const Eigen::Index n = H.rows();
  if (n < 4) throw Error(ErrorKind::convergence_error, "problem too small for the block eigensolver");
  const int b = std::max(opt.block, k);

  // Gershgorin lower bound, pushed slightly further down, as the shift.
  double lower = std::numeric_limits<double>::infinity(), scale = 0.0;
  Vec offsum = Vec::Zero(n), diag = Vec::Zero(n);
  for (int col = 0; col < H.outerSize(); ++col)
    for (SpMat::InnerIterator it(H, col); it; ++it) {
      if (it.row() == it.col())
        diag[it.row()] = it.value();
      else
        offsum[it.row()] += std::abs(it.value());
    }
  for (Eigen::Index i = 0; i < n; ++i) {
    lower = std::min(lower, diag[i] - offsum[i]);
    scale = std::max(scale, std::abs(diag[i]) + offsum[i]);
  }
  const double sigma = lower - 1e-3 * std::max(1.0, std::abs(lower));

  SpMat shifted = H;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::convergence_error, "factorization of the shifted operator failed");
  }

  std::mt19937_64 rng(opt.seed);
  auto uniform = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
  Mat V(n, 0), AV(n, 0), T(0, 0);
  Mat Z(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) Z(i, j) = uniform();

  Vec theta;
  Mat Y, R;
  double best_res = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    orthonormalize(V, Z);
    if (Z.cols() == 0) {
      for (Eigen::Index i = 0; i < n; ++i) Z(i, 0) = uniform();
      Z.conservativeResize(Eigen::NoChange, 1);
      orthonormalize(V, Z);
    }
    const Mat AZ = H * Z;
    const Eigen::Index m = V.cols(), add = Z.cols();
    Mat Tn(m + add, m + add);
    if (m > 0) {
      Tn.topLeftCorner(m, m) = T;
      const Mat c = V.transpose() * AZ;
      Tn.topRightCorner(m, add) = c;
      Tn.bottomLeftCorner(add, m) = c.transpose();
    }
    Mat zz = Z.transpose() * AZ;
    Tn.bottomRightCorner(add, add) = 0.5 * (zz + zz.transpose());
    T = Tn;
    V.conservativeResize(n, m + add);
    V.rightCols(add) = Z;
    AV.conservativeResize(n, m + add);
    AV.rightCols(add) = AZ;

    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    const Eigen::Index keep = std::min<Eigen::Index>(T.cols(), b);
    theta = es.eigenvalues().head(keep);
    const Mat S = es.eigenvectors().leftCols(keep);
    Y = V * S;
    R = AV * S - Y * theta.asDiagonal();
    // Convergence is judged on explicitly recomputed residuals.
    const Mat Rk = H * Y.leftCols(k) - Y.leftCols(k) * theta.head(k).asDiagonal();
    double worst = 0.0;
    for (int j = 0; j < k; ++j) worst = std::max(worst, Rk.col(j).norm());
    best_res = std::min(best_res, worst);
    if (worst <= opt.tol && V.cols() >= 2 * b) break;

    if (V.cols() + b > opt.max_basis) {
      // thick restart on the 2b lowest Ritz vectors
      const Eigen::Index r = std::min<Eigen::Index>(T.cols(), 2 * b);
      const Mat Sr = es.eigenvectors().leftCols(r);
      V = V * Sr;
      AV = AV * Sr;
      T = es.eigenvalues().head(r).asDiagonal();
    }
    // Expand only along Ritz vectors that are not yet converged.
    std::vector<Eigen::Index> open;
    for (Eigen::Index j = 0; j < keep; ++j)
      if (R.col(j).norm() > 0.1 * opt.tol) open.push_back(j);
    if (open.empty()) open.push_back(keep - 1);
    Mat W(n, static_cast<Eigen::Index>(open.size()));
    for (size_t j = 0; j < open.size(); ++j) W.col(j) = Y.col(open[j]);
    Z = llt.solve(W);
  }
  if (iter == opt.max_iterations) {
    std::ostringstream os;
    os << "eigensolver did not reach residual " << opt.tol << " (best " << best_res << ")";
    throw Error(ErrorKind::convergence_error, os.str());
  }

  EigenResult res;
  res.grid = op.grid;
  res.quadrature = op.node_quadrature();
  res.lambda0 = theta[0];
  res.lambda1 = theta[1];
  const Mat Rf = H * Y.leftCols(2) - Y.leftCols(2) * theta.head(2).asDiagonal();
  res.residual0 = Rf.col(0).norm();
  res.residual1 = Rf.col(1).norm();
  res.iterations = iter + 1;
  res.degenerate = (res.lambda1 - res.lambda0) < 10.0 * opt.tol * std::abs(res.lambda0);
  (void)scale;

  // Back to grid functions: psi = W^{-1/2} v, unit discrete L2 norm.
  auto to_grid = [&](const Vec& v) {
    std::vector<double> f(op.grid.total(), 0.0);
    for (long u = 0; u < op.size(); ++u) f[op.unknown_to_node[u]] = v[u] / std::sqrt(op.weights[u]);
    const double nrm = std::sqrt(l2_norm_squared(res, f));
    for (double& x : f) x /= nrm;
    return f;
  };
  res.psi0 = to_grid(Y.col(0));
  res.psi1 = to_grid(Y.col(1));
  double s = 0.0;
  for (double x : res.psi0) s += x;
  if (s < 0)
    for (double& x : res.psi0) x = -x;
  return res;
}

double l2_norm_squared(const EigenResult& r, const std::vector<double>& f) {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += r.quadrature[i] * f[i] * f[i];
  return s;
}

}  // namespace gapcert
