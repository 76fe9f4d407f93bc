#include <cmath>
#include <sstream>

#include "gapcert/errors.hpp"
#include "gapcert/pde.hpp"

namespace gapcert {

std::array<long, 3> GridInfo::coords(long node) const {
  std::array<long, 3> c{};
  c[0] = node % nodes[0];
  c[1] = (node / nodes[0]) % nodes[1];
  c[2] = node / (nodes[0] * nodes[1]);
  return c;
}

Point GridInfo::position(long node) const {
  const auto c = coords(node);
  Point x{};
  for (int i = 0; i < dim; ++i) x[i] = origin[i] + h * c[i];
  return x;
}

Eigen::SparseMatrix<double> DiscreteOperator::symmetric_form() const {
  Eigen::VectorXd s = weights.cwiseSqrt().cwiseInverse();
  Eigen::SparseMatrix<double> H = K;
  for (int col = 0; col < H.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, col); it; ++it)
      it.valueRef() = it.value() * (s[it.row()] * s[it.col()]);
  return H;
}

std::vector<double> DiscreteOperator::node_quadrature() const {
  std::vector<double> q(grid.total(), 0.0);
  const double cell = std::pow(grid.h, grid.dim);
  for (long u = 0; u < size(); ++u) q[unknown_to_node[u]] = weights[u] * cell;
  return q;
}

namespace {

std::string point_text(const Point& x, int dim) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

void check_sample(const EllipticProblem& pb, const Point& x, const Matrix3& a) {
  const int dim = pb.domain.dim;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      if (a[i][j] != a[j][i])
        throw Error(ErrorKind::assembly_error, "coefficient matrix not symmetric at " + point_text(x, dim));
  const auto ev = symmetric_eigenvalues(a, dim);
  const double slack = 1e-12 * std::max(1.0, pb.mu);
  if (!(ev[0] > 0) || ev[0] < pb.nu - slack || ev[dim - 1] > pb.mu + slack) {
    std::ostringstream os;
    os << "ellipticity violated at " << point_text(x, dim) << ": eigenvalues in [" << ev[0] << ", "
       << ev[dim - 1] << "], declared [" << pb.nu << ", " << pb.mu << "]";
    throw Error(ErrorKind::assembly_error, os.str());
  }
}

}  // namespace

DiscreteOperator assemble(const EllipticProblem& pb, double h, FaceAveraging averaging) {
  const DomainSpec& dom = pb.domain;
  dom.validate();
  const int dim = dom.dim;
  if (!(h > 0)) throw Error(ErrorKind::assembly_error, "grid step must be positive");

  DiscreteOperator op;
  GridInfo& g = op.grid;
  g.dim = dim;
  g.origin = dom.lo;
  g.h = h;
  std::array<long, 3> cells{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    const double ext = dom.hi[i] - dom.lo[i];
    cells[i] = std::lround(ext / h);
    if (cells[i] < 2 || std::abs(cells[i] * h - ext) > 1e-9 * ext) {
      throw Error(ErrorKind::assembly_error, "grid step must divide every box extent");
    }
    g.nodes[i] = cells[i] + 1;
  }

  // Unknowns: every node not on a Dirichlet face.
  op.node_to_unknown.assign(g.total(), -1);
  std::vector<double> frac;
  for (long node = 0; node < g.total(); ++node) {
    const auto c = g.coords(node);
    bool dirichlet = false;
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      const bool at_lo = c[a] == 0, at_hi = c[a] == cells[a];
      if ((at_lo && dom.faces[2 * a] == FaceCondition::dirichlet) ||
          (at_hi && dom.faces[2 * a + 1] == FaceCondition::dirichlet))
        dirichlet = true;
      if (at_lo || at_hi) w *= 0.5;
    }
    if (dirichlet) continue;
    op.node_to_unknown[node] = static_cast<long>(op.unknown_to_node.size());
    op.unknown_to_node.push_back(node);
    frac.push_back(w);
  }
  const long N = op.size();
  if (N == 0) throw Error(ErrorKind::assembly_error, "no unknowns left after Dirichlet elimination");
  op.weights = Eigen::Map<Eigen::VectorXd>(frac.data(), N);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(N) * (2 * dim + 1) * 2);
  const double inv_h2 = 1.0 / (h * h);
  const double sub = 1.0 / static_cast<double>(1 << (dim - 1));
  auto add_pair = [&](long p, long q, double w) {
    const long up = op.node_to_unknown[p], uq = op.node_to_unknown[q];
    if (up >= 0) trip.emplace_back(up, up, w);
    if (uq >= 0) trip.emplace_back(uq, uq, w);
    if (up >= 0 && uq >= 0) {
      trip.emplace_back(up, uq, -w);
      trip.emplace_back(uq, up, -w);
    }
  };

  // Edge fluxes: each edge along axis a collects one sub-face per adjacent
  // cell; A_aa is sampled at the two quarter points of the sub-face's edge
  // segment and averaged.
  for (long node = 0; node < g.total(); ++node) {
    const auto c = g.coords(node);
    const Point x = g.position(node);
    for (int a = 0; a < dim; ++a) {
      if (c[a] == cells[a]) continue;
      const long nb = node + (a == 0 ? 1 : (a == 1 ? g.nodes[0] : g.nodes[0] * g.nodes[1]));
      double coef = 0.0;
      for (int mask = 0; mask < (1 << (dim - 1)); ++mask) {
        Point s = x;
        bool inside = true;
        int bit = 0;
        for (int b = 0; b < dim; ++b) {
          if (b == a) continue;
          const bool up = (mask >> bit++) & 1;
          if ((up && c[b] == cells[b]) || (!up && c[b] == 0)) inside = false;
          s[b] += up ? 0.25 * h : -0.25 * h;
        }
        if (!inside) continue;
        Point s1 = s, s2 = s;
        s1[a] += 0.25 * h;
        s2[a] += 0.75 * h;
        const Matrix3 A1 = pb.A.at(s1), A2 = pb.A.at(s2);
        check_sample(pb, s1, A1);
        check_sample(pb, s2, A2);
        const double v1 = A1[a][a], v2 = A2[a][a];
        coef += averaging == FaceAveraging::arithmetic ? 0.5 * (v1 + v2) : 2.0 * v1 * v2 / (v1 + v2);
      }
      if (coef != 0.0) add_pair(node, nb, coef * sub * inv_h2);
    }
  }

  // Off-diagonal coefficients through cell-averaged gradients.
  if (pb.A.has_cross_terms()) {
    const int corners = 1 << dim;
    for (long k = 0; k < (dim > 2 ? cells[2] : 1); ++k)
      for (long j = 0; j < (dim > 1 ? cells[1] : 1); ++j)
        for (long i = 0; i < cells[0]; ++i) {
          Point center{};
          const long base = g.index(i, j, k);
          for (int b = 0; b < dim; ++b) center[b] = g.origin[b] + h * ((b == 0 ? i : b == 1 ? j : k) + 0.5);
          const Matrix3 A = pb.A.at(center);
          check_sample(pb, center, A);
          std::vector<long> node(corners);
          std::vector<std::array<double, 3>> grad(corners);
          for (int m = 0; m < corners; ++m) {
            long off = 0;
            for (int b = 0; b < dim; ++b)
              if ((m >> b) & 1) off += (b == 0 ? 1 : (b == 1 ? g.nodes[0] : g.nodes[0] * g.nodes[1]));
            node[m] = base + off;
            for (int b = 0; b < dim; ++b) grad[m][b] = (((m >> b) & 1) ? 1.0 : -1.0) * sub / h;
          }
          // cell energy h^n sum_{a != b} A_ab g_a g_b, divided by h^n
          for (int m1 = 0; m1 < corners; ++m1) {
            const long u1 = op.node_to_unknown[node[m1]];
            if (u1 < 0) continue;
            for (int m2 = m1; m2 < corners; ++m2) {
              const long u2 = op.node_to_unknown[node[m2]];
              if (u2 < 0) continue;
              double v = 0.0;
              for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                  if (a != b) v += A[a][b] * grad[m1][a] * grad[m2][b];
              if (v == 0.0) continue;
              if (m1 == m2) {
                trip.emplace_back(u1, u1, v);
              } else {
                trip.emplace_back(u1, u2, v);
                trip.emplace_back(u2, u1, v);
              }
            }
          }
        }
  }

  for (long u = 0; u < N; ++u) {
    const double v = pb.V(g.position(op.unknown_to_node[u]));
    if (v != 0.0) trip.emplace_back(u, u, v * op.weights[u]);
  }

  op.K.resize(N, N);
  op.K.setFromTriplets(trip.begin(), trip.end());
  op.K.makeCompressed();
  return op;
}

}  // namespace gapcert
