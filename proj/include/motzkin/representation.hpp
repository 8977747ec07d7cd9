#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "config.hpp"
#include "diagram.hpp"
#include "pair.hpp"
#include "presentation.hpp"
#include "report.hpp"

namespace motzkin {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// A matrix on H^{(x) k} labelled with its domain and codomain tensor levels.
struct LinearOperator {
  int n = 0;
  int domain_level = 0;
  int codomain_level = 0;
  SparseMatrix matrix;
};

inline std::size_t tensor_dim(int n, int k) {
  std::size_t d = 1;
  for (int i = 0; i < k; ++i) {
    d *= static_cast<std::size_t>(n);
    if (d > limits().max_dim)
      throw ResourceLimitError("n^k = " + std::to_string(n) + "^" + std::to_string(k) + " exceeds max_dim " +
                               std::to_string(limits().max_dim));
  }
  return d;
}

inline SparseMatrix sparse_identity(std::size_t d) {
  SparseMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.setIdentity();
  return m;
}

inline SparseMatrix kron(const SparseMatrix& x, const SparseMatrix& y) {
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(x.nonZeros() * y.nonZeros()));
  for (int cx = 0; cx < x.outerSize(); ++cx)
    for (SparseMatrix::InnerIterator ix(x, cx); ix; ++ix)
      for (int cy = 0; cy < y.outerSize(); ++cy)
        for (SparseMatrix::InnerIterator iy(y, cy); iy; ++iy)
          trip.emplace_back(ix.row() * y.rows() + iy.row(), ix.col() * y.cols() + iy.col(), ix.value() * iy.value());
  SparseMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

/// The local operators t, l, p on H (x) H or H. The first tensor factor is the
/// most significant digit of the basis index.
struct LocalOperators {
  SparseMatrix t, l, p;
};

inline DenseVector temperley_lieb_vector(const MotzkinPair& pr) {
  DenseVector v = DenseVector::Zero(pr.n * pr.n);
  for (int i = 0; i < pr.n; ++i) v(i * pr.n + pr.bar(i)) = pr.a[i];
  return v;
}

inline LocalOperators local_operators(const MotzkinPair& pr) {
  const int n = pr.n;
  DenseVector va = temperley_lieb_vector(pr);
  DenseVector b = Eigen::Map<const DenseVector>(pr.b.data(), n);
  LocalOperators ops;
  DenseMatrix t = va * va.adjoint();
  DenseMatrix p = b * b.adjoint();
  // l(v_i (x) v_j) = v_j (x) p(v_i) = sum_m conj(b_i) b_m v_j (x) v_m
  DenseMatrix l = DenseMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) l(j * n + m, i * n + j) += std::conj(pr.b[i]) * pr.b[m];
  ops.t = t.sparseView(0.0, 0.0);
  ops.p = p.sparseView(0.0, 0.0);
  ops.l = l.sparseView(0.0, 0.0);
  return ops;
}

/// pi(g_i) on H^{(x) k} for the generators id, t_i, l_i, r_i, p_i (1-based i).
inline SparseMatrix generator_matrix(const MotzkinPair& pr, int k, Generator g, int i) {
  const std::size_t d = tensor_dim(pr.n, k);
  auto bad_index = [&] {
    return DomainError("index " + std::to_string(i) + " out of range for " + generator_name(g) + " at width " +
                       std::to_string(k));
  };
  auto place = [&](const SparseMatrix& local, int slot, int span) {
    auto left = sparse_identity(tensor_dim(pr.n, slot - 1));
    auto right = sparse_identity(tensor_dim(pr.n, k - slot - span + 1));
    return kron(kron(left, local), right);
  };
  auto ops = local_operators(pr);
  switch (g) {
    case Generator::Identity: return sparse_identity(d);
    case Generator::T:
      if (i < 1 || i > k - 1) throw bad_index();
      return place(ops.t, i, 2);
    case Generator::L:
      if (i < 1 || i > k - 1) throw bad_index();
      return place(ops.l, i, 2);
    case Generator::R:
      if (i < 1 || i > k - 1) throw bad_index();
      return SparseMatrix(place(ops.l, i, 2).adjoint());
    case Generator::P:
      if (i < 1 || i > k) throw bad_index();
      return place(ops.p, i, 1);
  }
  throw bad_index();
}

inline LinearOperator generator_operator(const MotzkinPair& pr, int k, Generator g, int i) {
  return {pr.n, k, k, generator_matrix(pr, k, g, i)};
}

/// Parses a token such as "t1", "l2", "r1", "p3" or "id".
inline std::pair<Generator, int> parse_generator_token(const std::string& tok) {
  if (tok == "id" || tok == "1") return {Generator::Identity, 0};
  if (tok.size() < 2) throw ParseError("bad generator token '" + tok + "'", 0);
  Generator g;
  switch (tok[0]) {
    case 't': g = Generator::T; break;
    case 'l': g = Generator::L; break;
    case 'r': g = Generator::R; break;
    case 'p': g = Generator::P; break;
    default: throw ParseError("bad generator token '" + tok + "'", 0);
  }
  for (std::size_t c = 1; c < tok.size(); ++c)
    if (tok[c] < '0' || tok[c] > '9') throw ParseError("bad generator token '" + tok + "'", c);
  return {g, std::stoi(tok.substr(1))};
}

/// Ordered product of generator matrices; the empty word is the identity.
inline LinearOperator evaluate_word(const MotzkinPair& pr, int k, const std::vector<std::string>& word) {
  SparseMatrix m = sparse_identity(tensor_dim(pr.n, k));
  for (const auto& tok : word) {
    auto [g, i] = parse_generator_token(tok);
    m = SparseMatrix(m * generator_matrix(pr, k, g, i));
  }
  return {pr.n, k, k, std::move(m)};
}

/// Planar evaluation of a single diagram: through strands are deltas, a top
/// arc emits lambda^{-1/2} v_A on its two slots, a bottom arc contracts with
/// lambda^{-1/2} <., v_A>, an isolated top point emits v and an isolated
/// bottom point contracts with <., v>. Works for any nesting.
inline SparseMatrix diagram_matrix(const MotzkinPair& pr, const MotzkinDiagram& d) {
  const int n = pr.n, k = d.width();
  const std::size_t dim = tensor_dim(n, k);
  const double scale = 1 / std::sqrt(pr.lambda_value());
  std::vector<std::size_t> weight(k);
  for (int s = 0; s < k; ++s) {
    weight[s] = 1;
    for (int u = s + 1; u < k; ++u) weight[s] *= n;
  }
  // top points whose value is free (left end of a top arc, isolated top)
  std::vector<int> free_top;
  for (int s = 0; s < k; ++s) {
    int q = d.partner(s);
    if (q == MotzkinDiagram::kIsolated || (q < k && q > s)) free_top.push_back(s);
  }
  std::vector<Eigen::Triplet<Complex>> trip;
  std::vector<int> y(k), x(k);
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t rest = col;
    for (int s = 0; s < k; ++s) {
      y[s] = static_cast<int>(rest / weight[s]);
      rest %= weight[s];
    }
    Complex bottom = 1;
    for (int s = 0; s < k && bottom != 0.0; ++s) {
      int q = d.partner(k + s);
      if (q == MotzkinDiagram::kIsolated) bottom *= std::conj(pr.b[y[s]]);
      else if (q >= k && q - k > s) bottom *= y[q - k] == pr.bar(y[s]) ? scale * std::conj(pr.a[y[s]]) : 0.0;
    }
    if (bottom == 0.0) continue;
    for (int s = 0; s < k; ++s) {
      int q = d.partner(s);
      if (q >= k) x[s] = y[q - k];
    }
    // run over all assignments of the free top points
    std::vector<int> choice(free_top.size(), 0);
    while (true) {
      Complex val = bottom;
      for (std::size_t f = 0; f < free_top.size(); ++f) {
        int s = free_top[f], v = choice[f];
        x[s] = v;
        int q = d.partner(s);
        if (q == MotzkinDiagram::kIsolated) {
          val *= pr.b[v];
        } else {
          x[q] = pr.bar(v);
          val *= scale * pr.a[v];
        }
      }
      if (val != 0.0) {
        std::size_t row = 0;
        for (int s = 0; s < k; ++s) row += static_cast<std::size_t>(x[s]) * weight[s];
        trip.emplace_back(static_cast<int>(row), static_cast<int>(col), val);
      }
      std::size_t f = 0;
      while (f < choice.size() && ++choice[f] == n) choice[f++] = 0;
      if (f == choice.size()) break;
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

inline LinearOperator evaluate_diagram(const MotzkinPair& pr, const MotzkinDiagram& d) {
  return {pr.n, d.width(), d.width(), diagram_matrix(pr, d)};
}

/// Linear extension of diagram_matrix to algebra elements.
inline SparseMatrix element_matrix(const MotzkinPair& pr, const AlgebraElement& x) {
  const std::size_t dim = tensor_dim(pr.n, x.width());
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [d, c] : x.terms()) m += Complex(c.get_d()) * diagram_matrix(pr, d);
  return m;
}

/// Numeric backend for the relation visitor.
struct NumericOps {
  const MotzkinPair& pr;
  int k;
  SparseMatrix t(int i) const { return generator_matrix(pr, k, Generator::T, i); }
  SparseMatrix l(int i) const { return generator_matrix(pr, k, Generator::L, i); }
  SparseMatrix adj(const SparseMatrix& x) const { return SparseMatrix(x.adjoint()); }
  SparseMatrix scale(double s, const SparseMatrix& x) const { return Complex(s) * x; }
  double lambda() const { return pr.lambda_value(); }
};

/// Frobenius-norm residual of every defining relation at width k.
inline Report relation_residuals(const MotzkinPair& pr, int k, double tol = 1e-10) {
  if (k < 2) throw DomainError("relation check needs k >= 2");
  Report report;
  report.title = "representation relations n=" + std::to_string(pr.n) + " k=" + std::to_string(k);
  NumericOps ops{pr, k};
  for_each_relation(k, ops, [&](const std::string& rel, const std::string& idx, const SparseMatrix& diff) {
    report.add_numeric(rel + " " + idx, diff.norm(), tol, "frobenius");
  });
  return report;
}

/// Span closure of the generator matrices: returns the dimension of the
/// algebra they generate and the number of multiplication rounds used.
struct SpanResult {
  int dimension = 0;
  int rounds = 0;
  bool converged = false;
};

inline SpanResult span_dimension(const MotzkinPair& pr, int k, int max_rounds = 8, double rel_tol = 1e-8) {
  const std::size_t dim = tensor_dim(pr.n, k);
  if (dim * dim > 16 * limits().max_dim) throw ResourceLimitError("operator space too large for span closure");
  std::vector<DenseMatrix> gens;
  gens.push_back(DenseMatrix(generator_matrix(pr, k, Generator::Identity, 0)));
  for (int i = 1; i <= k - 1; ++i)
    for (Generator g : {Generator::T, Generator::L, Generator::R}) gens.push_back(DenseMatrix(generator_matrix(pr, k, g, i)));
  for (int i = 1; i <= k; ++i) gens.push_back(DenseMatrix(generator_matrix(pr, k, Generator::P, i)));

  std::vector<DenseVector> basis;  // orthonormal, vectorized
  double largest = 0;
  for (const auto& g : gens) largest = std::max(largest, g.norm());
  auto try_add = [&](const DenseMatrix& m) {
    DenseVector v = Eigen::Map<const DenseVector>(m.data(), m.size());
    double original = v.norm();
    if (original <= rel_tol * largest) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) v -= e.dot(v) * e;
    if (v.norm() <= rel_tol * std::max(original, largest)) return false;
    basis.push_back(v / v.norm());
    return true;
  };

  std::vector<DenseMatrix> frontier;
  for (const auto& g : gens)
    if (try_add(g)) frontier.push_back(g);
  SpanResult res;
  for (int round = 1; round <= max_rounds; ++round) {
    std::vector<DenseMatrix> next;
    for (const auto& x : frontier)
      for (std::size_t gi = 1; gi < gens.size(); ++gi) {
        DenseMatrix y = gens[gi] * x;
        if (try_add(y)) next.push_back(std::move(y));
      }
    res.rounds = round;
    if (next.empty()) {
      res.converged = true;
      break;
    }
    frontier = std::move(next);
  }
  res.dimension = static_cast<int>(basis.size());
  return res;
}

/// The conditional expectation transported to the representation. For X on
/// H^{(x)(k+1)} forms W = (I (x) p (x) p)(I (x) t)(X (x) I)(I (x) t)(I (x) p (x) p)
/// on H^{(x)(k+2)}, checks that W = Z (x) p (x) p, and returns Z / lambda. The
/// 1/lambda makes it agree with the diagram-level E, since the compression
/// by p (x) p of t contributes |<v (x) v, v_A>|^2 = lambda.
inline LinearOperator rep_conditional_expectation(const MotzkinPair& pr, int k, const SparseMatrix& x,
                                                  double tol = 1e-10) {
  const int m = k + 1;  // x acts on H^{(x) m}
  const std::size_t dx = tensor_dim(pr.n, m);
  if (static_cast<std::size_t>(x.rows()) != dx || static_cast<std::size_t>(x.cols()) != dx)
    throw DimensionError("operator does not act on H^(k+1)");
  const int big = m + 1;
  auto pp = SparseMatrix(generator_matrix(pr, big, Generator::P, m) * generator_matrix(pr, big, Generator::P, big));
  auto t = generator_matrix(pr, big, Generator::T, m);
  SparseMatrix lifted = kron(x, sparse_identity(pr.n));
  SparseMatrix w = pp * t * lifted * t * pp;

  // un-tensor the two trailing p slots: Z = (I (x) <v| (x) <v|) W (I (x) |v> (x) |v>)
  const std::size_t dz = tensor_dim(pr.n, k);
  DenseVector b = Eigen::Map<const DenseVector>(pr.b.data(), pr.n);
  DenseVector vv(pr.n * pr.n);
  for (int i = 0; i < pr.n; ++i)
    for (int j = 0; j < pr.n; ++j) vv(i * pr.n + j) = b(i) * b(j);
  SparseMatrix vv_col = DenseMatrix(vv).sparseView(0.0, 0.0);
  SparseMatrix inject = kron(sparse_identity(dz), vv_col);  // H^k -> H^{k+2}
  SparseMatrix z = SparseMatrix(inject.adjoint()) * w * inject;
  SparseMatrix rebuilt = kron(z, SparseMatrix((DenseMatrix(vv) * DenseMatrix(vv).adjoint()).sparseView(0.0, 0.0)));
  double residual = SparseMatrix(w - rebuilt).norm();
  if (residual > tol * std::max(1.0, w.norm()))
    throw StructuralError("compressed operator is not of the form Z (x) p (x) p (residual " +
                          std::to_string(residual) + ")");
  return {pr.n, m, k, SparseMatrix(Complex(1 / pr.lambda_value()) * z)};
}

}  // namespace motzkin
