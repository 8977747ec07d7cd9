#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qpoly.hpp"
#include "representation.hpp"

namespace motzkin {

namespace detail {

/// (A (x) I_{n^q}) x for every column x of X, without forming the Kronecker product.
inline DenseMatrix apply_left_factor(const DenseMatrix& A, const DenseMatrix& X, std::size_t right_dim) {
  DenseMatrix out(A.rows() * right_dim, X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    Eigen::Map<const DenseMatrix> m(X.col(c).data(), right_dim, A.cols());
    Eigen::Map<DenseMatrix> o(out.col(c).data(), right_dim, A.rows());
    o = m * A.transpose();
  }
  return out;
}

/// (I_{n^p} (x) A) x for every column x of X.
inline DenseMatrix apply_right_factor(const DenseMatrix& A, const DenseMatrix& X, std::size_t left_dim) {
  DenseMatrix out(A.rows() * left_dim, X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    Eigen::Map<const DenseMatrix> m(X.col(c).data(), A.cols(), left_dim);
    Eigen::Map<DenseMatrix> o(out.col(c).data(), A.rows(), left_dim);
    o = A * m;
  }
  return out;
}

inline DenseMatrix kron(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

/// Gram-Schmidt over the columns of M in order, keeping those whose residual
/// norm exceeds `threshold`.
inline DenseMatrix gram_schmidt_columns(const DenseMatrix& M, double threshold = 1e-8) {
  std::vector<DenseVector> kept;
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    DenseVector v = M.col(c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : kept) v -= e.dot(v) * e;
    double norm = v.norm();
    if (norm > threshold) kept.push_back(v / norm);
  }
  DenseMatrix out(M.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

/// Ratio between the smallest eigenvalue kept (>= 1/2) and the largest one
/// dropped of a hermitian near-projection. Dropped eigenvalues are floored at
/// machine epsilon so the ratio stays finite.
inline double spectral_gap(const DenseMatrix& Q) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es((Q + Q.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  double kept = 1e300, dropped = DBL_EPSILON;
  for (double e : es.eigenvalues()) {
    if (e >= 0.5) kept = std::min(kept, e);
    else dropped = std::max(dropped, std::abs(e));
  }
  return kept == 1e300 ? 1 / DBL_EPSILON : kept / dropped;
}

/// Snaps a near-projection to the projection onto its eigenvalues >= 1/2 when
/// its idempotency residual exceeds 1e-12; returns the rounding magnitude.
inline double round_to_projection(DenseMatrix& Q) {
  if ((Q * Q - Q).norm() <= 1e-12) return 0.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es((Q + Q.adjoint()) / 2.0);
  double magnitude = 0;
  DenseMatrix out = DenseMatrix::Zero(Q.rows(), Q.cols());
  for (Eigen::Index j = 0; j < Q.rows(); ++j) {
    double e = es.eigenvalues()(j);
    double snapped = e >= 0.5 ? 1.0 : 0.0;
    magnitude = std::max(magnitude, std::abs(e - snapped));
    if (snapped == 1.0) out += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
  }
  Q = out;
  return magnitude;
}

}  // namespace detail

/// G_k on H^{(x) k} from the symmetric recursion
/// G_{k+1} = (I (x) G_k)((I-P) (x) I) - phi(k)(I (x) G_k) T_1 (I (x) G_k), as dense matrices.
struct ProjectionResult {
  DenseMatrix G;
  double idempotency = 0;  // ||G^2 - G|| before rounding
  double rounding = 0;     // largest eigenvalue shift applied, 0 if none
};

inline ProjectionResult subproduct_projection(const MotzkinPair& pr, int k) {
  if (k < 0) throw DomainError("level must be non-negative");
  const std::size_t full = tensor_dim(pr.n, k);
  if (full > limits().max_dense_dim)
    throw ResourceLimitError("dense G_k needs n^k <= " + std::to_string(limits().max_dense_dim));
  if (k >= 2 && !is_generic(pr.lambda, k))
    throw SingularParameterError("1/lambda is not " + std::to_string(k) + "-generic");
  ProjectionResult res;
  res.G = DenseMatrix::Identity(1, 1);
  if (k == 0) return res;
  const int n = pr.n;
  DenseMatrix P(generator_matrix(pr, 1, Generator::P, 1));
  DenseMatrix one_minus_p = DenseMatrix::Identity(n, n) - P;
  res.G = one_minus_p;
  DenseMatrix t(local_operators(pr).t);
  for (int m = 1; m < k; ++m) {
    const std::size_t dm = tensor_dim(n, m);
    DenseMatrix IG = detail::kron(DenseMatrix::Identity(n, n), res.G);
    DenseMatrix first = detail::apply_left_factor(one_minus_p, IG.adjoint(), dm).adjoint();
    // T_1 (I (x) G_m), with T_1 = t (x) I_{n^{m-1}}
    DenseMatrix tg = detail::apply_left_factor(t, IG, tensor_dim(n, m - 1));
    DenseMatrix next = first - phi(m, pr.lambda).get_d() * (IG * tg);
    res.idempotency = (next * next - next).norm();
    res.rounding = std::max(res.rounding, detail::round_to_projection(next));
    res.G = std::move(next);
  }
  return res;
}

/// Orthonormal bases of the subproduct system H_k = G_k H^{(x) k}, k <= N, built
/// in reduced coordinates: H_{k+1} lies in H_1 (x) H_k, where G_{k+1} acts as
/// I - phi(k) Y Y* with Y the compression of v_A (x) I.
struct SubproductData {
  MotzkinPair pair;
  int N = 0;
  std::vector<int> dims;
  std::vector<DenseMatrix> B;          // B[k]: n^k x dim H_k, orthonormal columns
  std::vector<DenseMatrix> C;          // C[k]: coordinates of B[k] in B[1] (x) B[k-1], k >= 2
  std::vector<double> gap;             // spectral gap of the level projection
  std::vector<double> idempotency;     // ||Q^2 - Q|| of the reduced projection
  std::vector<double> rounding;        // spectral rounding applied
};

inline SubproductData build_subproduct(const MotzkinPair& pr, int N) {
  if (N < 1) throw DomainError("truncation level N must be >= 1");
  if (pr.n < 3) throw DomainError("subproduct systems need n >= 3");
  if (N >= 2 && !is_generic(pr.lambda, N))
    throw SingularParameterError("1/lambda is not " + std::to_string(N) + "-generic");
  tensor_dim(pr.n, N);  // bound check
  const int n = pr.n;
  SubproductData sd;
  sd.pair = pr;
  sd.N = N;
  sd.B.push_back(DenseMatrix::Identity(1, 1));
  sd.C.push_back(DenseMatrix::Identity(1, 1));
  sd.dims.push_back(1);
  sd.gap.push_back(1 / DBL_EPSILON);
  sd.idempotency.push_back(0);
  sd.rounding.push_back(0);

  DenseMatrix P(generator_matrix(pr, 1, Generator::P, 1));
  DenseMatrix one_minus_p = DenseMatrix::Identity(n, n) - P;
  DenseMatrix B1 = detail::gram_schmidt_columns(one_minus_p);
  if (B1.cols() != n - 1) throw ConsistencyError("rank of I - P is not n - 1");
  sd.B.push_back(B1);
  sd.C.push_back(DenseMatrix::Identity(n - 1, n - 1));
  sd.dims.push_back(n - 1);
  sd.gap.push_back(detail::spectral_gap(one_minus_p));
  sd.idempotency.push_back((one_minus_p * one_minus_p - one_minus_p).norm());
  sd.rounding.push_back(0);

  DenseVector va = temperley_lieb_vector(pr);
  for (int k = 1; k < N; ++k) {
    const DenseMatrix& Bk = sd.B[k];
    const int dk = sd.dims[k];
    const std::size_t tail = tensor_dim(n, k - 1);
    // Y = (B_1 (x) B_k)^* (v_A (x) I_{n^{k-1}}) = sum_i a_i (B_1^* e_i) (x) (rows bar(i) of B_k)^*
    DenseMatrix Y = DenseMatrix::Zero((n - 1) * dk, static_cast<Eigen::Index>(tail));
    for (int i = 0; i < n; ++i) {
      if (va(i * n + pr.bar(i)) == 0.0) continue;
      DenseMatrix rows = Bk.middleRows(static_cast<Eigen::Index>(pr.bar(i) * tail), static_cast<Eigen::Index>(tail));
      DenseVector c = B1.row(i).adjoint();
      Y += pr.a[i] * detail::kron(c, rows.adjoint());
    }
    DenseMatrix Q = DenseMatrix::Identity((n - 1) * dk, (n - 1) * dk) - phi(k, pr.lambda).get_d() * (Y * Y.adjoint());
    sd.idempotency.push_back((Q * Q - Q).norm());
    sd.rounding.push_back(detail::round_to_projection(Q));
    sd.gap.push_back(detail::spectral_gap(Q));
    DenseMatrix Ck = detail::gram_schmidt_columns(Q);
    const auto expected = dim_subproduct(n, k + 1);
    if (Ck.cols() != expected)
      throw ConsistencyError("rank of G_" + std::to_string(k + 1) + " is " + std::to_string(Ck.cols()) +
                             ", expected " + std::to_string(expected));
    DenseMatrix V = detail::kron(B1, Bk);
    sd.B.push_back(V * Ck);
    sd.C.push_back(std::move(Ck));
    sd.dims.push_back(static_cast<int>(expected));
  }
  return sd;
}

inline const DenseMatrix& orthonormal_basis(const SubproductData& sd, int k) {
  if (k < 0 || k > sd.N) throw DomainError("level outside 0..N");
  return sd.B[k];
}

/// max over p + q = k of ||(G_p (x) I) B_k - B_k|| and ||(I (x) G_q) B_k - B_k||.
inline double coassociativity_residual(const SubproductData& sd, int k) {
  const int n = sd.pair.n;
  double worst = 0;
  for (int p = 1; p < k; ++p) {
    const int q = k - p;
    const auto& Bp = sd.B[p];
    const auto& Bq = sd.B[q];
    const auto& Bk = sd.B[k];
    DenseMatrix left = detail::apply_left_factor(Bp * Bp.adjoint(), Bk, tensor_dim(n, q));
    DenseMatrix right = detail::apply_right_factor(Bq * Bq.adjoint(), Bk, tensor_dim(n, p));
    worst = std::max({worst, (left - Bk).norm(), (right - Bk).norm()});
  }
  return worst;
}

/// A generator of H_1 in the basis the Toeplitz relations are written in:
/// v-type for indices outside supp(v), w-type for the Fourier vectors on it.
struct FockGenerator {
  std::string label;
  bool is_w = false;
  int index = 0;  // 0-based basis index for v-type, s in 1..2r-1 for w-type
  DenseVector u;
};

/// <a,b> = exp(2 pi i a b / (2r)).
inline Complex fourier_pairing(int a, int b, int r) {
  const double angle = 2 * std::numbers::pi * static_cast<double>(a) * b / (2.0 * r);
  return {std::cos(angle), std::sin(angle)};
}

/// Creation operators on the truncated Fock space, stored level by level:
/// S[g][m] is the block H_m -> H_{m+1} (m < N); S_g kills H_N.
struct ToeplitzOps {
  SubproductData data;
  int r = 0;
  std::vector<int> j_index;    // j_1..j_{2r} as 0-based indices
  std::vector<int> interior;   // the v-type indices, 0-based
  std::vector<FockGenerator> gens;
  std::vector<std::vector<DenseMatrix>> S;

  int N() const { return data.N; }
  int dim(int m) const { return data.dims[m]; }
  const MotzkinPair& pair() const { return data.pair; }

  int offset(int m) const {
    int o = 0;
    for (int j = 0; j < m; ++j) o += data.dims[j];
    return o;
  }
  int total_dim() const { return offset(N() + 1); }

  int v_generator(int i) const {
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (!gens[g].is_w && gens[g].index == i) return static_cast<int>(g);
    throw DomainError("no v-type generator for index " + std::to_string(i + 1));
  }
  int w_generator(int s) const {
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (gens[g].is_w && gens[g].index == s) return static_cast<int>(g);
    throw DomainError("no w-type generator w_" + std::to_string(s));
  }

  /// S_g S_h^* restricted to level m (zero at m = 0).
  DenseMatrix down_up(int g, int h, int m) const {
    if (m == 0) return DenseMatrix::Zero(1, 1);
    return S[g][m - 1] * S[h][m - 1].adjoint();
  }
  /// S_g^* S_h restricted to level m < N.
  DenseMatrix up_down(int g, int h, int m) const { return S[g][m].adjoint() * S[h][m]; }

  /// S_g as a matrix on the whole truncated Fock space.
  DenseMatrix full(int g) const {
    DenseMatrix out = DenseMatrix::Zero(total_dim(), total_dim());
    for (int m = 0; m < N(); ++m) out.block(offset(m + 1), offset(m), dim(m + 1), dim(m)) = S[g][m];
    return out;
  }
  DenseMatrix level_projection(int m) const {
    DenseMatrix out = DenseMatrix::Zero(total_dim(), total_dim());
    out.block(offset(m), offset(m), dim(m), dim(m)).setIdentity();
    return out;
  }
};

inline ToeplitzOps creation_operators(const MotzkinPair& pr, int N) {
  const int n = pr.n;
  auto supp = pr.support();
  ToeplitzOps ops;
  const int mid = n / 2;
  if (n % 2 == 1 && supp.size() == 1 && supp[0] == mid) {
    ops.r = 0;
  } else {
    const int r = static_cast<int>(supp.size()) / 2;
    if (r < 1 || 2 * r > n || static_cast<int>(supp.size()) != 2 * r)
      throw ParameterError("creation operators need v supported on a single middle index or on 2r <= n indices");
    for (int j = 0; j < r; ++j)
      if (supp[j] != j || supp[r + j] != n - r + j)
        throw ParameterError("supp(v) must be {1..r} together with their bars");
    const double expected = 1 / std::sqrt(2.0 * r);
    for (int j : supp)
      if (std::abs(pr.b[j] - expected) > 1e-12) throw ParameterError("v must be the uniform vector on its support");
    ops.r = r;
  }
  ops.data = build_subproduct(pr, N);
  const int r = ops.r;
  for (int k = 1; k <= 2 * r; ++k) ops.j_index.push_back(k <= r ? k - 1 : n - 2 * r + k - 1);
  for (int i = 0; i < n; ++i)
    if (std::find(supp.begin(), supp.end(), i) == supp.end()) ops.interior.push_back(i);

  if (r > 0)
    for (int s = 1; s < 2 * r; ++s) {
      // w_s = sum_k <k,s>/sqrt(2r) v_{j_k}
      DenseVector w = DenseVector::Zero(n);
      for (int k = 1; k <= 2 * r; ++k) w(ops.j_index[k - 1]) = fourier_pairing(k, s, r) / std::sqrt(2.0 * r);
      ops.gens.push_back({"w" + std::to_string(s), true, s, w});
    }
  for (int i : ops.interior) {
    DenseVector v = DenseVector::Zero(n);
    v(i) = 1;
    ops.gens.push_back({"v" + std::to_string(i + 1), false, i, v});
  }

  const DenseMatrix& B1 = ops.data.B[1];
  for (const auto& g : ops.gens) {
    DenseVector c = B1.adjoint() * g.u;
    if ((B1 * c - g.u).norm() > 1e-12) throw ConsistencyError("generator " + g.label + " is not in H_1");
    std::vector<DenseMatrix> blocks;
    for (int m = 0; m < N; ++m) {
      DenseMatrix lifted = detail::kron(c, DenseMatrix::Identity(ops.data.dims[m], ops.data.dims[m]));
      blocks.push_back(m == 0 ? DenseMatrix(B1.adjoint() * g.u) : DenseMatrix(ops.data.C[m + 1].adjoint() * lifted));
    }
    ops.S.push_back(std::move(blocks));
  }
  return ops;
}

/// One instance of the quadratic relations for S_j^* S_i on a level: the
/// residual of S_j^* S_i e_m - delta e_m + phi c X e_m, and ||c X e_m||.
struct QuadraticTerm {
  std::string name;
  double residual = 0;
  double coefficient_norm = 0;
};

inline double operator_norm(const DenseMatrix& x) {
  if (x.size() == 0) return 0.0;
  return Eigen::JacobiSVD<DenseMatrix>(x).singularValues()(0);
}

/// Norms are Frobenius unless `spectral` asks for the operator norm.
inline std::vector<QuadraticTerm> quadratic_relations(const ToeplitzOps& ops, int m, double phi_value,
                                                      bool spectral = false) {
  const auto& pr = ops.pair();
  const double lam = pr.lambda_value();
  const int d = ops.dim(m);
  const DenseMatrix I = DenseMatrix::Identity(d, d);
  std::vector<QuadraticTerm> out;
  auto push = [&](std::string name, const DenseMatrix& lhs, const DenseMatrix& delta_part, const DenseMatrix& x) {
    auto norm = [&](const DenseMatrix& y) { return spectral ? operator_norm(y) : y.norm(); };
    out.push_back({std::move(name), norm(lhs - delta_part + phi_value * x), norm(x)});
  };
  const std::string at = " m=" + std::to_string(m);
  for (int i : ops.interior)
    for (int j : ops.interior) {
      int gi = ops.v_generator(i), gj = ops.v_generator(j);
      DenseMatrix x = std::conj(pr.a[i]) * pr.a[j] * ops.down_up(ops.v_generator(pr.bar(j)), ops.v_generator(pr.bar(i)), m);
      push("v-v i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1) + at, ops.up_down(gj, gi, m),
           i == j ? I : DenseMatrix::Zero(d, d), x);
    }
  for (int s = 1; s < 2 * ops.r; ++s) {
    const int js = ops.j_index[s - 1];
    const int gs = ops.w_generator(s);
    for (int j : ops.interior) {
      DenseMatrix x = std::conj(pr.a[js]) * pr.a[j] * fourier_pairing(s, 1, ops.r) *
                      ops.down_up(ops.v_generator(pr.bar(j)), gs, m);
      push("v-w j=" + std::to_string(j + 1) + ",s=" + std::to_string(s) + at, ops.up_down(ops.v_generator(j), gs, m),
           DenseMatrix::Zero(d, d), x);
    }
    for (int s2 = 1; s2 < 2 * ops.r; ++s2) {
      const int gs2 = ops.w_generator(s2);
      // S_{w_s'} S_{w_s}^*: the order S_{w_s} S_{w_s'}^* fails for s != s' once r >= 2
      DenseMatrix x = lam * fourier_pairing(s - s2, 1, ops.r) * ops.down_up(gs2, gs, m);
      push("w-w s=" + std::to_string(s) + ",s'=" + std::to_string(s2) + at, ops.up_down(gs2, gs, m),
           s == s2 ? I : DenseMatrix::Zero(d, d), x);
    }
  }
  return out;
}

/// The degree-two ideal element applied to level m: H_m -> H_{m+2}.
inline DenseMatrix ideal_relation_block(const ToeplitzOps& ops, int m) {
  const auto& pr = ops.pair();
  DenseMatrix sum = DenseMatrix::Zero(ops.dim(m + 2), ops.dim(m));
  for (int b = 1; b < 2 * ops.r; ++b) {
    int g = ops.w_generator(b);
    sum += pr.a[0] * fourier_pairing(1, -b, ops.r) * (ops.S[g][m + 1] * ops.S[g][m]);
  }
  for (int j : ops.interior)
    sum += pr.a[j] * (ops.S[ops.v_generator(j)][m + 1] * ops.S[ops.v_generator(pr.bar(j))][m]);
  return sum;
}

inline Report toeplitz_residuals(const ToeplitzOps& ops, double tol = 1e-9) {
  const int N = ops.N();
  const auto& pr = ops.pair();
  Report rep;
  rep.title = "toeplitz n=" + std::to_string(pr.n) + " r=" + std::to_string(ops.r) + " N=" + std::to_string(N);
  auto skipped = [&](const std::string& name) { rep.add({name, true, 0.0, tol, "skipped (truncation)"}); };
  const int G = static_cast<int>(ops.gens.size());

  // grading, on the generating family e_m and on f(x) = 1 + 1/((1+x)(1+k0)) with k0 = 1
  auto f = [](int x) { return 1 + 1.0 / ((1.0 + x) * 2.0); };
  DenseVector fdiag(ops.total_dim()), gamma_f(ops.total_dim());
  for (int m = 0; m <= N; ++m) {
    fdiag.segment(ops.offset(m), ops.dim(m)).setConstant(f(m));
    gamma_f.segment(ops.offset(m), ops.dim(m)).setConstant(f(m + 1));
  }
  std::vector<double> grading(N + 1, 0.0);
  double worst_f = 0;
  for (int g = 0; g < G; ++g) {
    DenseMatrix Sg = ops.full(g);
    for (int m = 0; m < N; ++m) {
      // e_{m+1} S_g - S_g e_m
      DenseMatrix diff = DenseMatrix::Zero(Sg.rows(), Sg.cols());
      diff.middleRows(ops.offset(m + 1), ops.dim(m + 1)) = Sg.middleRows(ops.offset(m + 1), ops.dim(m + 1));
      diff.middleCols(ops.offset(m), ops.dim(m)) -= Sg.middleCols(ops.offset(m), ops.dim(m));
      grading[m] = std::max(grading[m], diff.norm());
    }
    worst_f = std::max(worst_f, (fdiag.asDiagonal() * Sg - Sg * gamma_f.asDiagonal()).norm());
  }
  for (int m = 0; m <= N; ++m) {
    const std::string name = "grading e_{m+1} S = S e_m m=" + std::to_string(m);
    if (m == N) skipped(name);
    else rep.add_numeric(name, grading[m], tol);
  }
  rep.add_numeric("grading f S = S gamma(f)", worst_f, tol);
  // row sum on every level
  for (int m = 0; m <= N; ++m) {
    DenseMatrix sum = DenseMatrix::Zero(ops.dim(m), ops.dim(m));
    for (int g = 0; g < G; ++g) sum += ops.down_up(g, g, m);
    DenseMatrix target = DenseMatrix::Identity(ops.dim(m), ops.dim(m));
    if (m == 0) target.setZero();
    rep.add_numeric("row sum S S* = 1 - e_0 m=" + std::to_string(m), (sum - target).norm(), tol);
  }
  for (int m = 0; m <= N; ++m) {
    const std::string at = " m=" + std::to_string(m);
    if (m + 2 > N) skipped("ideal" + at);
    else rep.add_numeric("ideal" + at, ideal_relation_block(ops, m).norm(), tol);
  }
  for (int m = 0; m <= N; ++m) {
    if (m == N) {
      skipped("quadratic m=" + std::to_string(m));
      continue;
    }
    for (const auto& term : quadratic_relations(ops, m, phi(m == 0 ? 1 : m, pr.lambda).get_d()))
      rep.add_numeric(term.name, term.residual, tol);
  }
  return rep;
}

/// dim span{S_alpha S_beta^* e_k : |alpha| = |beta| = k}, by tolerance rank in
/// the operator space of H_k.
inline int matrix_unit_dimension(const ToeplitzOps& ops, int k, double threshold = 1e-8) {
  if (k < 0 || k > ops.N()) throw DomainError("level outside 0..N");
  const std::size_t G = ops.gens.size();
  std::size_t count = 1;
  for (int j = 0; j < k; ++j) {
    count *= G;
    if (count > limits().max_multi_indices)
      throw ResourceLimitError("more than " + std::to_string(limits().max_multi_indices) + " multi-indices");
  }
  // x_alpha = S_alpha Omega for every alpha, generated level by level
  std::vector<DenseVector> xs = {DenseVector::Ones(1)};
  for (int level = 0; level < k; ++level) {
    std::vector<DenseVector> next;
    for (std::size_t g = 0; g < G; ++g)
      for (const auto& x : xs) next.push_back(ops.S[g][level] * x);
    xs = std::move(next);
  }
  const int d = ops.dim(k);
  DenseMatrix ops_space(d * d, static_cast<Eigen::Index>(xs.size() * xs.size()));
  Eigen::Index col = 0;
  for (const auto& xa : xs)
    for (const auto& xb : xs) {
      DenseMatrix unit = xa * xb.adjoint();
      ops_space.col(col++) = Eigen::Map<const DenseVector>(unit.data(), unit.size());
    }
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(ops_space);
  qr.setThreshold(threshold);
  return static_cast<int>(qr.rank());
}

/// Average over the gauge action: keeps the level-diagonal blocks of x.
inline DenseMatrix gauge_average(const ToeplitzOps& ops, const DenseMatrix& x) {
  if (x.rows() != ops.total_dim() || x.cols() != ops.total_dim())
    throw DimensionError("operator does not act on the truncated Fock space");
  DenseMatrix out = DenseMatrix::Zero(x.rows(), x.cols());
  for (int m = 0; m <= ops.N(); ++m) {
    const int o = ops.offset(m), d = ops.dim(m);
    out.block(o, o, d, d) = x.block(o, o, d, d);
  }
  return out;
}

/// sum_i |a_bar(i)|^2 S_i^* e_k S_i against (1 - lambda - lambda^2 phi(k-1)) e_{k-1}.
struct ReverseResult {
  int k = 0;
  Rational coefficient;
  double residual = 0;
  double closed_form = 0;
  double closed_form_difference = 0;
};

inline ReverseResult reverse_identity(const ToeplitzOps& ops, int k) {
  if (k < 2 || k > ops.N()) throw DomainError("reverse identity needs 2 <= k <= N");
  const auto& pr = ops.pair();
  const int m = k - 1;
  DenseMatrix sum = DenseMatrix::Zero(ops.dim(m), ops.dim(m));
  for (std::size_t g = 0; g < ops.gens.size(); ++g) {
    const auto& gen = ops.gens[g];
    const int idx = gen.is_w ? ops.j_index[gen.index - 1] : gen.index;
    sum += std::norm(pr.a[pr.bar(idx)]) * ops.up_down(static_cast<int>(g), static_cast<int>(g), m);
  }
  ReverseResult res;
  res.k = k;
  res.coefficient = 1 - pr.lambda - pr.lambda * pr.lambda * phi(m, pr.lambda);
  const double c = res.coefficient.get_d();
  res.residual = (sum - c * DenseMatrix::Identity(ops.dim(m), ops.dim(m))).norm();
  const double q = q_parameter(pr.lambda), lam = pr.lambda_value();
  res.closed_form = std::abs(q - 1) < 1e-12
                        ? lam * (m + 2) / (m + 1)
                        : lam * (std::pow(q, m + 2) - std::pow(q, -m - 2)) / (std::pow(q, m + 1) - std::pow(q, -m - 1));
  res.closed_form_difference = std::abs(res.closed_form - c);
  return res;
}

/// The degree-two generator of the ideal, in H (x) H and in B_1 (x) B_1
/// coordinates, with its consistency checks.
struct IdealGenerator {
  DenseVector vector;       // n^2 entries
  DenseVector coordinates;  // (n-1)^2 entries
  double projection_residual = 0;   // || vector - (I-P)^{(x)2} v_A ||
  double complement_residual = 0;   // || G_2 - (projection onto H_1 (x) H_1 minus the generator line) ||
  double orthogonality = 0;         // || B_2^* vector ||
  int complement_dim = 0;
};

inline IdealGenerator ideal_generator(const ToeplitzOps& ops) {
  if (ops.N() < 2) throw DomainError("ideal generator needs N >= 2");
  const auto& pr = ops.pair();
  const int n = pr.n;
  IdealGenerator res;
  res.vector = DenseVector::Zero(n * n);
  for (int b = 1; b < 2 * ops.r; ++b) {
    const DenseVector& w = ops.gens[ops.w_generator(b)].u;
    DenseVector ww(n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) ww(x * n + y) = w(x) * w(y);
    res.vector += pr.a[0] * fourier_pairing(1, -b, ops.r) * ww;
  }
  for (int j : ops.interior) res.vector(j * n + pr.bar(j)) += pr.a[j];

  DenseMatrix one_minus_p = DenseMatrix::Identity(n, n) - DenseMatrix(generator_matrix(pr, 1, Generator::P, 1));
  DenseVector projected = detail::kron(one_minus_p, one_minus_p) * temperley_lieb_vector(pr);
  res.projection_residual = (res.vector - projected).norm();

  const DenseMatrix& B1 = ops.data.B[1];
  DenseMatrix V = detail::kron(B1, B1);
  res.coordinates = V.adjoint() * res.vector;
  DenseVector unit = res.coordinates / res.coordinates.norm();
  const int d = (n - 1) * (n - 1);
  DenseMatrix complement = DenseMatrix::Identity(d, d) - unit * unit.adjoint();
  const DenseMatrix& C2 = ops.data.C[2];
  res.complement_residual = (C2 * C2.adjoint() - complement).norm();
  res.complement_dim = static_cast<int>(C2.cols());
  res.orthogonality = (ops.data.B[2].adjoint() * res.vector).norm();
  return res;
}

/// The quadratic relations with phi_infinity in place of phi(m) on level m,
/// measured in operator norm so that the factor stays bounded in m.
struct CuntzPimsnerRow {
  int m = 0;
  double residual = 0;
  double defect = 0;  // phi_infinity - phi(m)
  double factor = 0;  // max ||c X e_m|| over the relation instances
};

inline std::vector<CuntzPimsnerRow> cuntz_pimsner_residuals(const ToeplitzOps& ops, int m_max) {
  if (m_max > ops.N() - 1) throw DomainError("Cuntz-Pimsner rows need m <= N - 1");
  const auto& pr = ops.pair();
  const double limit = phi_infinity(pr.lambda);
  std::vector<CuntzPimsnerRow> rows;
  for (int m = 1; m <= m_max; ++m) {
    CuntzPimsnerRow row;
    row.m = m;
    row.defect = limit - phi(m, pr.lambda).get_d();
    for (const auto& term : quadratic_relations(ops, m, limit, true)) {
      row.residual = std::max(row.residual, term.residual);
      row.factor = std::max(row.factor, term.coefficient_norm);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace motzkin
