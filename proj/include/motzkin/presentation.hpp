#pragma once

#include <string>

#include "algebra.hpp"
#include "report.hpp"

namespace motzkin {

/// Walks every defining relation of M_k at every admissible index and hands
/// `visit(relation, index_label, lhs - rhs)` the difference. `Ops` supplies
/// the backend:
///   Value t(int i), l(int i), adj(const Value&), scale(Scalar, const Value&),
///   Scalar lambda(), and Value supports binary * and -.
/// Indices are 1-based. Relations whose index would leave 1..k-1 are skipped.
template <class Ops, class Visit>
void for_each_relation(int k, Ops& ops, Visit&& visit) {
  const auto lam = ops.lambda();
  auto at = [](int i) { return "i=" + std::to_string(i); };
  for (int i = 1; i <= k - 1; ++i) {
    auto t = ops.t(i), l = ops.l(i), r = ops.adj(l);
    visit("(0)", at(i), ops.adj(t) - t);
    visit("(1)", at(i), l * l - l * l * l);
    visit("(3)", at(i), l * r * l - l);
    visit("(7)", at(i), t * t - t);
    visit("(9)", at(i), t * l - t * r);
    visit("(12)", at(i), t * l * t - ops.scale(lam, t));
    if (i + 1 <= k - 1) {
      auto t2 = ops.t(i + 1), l2 = ops.l(i + 1), r2 = ops.adj(l2);
      visit("(2a)", at(i), l * l2 * l - l * l2);
      visit("(2b)", at(i), l * l2 - l2 * l * l2);
      visit("(4a)", at(i), l2 * r * l - l2 * r);
      visit("(5)", at(i), l * r - r2 * l2);
      visit("(8a)", at(i), t * t2 * t - ops.scale(lam * lam, t));
      visit("(8b)", at(i), t2 * t * t2 - ops.scale(lam * lam, t2));
      visit("(10)", at(i), ops.scale(lam, t * r2) - t * t2 * l);
      visit("(11)", at(i), r * r2 * t - t2 * r * r2);
    }
    if (i - 1 >= 1) {
      auto l0 = ops.l(i - 1);
      visit("(4b)", at(i), l * r * l0 - r * l0);
    }
    for (int j = 1; j <= k - 1; ++j) {
      if (j - i < 2 && i - j < 2) continue;
      auto tj = ops.t(j), lj = ops.l(j);
      std::string ij = "i=" + std::to_string(i) + ",j=" + std::to_string(j);
      visit("(6a)", ij, r * lj - lj * r);
      visit("(6b)", ij, l * lj - lj * l);
      visit("(6c)", ij, t * tj - tj * t);
      visit("(6d)", ij, l * tj - tj * l);
      visit("(6e)", ij, r * tj - tj * r);
    }
  }
}

/// Exact backend over AlgebraElement.
struct ExactOps {
  int k;
  Rational lam;
  AlgebraElement t(int i) const { return generator(k, Generator::T, i, lam); }
  AlgebraElement l(int i) const { return generator(k, Generator::L, i, lam); }
  AlgebraElement adj(const AlgebraElement& x) const { return adjoint(x); }
  AlgebraElement scale(const Rational& s, const AlgebraElement& x) const { return s * x; }
  Rational lambda() const { return lam; }
};

/// Checks every relation exactly in M_k: each difference must have no terms.
inline Report check_presentation(int k, const Rational& lambda) {
  if (k < 2) throw DomainError("presentation needs k >= 2");
  if (k > 5) throw ResourceLimitError("presentation check is bounded to k <= 5");
  Report report;
  report.title = "presentation k=" + std::to_string(k) + " lambda=" + to_string(lambda);
  ExactOps ops{k, lambda};
  for_each_relation(k, ops, [&](const std::string& rel, const std::string& idx, const AlgebraElement& diff) {
    report.add_exact(rel + " " + idx, diff.is_zero(), diff.is_zero() ? "" : diff.to_string());
  });
  return report;
}

}  // namespace motzkin
