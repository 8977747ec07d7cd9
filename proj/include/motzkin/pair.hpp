#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "report.hpp"

namespace motzkin {

using Complex = std::complex<double>;

/// A Motzkin pair on C^n: the Temperley-Lieb vector v_A = sum_i a_i v_i (x) v_{bar i}
/// and the unit vector v = sum_i b_i v_i. Indices are 0-based, so bar(i) = n-1-i.
struct MotzkinPair {
  int n = 0;
  Rational lambda;
  std::vector<Complex> a;
  std::vector<Complex> b;

  int bar(int i) const { return n - 1 - i; }
  double lambda_value() const { return lambda.get_d(); }

  std::vector<int> support(double tol = 1e-12) const {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (std::abs(b[i]) > tol) s.push_back(i);
    return s;
  }
};

/// Checks the defining conditions of a Motzkin pair and the consequences
/// that are supposed to follow from them.
inline Report validate_pair(const MotzkinPair& p, double tol = 1e-12) {
  Report r;
  r.title = "pair n=" + std::to_string(p.n) + " lambda=" + to_string(p.lambda);
  if (p.n < 2 || static_cast<int>(p.a.size()) != p.n || static_cast<int>(p.b.size()) != p.n) {
    r.add_exact("shape", false, "need n >= 2 and |a| = |b| = n");
    return r;
  }
  const int n = p.n;
  const double lam = p.lambda_value();
  auto bar = [&](int i) { return p.bar(i); };
  auto cj = [](Complex z) { return std::conj(z); };

  double na = 0, nb = 0;
  for (int i = 0; i < n; ++i) {
    na += std::norm(p.a[i]);
    nb += std::norm(p.b[i]);
  }
  r.add_numeric("sum |a_i|^2 = 1", std::abs(na - 1), tol);
  r.add_numeric("sum |b_i|^2 = 1", std::abs(nb - 1), tol);

  double worst = 0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(cj(p.a[i]) * p.a[bar(i)] - lam));
  r.add_numeric("conj(a_i) a_bar(i) = lambda", worst, tol);

  worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(cj(p.a[j]) * cj(p.b[i]) * p.b[bar(j)] -
                                       cj(p.a[bar(i)]) * cj(p.b[j]) * p.b[bar(i)]));
  r.add_numeric("cross condition", worst, tol);

  // consequences
  worst = 0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(std::abs(p.b[j]) - std::abs(p.b[bar(j)])));
  r.add_numeric("|b_j| = |b_bar(j)|", worst, tol);
  worst = 0;
  for (int j : p.support()) worst = std::max(worst, std::abs(p.a[j] - p.a[bar(j)]));
  r.add_numeric("a_j = a_bar(j) on supp(v)", worst, tol);
  Complex s = 0;
  for (int k = 0; k < n; ++k) s += cj(p.a[bar(k)]) * p.a[k] * std::norm(p.b[k]);
  r.add_numeric("sum conj(a_bar(k)) a_k |b_k|^2 = lambda", std::abs(s - lam), tol);
  worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(lam * cj(p.a[i]) * cj(p.b[k]) * p.b[bar(i)] -
                                         cj(p.a[j]) * p.a[bar(j)] * cj(p.a[bar(k)]) * cj(p.b[i]) * p.b[bar(k)]));
  r.add_numeric("triple condition", worst, tol);
  return r;
}

enum class PairFamily { I, II, III };

inline PairFamily parse_family(const std::string& s) {
  if (s == "i") return PairFamily::I;
  if (s == "ii") return PairFamily::II;
  if (s == "iii") return PairFamily::III;
  throw ParameterError("unknown pair family '" + s + "' (expected i, ii or iii)");
}

/// Builds the example pairs with real positive a and real b.
///   i:   n odd, v = the middle basis vector;
///   ii:  v = (v_1 + v_n)/sqrt 2 (same as iii with r = 1);
///   iii: v = sum_{j<=r} (v_j + v_bar(j))/sqrt(2r).
/// a is sqrt(lambda) on supp(v) (and at the middle index for odd n); every
/// remaining pair (i, bar i) gets |a_i|^2 = x, |a_bar i|^2 = lambda^2/x with
/// x the larger root of x + lambda^2/x = S/p, S the leftover mass and p the
/// number of such pairs.
inline MotzkinPair build_example_pair(PairFamily family, int n, int r, const Rational& lambda) {
  if (n < 2) throw ParameterError("pair needs n >= 2");
  if (lambda <= 0) throw ParameterError("lambda must be positive");
  if (family == PairFamily::II) r = 1;
  if (family == PairFamily::I && n % 2 == 0) throw ParameterError("family i needs odd n");
  if (family != PairFamily::I && (r < 1 || 2 * r > n)) throw ParameterError("family iii needs 1 <= r <= n/2");

  MotzkinPair p;
  p.n = n;
  p.lambda = lambda;
  p.a.assign(n, 0.0);
  p.b.assign(n, 0.0);
  const double lam = lambda.get_d();
  const double root = std::sqrt(lam);
  std::vector<bool> fixed(n, false);

  if (family == PairFamily::I) {
    const int mid = n / 2;
    p.b[mid] = 1.0;
  } else {
    for (int j = 0; j < r; ++j) {
      p.b[j] = p.b[n - 1 - j] = 1.0 / std::sqrt(2.0 * r);
      p.a[j] = p.a[n - 1 - j] = root;
      fixed[j] = fixed[n - 1 - j] = true;
    }
  }
  if (n % 2 == 1) {
    p.a[n / 2] = root;
    fixed[n / 2] = true;
  }
  int fixed_count = 0;
  for (int i = 0; i < n; ++i) fixed_count += fixed[i];
  const Rational leftover = 1 - Rational(fixed_count) * lambda;
  int pairs = 0;
  for (int i = 0; i < n / 2; ++i) pairs += !fixed[i];

  const Rational feasibility = 1 - Rational(n) * lambda;  // needs 1 >= n lambda
  if (feasibility < 0)
    throw ParameterError("no real a-moduli: need n*lambda <= 1, got n*lambda = " + to_string(Rational(n) * lambda));
  if (pairs == 0) {
    if (leftover != 0)
      throw ParameterError("no free pairs left to absorb the remaining mass " + to_string(leftover) +
                           " (all indices fixed needs lambda = 1/n)");
    return p;
  }
  // the discriminant is exact so that a double root stays a double root
  const Rational s = leftover / pairs;
  const Rational disc = s * s - 4 * lambda * lambda;
  const double x = (s.get_d() + std::sqrt(std::max(disc.get_d(), 0.0))) / 2;
  for (int i = 0; i < n / 2; ++i) {
    if (fixed[i]) continue;
    p.a[i] = std::sqrt(x);
    p.a[n - 1 - i] = lam / std::sqrt(x);
  }
  return p;
}

}  // namespace motzkin
