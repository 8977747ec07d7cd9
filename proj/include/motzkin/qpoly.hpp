#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace motzkin {

/// P_0 = P_1 = 1, P_{m+1}(x) = P_m(x) - x P_{m-1}(x).
inline Rational chebyshev_P(int m, const Rational& x) {
  if (m < 0) throw DomainError("chebyshev_P needs m >= 0");
  Rational prev = 1, cur = 1;
  for (int i = 1; i < m; ++i) {
    Rational next = cur - x * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Q_0 = 1, Q_1 = y, Q_{m+1}(y) = y Q_m(y) - Q_{m-1}(y).
inline Rational chebyshev_Q(int m, const Rational& y) {
  if (m < 0) throw DomainError("chebyshev_Q needs m >= 0");
  if (m == 0) return 1;
  Rational prev = 1, cur = y;
  for (int i = 1; i < m; ++i) {
    Rational next = y * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// The point x = (1/lambda - 1)^{-2} at which genericity is tested.
inline Rational genericity_point(const Rational& lambda) {
  Rational y = 1 / lambda - 1;
  if (y == 0) throw DomainError("1/lambda = 1 has no genericity point");
  return 1 / (y * y);
}

/// True iff P_k((1/lambda - 1)^{-2}) != 0 for 1 <= k <= n.
inline bool is_generic(const Rational& lambda, int n) {
  Rational x = genericity_point(lambda);
  Rational prev = 1, cur = 1;
  for (int k = 1; k <= n; ++k) {
    if (cur == 0) return false;
    Rational next = cur - x * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return true;
}

/// phi(m) via the Q-ratio: (1/lambda) Q_{m-1}(y) / Q_m(y), y = 1/lambda - 1.
inline Rational phi_q_ratio(int m, const Rational& lambda) {
  if (m < 1) throw DomainError("phi needs m >= 1");
  Rational y = 1 / lambda - 1;
  Rational den = chebyshev_Q(m, y);
  if (den == 0) throw SingularParameterError("Q_" + std::to_string(m) + " vanishes at 1/lambda - 1");
  return chebyshev_Q(m - 1, y) / (lambda * den);
}

/// phi(m) via the P-ratio: (1/lambda)/(1/lambda - 1) P_{m-1}(x) / P_m(x).
inline Rational phi_p_ratio(int m, const Rational& lambda) {
  if (m < 1) throw DomainError("phi needs m >= 1");
  Rational x = genericity_point(lambda);
  Rational den = chebyshev_P(m, x);
  if (den == 0) throw SingularParameterError("P_" + std::to_string(m) + " vanishes: lambda is not generic");
  Rational delta = 1 / lambda;
  return delta / (delta - 1) * chebyshev_P(m - 1, x) / den;
}

/// phi(m), computed both ways; the two must agree exactly.
inline Rational phi(int m, const Rational& lambda) {
  Rational a = phi_q_ratio(m, lambda);
  Rational b = phi_p_ratio(m, lambda);
  if (a != b) throw ConsistencyError("phi formulas disagree at m=" + std::to_string(m));
  return a;
}

/// Root q in (0,1] of q + 1/q = 1/lambda - 1.
inline double q_parameter(const Rational& lambda) {
  require_lambda_in_range(lambda);
  double s = Rational(1 / lambda - 1).get_d();
  return (s - std::sqrt(s * s - 4)) / 2;
}

/// lim phi(m) = q^2 + q + 1.
inline double phi_infinity(const Rational& lambda) {
  double q = q_parameter(lambda);
  return q * q + q + 1;
}

/// [m]_q = (q^m - q^-m)/(q - q^-1), equal to m at q = 1.
inline double q_integer(int m, double q) {
  if (std::abs(q - 1) < 1e-12) return m;
  return (std::pow(q, m) - std::pow(q, -m)) / (q - 1 / q);
}

/// phi as a function on Z_+ with a distinguished point at infinity.
class PhiFunction {
 public:
  explicit PhiFunction(Rational lambda) : lambda_(std::move(lambda)) {
    require_lambda_in_range(lambda_);
    q_ = q_parameter(lambda_);
    limit_ = q_ * q_ + q_ + 1;
  }

  const Rational& lambda() const { return lambda_; }
  double q() const { return q_; }
  double at_infinity() const { return limit_; }

  const Rational& operator()(int m) const {
    if (m < 1) throw DomainError("phi needs m >= 1");
    while (static_cast<int>(cache_.size()) < m) cache_.push_back(phi(static_cast<int>(cache_.size()) + 1, lambda_));
    return cache_[m - 1];
  }

 private:
  Rational lambda_;
  double q_;
  double limit_;
  mutable std::vector<Rational> cache_;
};

/// dim H_k: d_0 = 1, d_1 = n - 1, d_{k+1} = (n-1) d_k - d_{k-1}.
inline std::int64_t dim_subproduct(int n, int k) {
  if (n < 2) throw DomainError("dim_subproduct needs n >= 2");
  if (k < 0) throw DomainError("dim_subproduct needs k >= 0");
  std::int64_t prev = 1, cur = n - 1;
  if (k == 0) return 1;
  if (cur <= 0) throw DomainError("dimension recursion is not positive");
  for (int i = 1; i < k; ++i) {
    std::int64_t next = (n - 1) * cur - prev;
    if (next <= 0) throw DomainError("dimension recursion is not positive at n=" + std::to_string(n));
    if (next > std::numeric_limits<std::int64_t>::max() / n) throw ResourceLimitError("dimension overflow");
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace motzkin
