#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "config.hpp"
#include "diagram.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace motzkin {

enum class Generator { Identity, T, L, R, P };

inline std::string generator_name(Generator g) {
  switch (g) {
    case Generator::Identity: return "id";
    case Generator::T: return "t";
    case Generator::L: return "l";
    case Generator::R: return "r";
    case Generator::P: return "p";
  }
  return "?";
}

/// A finite linear combination of width-k Motzkin diagrams with exact
/// rational coefficients, in M_k with loop value 1/lambda.
class AlgebraElement {
 public:
  using Terms = std::map<MotzkinDiagram, Rational>;

  AlgebraElement(int width, Rational lambda) : width_(width), lambda_(std::move(lambda)) {
    if (width < 0 || width > MotzkinDiagram::kMaxWidth)
      throw ResourceLimitError("width " + std::to_string(width) + " out of range");
    if (lambda_ <= 0) throw DomainError("lambda must be positive");
  }

  static AlgebraElement zero(int width, const Rational& lambda) { return AlgebraElement(width, lambda); }

  static AlgebraElement identity(int width, const Rational& lambda) {
    return from_diagram(MotzkinDiagram::identity(width), lambda);
  }

  static AlgebraElement from_diagram(const MotzkinDiagram& d, const Rational& lambda, const Rational& coeff = 1) {
    AlgebraElement x(d.width(), lambda);
    x.add_term(d, coeff);
    return x;
  }

  int width() const { return width_; }
  const Rational& lambda() const { return lambda_; }
  Rational delta() const { return 1 / lambda_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const MotzkinDiagram& d) const {
    auto it = terms_.find(d);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const MotzkinDiagram& d, const Rational& coeff) {
    if (d.width() != width_) throw DimensionError("diagram width does not match element width");
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(d, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
    if (terms_.size() > limits().max_terms) throw ResourceLimitError("term count exceeds configured max_terms");
  }

  AlgebraElement& operator+=(const AlgebraElement& y) {
    require_compatible(y);
    for (const auto& [d, c] : y.terms_) add_term(d, c);
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& y) {
    require_compatible(y);
    for (const auto& [d, c] : y.terms_) add_term(d, -c);
    return *this;
  }
  AlgebraElement& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [d, c] : terms_) c *= s;
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement x, const AlgebraElement& y) { return x += y; }
  friend AlgebraElement operator-(AlgebraElement x, const AlgebraElement& y) { return x -= y; }
  friend AlgebraElement operator-(AlgebraElement x) { return x *= Rational(-1); }
  friend AlgebraElement operator*(const Rational& s, AlgebraElement x) { return x *= s; }
  friend AlgebraElement operator*(AlgebraElement x, const Rational& s) { return x *= s; }
  friend AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y);

  friend bool operator==(const AlgebraElement& x, const AlgebraElement& y) {
    return x.width_ == y.width_ && x.lambda_ == y.lambda_ && x.terms_ == y.terms_;
  }

  void require_compatible(const AlgebraElement& y) const {
    if (y.width_ != width_)
      throw DimensionError("width mismatch: " + std::to_string(width_) + " vs " + std::to_string(y.width_));
    if (y.lambda_ != lambda_) throw DomainError("elements use different lambda");
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [d, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + motzkin::to_string(c) + ")" + d.to_string();
    }
    return s;
  }

 private:
  int width_;
  Rational lambda_;
  Terms terms_;
};

inline AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
  x.require_compatible(y);
  const int k = x.width();
  // the number of loops is at most k / 2
  std::vector<Rational> delta_pow(k / 2 + 2);
  delta_pow[0] = 1;
  for (std::size_t i = 1; i < delta_pow.size(); ++i) delta_pow[i] = delta_pow[i - 1] * x.delta();

  std::unordered_map<MotzkinDiagram, Rational, DiagramHash> acc;
  Rational product;
  for (const auto& [dx, cx] : x.terms()) {
    for (const auto& [dy, cy] : y.terms()) {
      auto c = compose(dx, dy);
      product = cx * cy;
      if (c.loops) product *= delta_pow[c.loops];
      auto [it, inserted] = acc.try_emplace(c.diagram, product);
      if (!inserted) it->second += product;
    }
    if (acc.size() > limits().max_terms) throw ResourceLimitError("term count exceeds configured max_terms");
  }
  AlgebraElement out(k, x.lambda());
  for (auto& [d, c] : acc) out.add_term(d, c);
  return out;
}

inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) { return multiply(x, y); }

/// Reflection about a horizontal line. Coefficients are real, so nothing to
/// conjugate.
inline AlgebraElement adjoint(const AlgebraElement& x) {
  AlgebraElement out(x.width(), x.lambda());
  for (const auto& [d, c] : x.terms()) out.add_term(d.flipped(), c);
  return out;
}

inline AlgebraElement juxtapose(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.lambda() != y.lambda()) throw DomainError("elements use different lambda");
  AlgebraElement out(x.width() + y.width(), x.lambda());
  for (const auto& [dx, cx] : x.terms())
    for (const auto& [dy, cy] : y.terms()) out.add_term(dx.juxtaposed(dy), cx * cy);
  return out;
}

/// Appends h through strands on the right.
inline AlgebraElement embed(const AlgebraElement& x, int h) {
  if (h < 0) throw DomainError("embed needs h >= 0");
  if (h == 0) return x;
  return juxtapose(x, AlgebraElement::identity(h, x.lambda()));
}

/// Reflection about a vertical line.
inline AlgebraElement reflect(const AlgebraElement& x) {
  AlgebraElement out(x.width(), x.lambda());
  for (const auto& [d, c] : x.terms()) out.add_term(d.mirrored(), c);
  return out;
}

/// E: M_k -> M_{k-1}. Closes the rightmost strand, weights loops by 1/lambda,
/// deletes dead strands and multiplies by lambda, so E(1) = 1.
inline AlgebraElement conditional_expectation(const AlgebraElement& x) {
  if (x.width() < 1) throw DimensionError("conditional expectation needs width >= 1");
  AlgebraElement out(x.width() - 1, x.lambda());
  for (const auto& [d, c] : x.terms()) {
    auto closed = right_closure(d);
    out.add_term(closed.diagram, closed.loops ? Rational(c) : Rational(c * x.lambda()));
  }
  return out;
}

/// The generators id, t_i, l_i, r_i = l_i*, p_i of M_k (1-based index).
inline AlgebraElement generator(int k, Generator g, int i, const Rational& lambda) {
  if (k < 1) throw DomainError("generator needs width >= 1");
  auto out_of_range = [&] {
    return DomainError("index " + std::to_string(i) + " out of range for " + generator_name(g) + " at width " +
                       std::to_string(k));
  };
  auto d = MotzkinDiagram::empty_pairing(k);
  const int a = i - 1;  // 0-based slot
  switch (g) {
    case Generator::Identity:
      return AlgebraElement::identity(k, lambda);
    case Generator::T: {
      if (i < 1 || i > k - 1) throw out_of_range();
      for (int s = 0; s < k; ++s)
        if (s != a && s != a + 1) d.link(s, k + s);
      d.link(a, a + 1);
      d.link(k + a, k + a + 1);
      return AlgebraElement::from_diagram(d, lambda, lambda);
    }
    case Generator::L:
    case Generator::R: {
      if (i < 1 || i > k - 1) throw out_of_range();
      for (int s = 0; s < k; ++s)
        if (s != a && s != a + 1) d.link(s, k + s);
      d.link(a, k + a + 1);
      auto x = AlgebraElement::from_diagram(d, lambda);
      return g == Generator::L ? x : adjoint(x);
    }
    case Generator::P: {
      if (i < 1 || i > k) throw out_of_range();
      for (int s = 0; s < k; ++s)
        if (s != a) d.link(s, k + s);
      return AlgebraElement::from_diagram(d, lambda);
    }
  }
  throw out_of_range();
}

}  // namespace motzkin
