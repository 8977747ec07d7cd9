#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "jones_wenzl.hpp"
#include "rational.hpp"
#include "representation.hpp"

namespace motzkin {

// expr    := ['-'] term (('+'|'-') term)*
// term    := factor ('*' factor)*
// factor  := atom postfix*
// postfix := "'" | '^' int
// atom    := rational | ident | '(' expr ')' | 'E' '(' expr ')'
// ident   := ('id'|'t'|'l'|'r'|'p'|'g') int?
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Atom, Sum, Product, Adjoint, Power, Expectation };
  Kind kind = Kind::Number;
  Rational value;             // Number
  std::string name;           // Atom
  int index = -1;             // Atom, -1 when omitted
  int exponent = 0;           // Power
  std::vector<Expr> children;
  std::vector<bool> negated;  // Sum: sign of each child
};

namespace detail {

inline ExprNode node_of(ExprNode::Kind kind) {
  ExprNode n;
  n.kind = kind;
  return n;
}

inline Expr make_node(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

class Parser {
 public:
  Parser(std::string_view src, int width) : src_(src), width_(width) {}

  Expr parse() {
    auto e = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_digit() const { return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])); }

  std::string digits() {
    std::size_t start = pos_;
    while (at_digit()) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  int integer() {
    skip_space();
    std::size_t start = pos_;
    if (!at_digit()) fail("expected an integer");
    auto s = digits();
    if (s.size() > 6) fail("integer too large", start);
    return std::stoi(s);
  }

  Expr expr() {
    auto sum = node_of(ExprNode::Kind::Sum);
    bool neg = accept('-');
    sum.children.push_back(term());
    sum.negated.push_back(neg);
    for (;;) {
      if (accept('+'))
        neg = false;
      else if (accept('-'))
        neg = true;
      else
        break;
      sum.children.push_back(term());
      sum.negated.push_back(neg);
    }
    if (sum.children.size() == 1 && !sum.negated[0]) return sum.children[0];
    return make_node(std::move(sum));
  }

  Expr term() {
    auto prod = node_of(ExprNode::Kind::Product);
    prod.children.push_back(factor());
    while (accept('*')) prod.children.push_back(factor());
    if (prod.children.size() == 1) return prod.children[0];
    return make_node(std::move(prod));
  }

  Expr factor() {
    Expr e = atom();
    for (;;) {
      if (accept('\'')) {
        auto n = node_of(ExprNode::Kind::Adjoint);
        n.children.push_back(e);
        e = make_node(std::move(n));
      } else if (accept('^')) {
        auto n = node_of(ExprNode::Kind::Power);
        n.exponent = integer();
        n.children.push_back(e);
        e = make_node(std::move(n));
      } else {
        return e;
      }
    }
  }

  Expr atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    if (at_digit()) {
      std::string text = digits();
      if (pos_ < src_.size() && src_[pos_] == '/') {
        ++pos_;
        if (!at_digit()) fail("expected a denominator");
        text += "/" + digits();
      }
      auto n = node_of(ExprNode::Kind::Number);
      try {
        n.value = parse_rational(text);
      } catch (const DomainError&) {
        fail("invalid rational '" + text + "'", start);
      }
      return make_node(std::move(n));
    }
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(src_[pos_]))) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "E") {
      expect('(');
      auto n = node_of(ExprNode::Kind::Expectation);
      n.children.push_back(expr());
      expect(')');
      return make_node(std::move(n));
    }
    if (name != "id" && name != "t" && name != "l" && name != "r" && name != "p" && name != "g")
      fail("unknown atom '" + name + "'", start);
    auto n = node_of(ExprNode::Kind::Atom);
    n.name = name;
    if (at_digit()) {
      const std::size_t idx_at = pos_;
      auto s = digits();
      if (s.size() > 6) fail("index too large", idx_at);
      n.index = std::stoi(s);
    }
    check_index(n, start);
    return make_node(std::move(n));
  }

  void check_index(const ExprNode& n, std::size_t at) const {
    const int k = width_, i = n.index;
    auto bad = [&](const std::string& range) {
      fail("index " + std::to_string(i) + " of '" + n.name + "' out of range " + range + " for width " +
               std::to_string(k),
           at);
    };
    if (n.name == "id") {
      if (i != -1) fail("'id' takes no index", at);
    } else if (n.name == "g") {
      if (i != -1 && (i < 1 || i > k)) bad("1.." + std::to_string(k));
    } else if (i == -1) {
      fail("'" + n.name + "' needs an index", at);
    } else if (n.name == "p") {
      if (i < 1 || i > k) bad("1.." + std::to_string(k));
    } else if (i < 1 || i > k - 1) {
      bad("1.." + std::to_string(k - 1));
    }
  }

  std::string_view src_;
  int width_;
  std::size_t pos_ = 0;
};

inline bool is_postfix_operand(const ExprNode& e) {
  using K = ExprNode::Kind;
  return e.kind == K::Atom || e.kind == K::Number || e.kind == K::Expectation || e.kind == K::Adjoint ||
         e.kind == K::Power;
}

}  // namespace detail

/// Parses an expression whose generator atoms live in M_k, k = width.
inline Expr parse_expression(std::string_view src, int width) {
  if (width < 1) throw DomainError("expression width must be >= 1");
  return detail::Parser(src, width).parse();
}

/// Canonical form: no redundant parentheses, " + " and " - " between
/// summands, no spaces elsewhere.
inline std::string to_string(const Expr& e) {
  using K = ExprNode::Kind;
  switch (e->kind) {
    case K::Number:
      return to_string(e->value);
    case K::Atom:
      return e->name + (e->index >= 0 ? std::to_string(e->index) : "");
    case K::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        const auto& c = e->children[i];
        std::string part = c->kind == K::Sum ? "(" + to_string(c) + ")" : to_string(c);
        if (i == 0)
          s = e->negated[0] ? "-" + part : part;
        else
          s += (e->negated[i] ? " - " : " + ") + part;
      }
      return s;
    }
    case K::Product: {
      std::string s;
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        const auto& c = e->children[i];
        if (i) s += "*";
        s += c->kind == K::Sum || c->kind == K::Product ? "(" + to_string(c) + ")" : to_string(c);
      }
      return s;
    }
    case K::Adjoint:
    case K::Power: {
      const auto& c = e->children[0];
      std::string base = detail::is_postfix_operand(*c) ? to_string(c) : "(" + to_string(c) + ")";
      return e->kind == K::Adjoint ? base + "'" : base + "^" + std::to_string(e->exponent);
    }
    case K::Expectation:
      return "E(" + to_string(e->children[0]) + ")";
  }
  return {};
}

inline bool structurally_equal(const Expr& x, const Expr& y) {
  if (x->kind != y->kind || x->value != y->value || x->name != y->name || x->index != y->index ||
      x->exponent != y->exponent || x->negated != y->negated || x->children.size() != y->children.size())
    return false;
  for (std::size_t i = 0; i < x->children.size(); ++i)
    if (!structurally_equal(x->children[i], y->children[i])) return false;
  return true;
}

namespace detail {

/// Shared tree walk. A value is either a bare scalar (a multiple of the
/// identity in every width) or an element of a definite width.
template <class Backend>
class Evaluator {
 public:
  using Scalar = typename Backend::Scalar;
  using Element = typename Backend::Element;
  using Value = std::variant<Scalar, Element>;

  Evaluator(Backend& backend, int width) : b_(backend), width_(width) {}

  Element run(const Expr& e) { return as_element(eval(e), width_); }

 private:
  Element as_element(const Value& v, int width) {
    if (auto s = std::get_if<Scalar>(&v)) return b_.scale(*s, b_.identity(width));
    return std::get<Element>(v);
  }

  Value add(const Value& x, const Value& y, bool negate) {
    auto sy = std::get_if<Scalar>(&y);
    auto sx = std::get_if<Scalar>(&x);
    if (sx && sy) return negate ? Scalar(*sx - *sy) : Scalar(*sx + *sy);
    const int w = sx ? b_.width(std::get<Element>(y)) : b_.width(std::get<Element>(x));
    Element ex = as_element(x, w), ey = as_element(y, w);
    if (b_.width(ex) != b_.width(ey))
      throw DimensionError("width mismatch: " + std::to_string(b_.width(ex)) + " vs " + std::to_string(b_.width(ey)));
    return negate ? b_.sub(ex, ey) : b_.add(ex, ey);
  }

  Value mul(const Value& x, const Value& y) {
    auto sx = std::get_if<Scalar>(&x);
    auto sy = std::get_if<Scalar>(&y);
    if (sx && sy) return Scalar(*sx * *sy);
    if (sx) return b_.scale(*sx, std::get<Element>(y));
    if (sy) return b_.scale(*sy, std::get<Element>(x));
    const auto& ex = std::get<Element>(x);
    const auto& ey = std::get<Element>(y);
    if (b_.width(ex) != b_.width(ey))
      throw DimensionError("width mismatch: " + std::to_string(b_.width(ex)) + " vs " + std::to_string(b_.width(ey)));
    return b_.mul(ex, ey);
  }

  Value eval(const Expr& e) {
    using K = ExprNode::Kind;
    switch (e->kind) {
      case K::Number:
        return b_.scalar(e->value);
      case K::Atom:
        if (e->name == "id") return Scalar(b_.scalar(1));
        if (e->name == "g") return b_.jones_wenzl(e->index < 0 ? width_ : e->index, width_);
        return b_.generator(e->name, e->index, width_);
      case K::Sum: {
        Value acc = eval(e->children[0]);
        if (e->negated[0]) acc = mul(Scalar(b_.scalar(-1)), acc);
        for (std::size_t i = 1; i < e->children.size(); ++i) acc = add(acc, eval(e->children[i]), e->negated[i]);
        return acc;
      }
      case K::Product: {
        Value acc = eval(e->children[0]);
        for (std::size_t i = 1; i < e->children.size(); ++i) acc = mul(acc, eval(e->children[i]));
        return acc;
      }
      case K::Adjoint: {
        Value v = eval(e->children[0]);
        if (auto s = std::get_if<Scalar>(&v)) return b_.conj(*s);
        return b_.adjoint(std::get<Element>(v));
      }
      case K::Power: {
        Value base = eval(e->children[0]);
        Value acc = Scalar(b_.scalar(1));
        for (int i = 0; i < e->exponent; ++i) acc = mul(acc, base);
        return acc;
      }
      case K::Expectation: {
        Value v = eval(e->children[0]);
        if (std::holds_alternative<Scalar>(v)) return v;
        const auto& x = std::get<Element>(v);
        if (b_.width(x) < 1) throw DimensionError("E needs width >= 1");
        return b_.expectation(x);
      }
    }
    throw DomainError("malformed expression");
  }

  Backend& b_;
  int width_;
};

struct AbstractBackend {
  using Scalar = Rational;
  using Element = AlgebraElement;
  JWCache cache;

  Scalar scalar(const Rational& q) const { return q; }
  Scalar conj(const Scalar& s) const { return s; }
  int width(const Element& x) const { return x.width(); }
  Element identity(int w) const { return AlgebraElement::identity(w, cache.lambda()); }
  Element scale(const Scalar& s, const Element& x) const { return s * x; }
  Element add(const Element& x, const Element& y) const { return x + y; }
  Element sub(const Element& x, const Element& y) const { return x - y; }
  Element mul(const Element& x, const Element& y) const { return x * y; }
  Element adjoint(const Element& x) const { return motzkin::adjoint(x); }
  Element expectation(const Element& x) const { return conditional_expectation(x); }
  Element generator(const std::string& name, int i, int w) const {
    Generator g = name == "t" ? Generator::T : name == "l" ? Generator::L : name == "r" ? Generator::R : Generator::P;
    return motzkin::generator(w, g, i, cache.lambda());
  }
  Element jones_wenzl(int j, int w) { return embed(cache.g(j), w - j); }
};

struct RepresentationBackend {
  using Scalar = Complex;
  struct Element {
    int level;
    SparseMatrix matrix;
  };
  const MotzkinPair& pair;
  double tol;

  Scalar scalar(const Rational& q) const { return Complex(Rational(q).get_d()); }
  Scalar conj(const Scalar& s) const { return std::conj(s); }
  int width(const Element& x) const { return x.level; }
  Element identity(int w) const { return {w, sparse_identity(tensor_dim(pair.n, w))}; }
  Element scale(const Scalar& s, const Element& x) const { return {x.level, SparseMatrix(s * x.matrix)}; }
  Element add(const Element& x, const Element& y) const { return {x.level, SparseMatrix(x.matrix + y.matrix)}; }
  Element sub(const Element& x, const Element& y) const { return {x.level, SparseMatrix(x.matrix - y.matrix)}; }
  Element mul(const Element& x, const Element& y) const { return {x.level, SparseMatrix(x.matrix * y.matrix)}; }
  Element adjoint(const Element& x) const { return {x.level, SparseMatrix(x.matrix.adjoint())}; }
  Element expectation(const Element& x) const {
    auto op = rep_conditional_expectation(pair, x.level - 1, x.matrix, tol);
    return {op.codomain_level, op.matrix};
  }
  Element generator(const std::string& name, int i, int w) const {
    auto [g, idx] = parse_generator_token(name + std::to_string(i));
    return {w, generator_matrix(pair, w, g, idx)};
  }
  Element jones_wenzl(int j, int w) const {
    SparseMatrix G = subproduct_projection(pair, j).G.sparseView(0.0, 1e-14);
    return {w, motzkin::kron(G, sparse_identity(tensor_dim(pair.n, w - j)))};
  }
};

}  // namespace detail

/// Evaluates in M_k(1/lambda), exactly. E lowers the width by one.
inline AlgebraElement evaluate_abstract(const Expr& e, int width, const Rational& lambda) {
  detail::AbstractBackend backend{JWCache(lambda)};
  return detail::Evaluator<detail::AbstractBackend>(backend, width).run(e);
}

/// Evaluates through the representation of a Motzkin pair; g<j> is the
/// dense subproduct projection G_j.
inline LinearOperator evaluate_representation(const Expr& e, int width, const MotzkinPair& pr, double tol = 1e-10) {
  tensor_dim(pr.n, width);
  detail::RepresentationBackend backend{pr, tol};
  auto x = detail::Evaluator<detail::RepresentationBackend>(backend, width).run(e);
  return {pr.n, x.level, x.level, std::move(x.matrix)};
}

}  // namespace motzkin
