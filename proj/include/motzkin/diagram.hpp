#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"

namespace motzkin {

/// A Motzkin diagram of width k: a non-crossing partial matching of the 2k
/// boundary points. Point p < k is top point p (left to right), point k + p
/// is bottom point p (left to right). The pairing array itself is the
/// canonical form, so equality, ordering and hashing all work on it.
class MotzkinDiagram {
 public:
  static constexpr int kMaxWidth = 8;
  static constexpr int kIsolated = -1;

  MotzkinDiagram() { pairing_.fill(kIsolated); }

  /// All points isolated.
  static MotzkinDiagram empty_pairing(int width) {
    MotzkinDiagram d;
    d.width_ = static_cast<std::uint8_t>(check_width(width));
    return d;
  }

  static MotzkinDiagram identity(int width) {
    auto d = empty_pairing(width);
    const int k = std::min(width, kMaxWidth);  // min() only silences a GCC bounds false positive
    for (int p = 0; p < k; ++p) d.link(p, k + p);
    return d;
  }

  /// Builds a diagram from a partner array of length 2k (kIsolated for
  /// unmatched points). Throws DomainError unless the array is a symmetric,
  /// irreflexive, planar matching.
  static MotzkinDiagram from_pairing(std::span<const int> pairing) {
    if (pairing.size() % 2 != 0) throw DomainError("pairing must have even length");
    const int k = static_cast<int>(pairing.size() / 2);
    auto d = empty_pairing(k);
    for (int p = 0; p < 2 * k; ++p) {
      int q = pairing[p];
      if (q == kIsolated) continue;
      if (q < 0 || q >= 2 * k || q == p) throw DomainError("pairing entry out of range");
      if (pairing[q] != p) throw DomainError("pairing is not symmetric");
      d.pairing_[p] = static_cast<std::int8_t>(q);
    }
    if (!d.is_planar()) throw DomainError("pairing has crossing strands");
    return d;
  }

  int width() const { return width_; }
  int size() const { return 2 * width_; }
  int partner(int point) const { return pairing_[point]; }
  bool isolated(int point) const { return pairing_[point] == kIsolated; }

  std::vector<int> pairing() const {
    return std::vector<int>(pairing_.begin(), pairing_.begin() + size());
  }

  /// Number of edges in the diagram.
  int edge_count() const {
    int matched = 0;
    for (int p = 0; p < size(); ++p) matched += pairing_[p] != kIsolated;
    return matched / 2;
  }

  /// Temperley-Lieb diagrams have exactly k edges.
  bool is_temperley_lieb() const { return edge_count() == width_; }

  /// Checks non-crossing-ness on the circular order top_1..top_k,
  /// bottom_k..bottom_1 with a bracket stack that skips isolated points.
  bool is_planar() const {
    const int k = width_;
    auto position = [k](int point) { return point < k ? point : 3 * k - 1 - point; };
    std::array<int, 2 * kMaxWidth> at_position{};
    for (int p = 0; p < 2 * k; ++p) at_position[position(p)] = p;
    std::array<int, 2 * kMaxWidth> stack{};
    int depth = 0;
    for (int pos = 0; pos < 2 * k; ++pos) {
      int p = at_position[pos];
      int q = pairing_[p];
      if (q == kIsolated) continue;
      if (position(q) > pos) {
        stack[depth++] = p;
      } else {
        if (depth == 0 || stack[depth - 1] != q) return false;
        --depth;
      }
    }
    return depth == 0;
  }

  /// Reflection about a horizontal line (top <-> bottom).
  MotzkinDiagram flipped() const {
    const int k = width_;
    auto swap_side = [k](int p) { return p < k ? p + k : p - k; };
    auto d = empty_pairing(k);
    for (int p = 0; p < 2 * k; ++p)
      if (pairing_[p] != kIsolated) d.pairing_[swap_side(p)] = static_cast<std::int8_t>(swap_side(pairing_[p]));
    return d;
  }

  /// Reflection about a vertical line (left <-> right).
  MotzkinDiagram mirrored() const {
    const int k = width_;
    auto mirror = [k](int p) { return p < k ? k - 1 - p : k + (2 * k - 1 - p); };
    auto d = empty_pairing(k);
    for (int p = 0; p < 2 * k; ++p)
      if (pairing_[p] != kIsolated) d.pairing_[mirror(p)] = static_cast<std::int8_t>(mirror(pairing_[p]));
    return d;
  }

  /// Horizontal juxtaposition: this diagram on the left, `right` on the right.
  MotzkinDiagram juxtaposed(const MotzkinDiagram& right) const {
    const int a = width_, b = right.width_, k = a + b;
    auto d = empty_pairing(k);
    auto from_left = [a, k](int p) { return p < a ? p : k + (p - a); };
    auto from_right = [a, b, k](int p) { return p < b ? a + p : k + a + (p - b); };
    for (int p = 0; p < 2 * a; ++p)
      if (pairing_[p] != kIsolated) d.pairing_[from_left(p)] = static_cast<std::int8_t>(from_left(pairing_[p]));
    for (int p = 0; p < 2 * b; ++p)
      if (right.pairing_[p] != kIsolated)
        d.pairing_[from_right(p)] = static_cast<std::int8_t>(from_right(right.pairing_[p]));
    return d;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull ^ width_;
    for (int p = 0; p < size(); ++p) {
      h ^= static_cast<std::uint8_t>(pairing_[p]);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const MotzkinDiagram& x, const MotzkinDiagram& y) {
    return x.width_ == y.width_ && x.pairing_ == y.pairing_;
  }
  /// Width first, then lexicographic on the pairing array.
  friend std::strong_ordering operator<=>(const MotzkinDiagram& x, const MotzkinDiagram& y) {
    if (auto c = x.width_ <=> y.width_; c != 0) return c;
    for (int p = 0; p < x.size(); ++p)
      if (auto c = x.pairing_[p] <=> y.pairing_[p]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int p = 0; p < size(); ++p) {
      if (p) s += ',';
      s += std::to_string(pairing_[p]);
    }
    return s + "]";
  }

  /// Used by builders that know the result is planar.
  void link(int p, int q) {
    pairing_[p] = static_cast<std::int8_t>(q);
    pairing_[q] = static_cast<std::int8_t>(p);
  }

 private:
  static int check_width(int width) {
    if (width < 0 || width > kMaxWidth)
      throw ResourceLimitError("diagram width " + std::to_string(width) + " exceeds hard cap " +
                               std::to_string(kMaxWidth));
    return width;
  }

  std::uint8_t width_ = 0;
  std::array<std::int8_t, 2 * kMaxWidth> pairing_;
};

struct DiagramHash {
  std::size_t operator()(const MotzkinDiagram& d) const { return d.hash(); }
};

namespace detail {

struct UnionFind {
  std::array<int, 3 * MotzkinDiagram::kMaxWidth> parent;
  explicit UnionFind(int n) { std::iota(parent.begin(), parent.begin() + n, 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace detail

/// Result of stacking two diagrams: the reduced diagram and the number of
/// closed loops that were removed.
struct Composition {
  MotzkinDiagram diagram;
  int loops = 0;
};

/// Stacks `upper` on top of `lower` (upper's bottom row glued to lower's top
/// row). Strands are traced with union-find over top, middle and bottom
/// points; a component with no boundary point and no dangling middle point is
/// a loop, any strand that reaches an unmatched middle point is deleted.
inline Composition compose(const MotzkinDiagram& upper, const MotzkinDiagram& lower) {
  const int k = upper.width();
  if (lower.width() != k) throw DimensionError("cannot compose diagrams of different widths");
  // nodes: [0,k) result top, [k,2k) middle, [2k,3k) result bottom
  detail::UnionFind uf(3 * k);
  std::array<std::uint8_t, 3 * MotzkinDiagram::kMaxWidth> degree{};
  // upper: top -> top, bottom -> middle; lower: top -> middle, bottom -> bottom
  auto upper_node = [](int p) { return p; };
  auto lower_node = [k](int p) { return k + p; };
  for (int p = 0; p < 2 * k; ++p) {
    int q = upper.partner(p);
    if (q != MotzkinDiagram::kIsolated && p < q) {
      uf.unite(upper_node(p), upper_node(q));
      ++degree[upper_node(p)];
      ++degree[upper_node(q)];
    }
    q = lower.partner(p);
    if (q != MotzkinDiagram::kIsolated && p < q) {
      uf.unite(lower_node(p), lower_node(q));
      ++degree[lower_node(p)];
      ++degree[lower_node(q)];
    }
  }

  constexpr int kNone = -1;
  std::array<int, 3 * MotzkinDiagram::kMaxWidth> first_outer;
  std::array<bool, 3 * MotzkinDiagram::kMaxWidth> dangling{};
  std::array<bool, 3 * MotzkinDiagram::kMaxWidth> seen_outer{};
  first_outer.fill(kNone);

  Composition out{MotzkinDiagram::empty_pairing(k), 0};
  auto result_point = [k](int node) { return node < k ? node : node - k; };
  for (int node = 0; node < 3 * k; ++node) {
    int root = uf.find(node);
    bool outer = node < k || node >= 2 * k;
    if (outer) {
      seen_outer[root] = true;
      if (first_outer[root] == kNone) {
        first_outer[root] = node;
      } else {
        out.diagram.link(result_point(first_outer[root]), result_point(node));
      }
    } else if (degree[node] < 2) {
      dangling[root] = true;
    }
  }
  // A closed loop is a middle-only component without a dangling point.
  std::array<bool, 3 * MotzkinDiagram::kMaxWidth> counted{};
  for (int node = k; node < 2 * k; ++node) {
    int root = uf.find(node);
    if (counted[root]) continue;
    counted[root] = true;
    if (!seen_outer[root] && !dangling[root]) ++out.loops;
  }
  return out;
}

/// Closes top point k and bottom point k around the right side. Returns the
/// width k-1 diagram and whether the closure formed a loop.
inline Composition right_closure(const MotzkinDiagram& d) {
  const int k = d.width();
  if (k == 0) throw DimensionError("closure needs width >= 1");
  detail::UnionFind uf(2 * k);
  std::array<std::uint8_t, 2 * MotzkinDiagram::kMaxWidth> degree{};
  for (int p = 0; p < 2 * k; ++p) {
    int q = d.partner(p);
    if (q != MotzkinDiagram::kIsolated && p < q) {
      uf.unite(p, q);
      ++degree[p];
      ++degree[q];
    }
  }
  const int top_last = k - 1, bottom_last = 2 * k - 1;
  uf.unite(top_last, bottom_last);
  ++degree[top_last];
  ++degree[bottom_last];

  Composition out{MotzkinDiagram::empty_pairing(k - 1), 0};
  auto reduced = [k](int p) { return p < k ? p : p - 1; };  // drops top k, shifts bottoms
  std::array<int, 2 * MotzkinDiagram::kMaxWidth> first;
  first.fill(-1);
  bool closure_touches_outer = false;
  int closure_root = uf.find(top_last);
  for (int p = 0; p < 2 * k; ++p) {
    if (p == top_last || p == bottom_last) continue;
    int root = uf.find(p);
    if (root == closure_root) closure_touches_outer = true;
    if (first[root] < 0) {
      first[root] = p;
    } else {
      out.diagram.link(reduced(first[root]), reduced(p));
    }
  }
  if (!closure_touches_outer && degree[top_last] == 2 && degree[bottom_last] == 2) out.loops = 1;
  return out;
}

/// M_0 = 1, M_{m+1} = M_m + sum_{j=0}^{m-1} M_j M_{m-1-j}.
inline std::uint64_t motzkin_number(int m) {
  if (m < 0) throw DomainError("motzkin_number needs m >= 0");
  std::vector<std::uint64_t> M(static_cast<std::size_t>(m) + 1);
  M[0] = 1;
  for (int i = 0; i < m; ++i) {
    std::uint64_t next = M[i];
    for (int j = 0; j <= i - 1; ++j) next += M[j] * M[i - 1 - j];
    M[i + 1] = next;
  }
  return M[m];
}

namespace detail {

// Extends a partial pairing by walking the circular order and deciding for
// each point whether it is isolated, opens a strand or closes the innermost
// open strand.
inline void enumerate_rec(int k, int pos, std::array<int, 2 * MotzkinDiagram::kMaxWidth>& open, int depth,
                          std::vector<int>& pairing, std::vector<MotzkinDiagram>& out) {
  if (pos == 2 * k) {
    if (depth == 0) out.push_back(MotzkinDiagram::from_pairing(pairing));
    return;
  }
  auto point_at = [k](int position) { return position < k ? position : 3 * k - 1 - position; };
  int p = point_at(pos);
  if (2 * k - pos < depth) return;
  pairing[p] = MotzkinDiagram::kIsolated;
  enumerate_rec(k, pos + 1, open, depth, pairing, out);
  open[depth] = p;
  enumerate_rec(k, pos + 1, open, depth + 1, pairing, out);
  if (depth > 0) {
    int q = open[depth - 1];
    pairing[p] = q;
    pairing[q] = p;
    enumerate_rec(k, pos + 1, open, depth - 1, pairing, out);
    pairing[q] = MotzkinDiagram::kIsolated;
    open[depth - 1] = q;
  }
  pairing[p] = MotzkinDiagram::kIsolated;
}

}  // namespace detail

/// Every Motzkin diagram of width k, sorted lexicographically by pairing.
inline std::vector<MotzkinDiagram> enumerate_basis(int k) {
  if (k < 1) throw DomainError("enumerate_basis needs k >= 1");
  if (k > limits().max_width)
    throw ResourceLimitError("width " + std::to_string(k) + " exceeds configured max_width " +
                             std::to_string(limits().max_width));
  std::vector<MotzkinDiagram> out;
  std::vector<int> pairing(2 * static_cast<std::size_t>(k), MotzkinDiagram::kIsolated);
  std::array<int, 2 * MotzkinDiagram::kMaxWidth> open{};
  detail::enumerate_rec(k, 0, open, 0, pairing, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace motzkin
