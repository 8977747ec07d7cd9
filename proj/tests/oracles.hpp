#pragma once

// Independent reference implementations used only by the tests.

#include <cstdint>
#include <set>
#include <vector>

#include "motzkin/diagram.hpp"

namespace oracle {

using motzkin::MotzkinDiagram;

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// M_n = sum_j C(n, 2j) Catalan(j)
inline std::uint64_t motzkin_by_binomials(int n) {
  std::uint64_t total = 0;
  for (int j = 0; 2 * j <= n; ++j) total += binomial(n, 2 * j) * binomial(2 * j, j) / (j + 1);
  return total;
}

inline std::uint64_t catalan(int n) { return binomial(2 * n, n) / (n + 1); }

// Two chords cross iff their endpoints interleave on the boundary circle.
inline bool crosses(int a, int b, int c, int d) {
  if (a > b) std::swap(a, b);
  if (c > d) std::swap(c, d);
  return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

inline int circular_position(int k, int point) { return point < k ? point : 3 * k - 1 - point; }

inline bool planar_by_chords(int k, const std::vector<int>& pairing) {
  for (int p = 0; p < 2 * k; ++p)
    for (int q = 0; q < 2 * k; ++q) {
      if (pairing[p] <= p || pairing[q] <= q || p == q) continue;
      if (crosses(circular_position(k, p), circular_position(k, pairing[p]), circular_position(k, q),
                  circular_position(k, pairing[q])))
        return false;
    }
  return true;
}

// Every partial matching of 2k points, planar ones kept.
inline void all_matchings(int k, std::vector<int>& pairing, int p, std::vector<std::vector<int>>& out) {
  if (p == 2 * k) {
    if (planar_by_chords(k, pairing)) out.push_back(pairing);
    return;
  }
  if (pairing[p] != -2) {
    all_matchings(k, pairing, p + 1, out);
    return;
  }
  pairing[p] = -1;
  all_matchings(k, pairing, p + 1, out);
  for (int q = p + 1; q < 2 * k; ++q) {
    if (pairing[q] != -2) continue;
    pairing[p] = q;
    pairing[q] = p;
    all_matchings(k, pairing, p + 1, out);
    pairing[q] = -2;
  }
  pairing[p] = -2;
}

inline std::set<std::vector<int>> planar_matchings(int k) {
  std::vector<int> pairing(2 * k, -2);
  std::vector<std::vector<int>> out;
  all_matchings(k, pairing, 0, out);
  return {out.begin(), out.end()};
}

struct TraceResult {
  std::vector<int> pairing;
  int loops = 0;
};

// Follows each strand through the stacked picture step by step.
inline TraceResult trace_compose(const MotzkinDiagram& upper, const MotzkinDiagram& lower) {
  const int k = upper.width();
  TraceResult res{std::vector<int>(2 * k, -1), 0};
  std::vector<bool> middle_seen(k, false);

  // Walk from a point on one side; returns the result point reached, or -1.
  // side 0 = in upper diagram, side 1 = in lower diagram; `point` is local.
  auto walk = [&](int side, int point) {
    while (true) {
      const MotzkinDiagram& d = side == 0 ? upper : lower;
      int q = d.partner(point);
      if (q < 0) return -1;
      if (side == 0 && q < k) return q;           // result top
      if (side == 1 && q >= k) return k + (q - k);  // result bottom
      int m = side == 0 ? q - k : q;
      middle_seen[m] = true;
      if (side == 0) {
        side = 1;
        point = m;
      } else {
        side = 0;
        point = k + m;
      }
    }
  };
  for (int a = 0; a < k; ++a) {
    int end = walk(0, a);
    if (end >= 0) {
      res.pairing[a] = end;
      res.pairing[end] = a;
    }
    end = walk(1, k + a);
    if (end >= 0) {
      res.pairing[k + a] = end;
      res.pairing[end] = k + a;
    }
  }
  for (int m = 0; m < k; ++m) {
    if (middle_seen[m]) continue;
    // walk around starting at middle m going into the upper diagram
    int cur = m;
    bool closed = false;
    bool in_upper = true;
    while (true) {
      middle_seen[cur] = true;
      const MotzkinDiagram& d = in_upper ? upper : lower;
      int local = in_upper ? k + cur : cur;
      int q = d.partner(local);
      if (q < 0) break;
      int next = in_upper ? q - k : q;
      if (in_upper && q < k) break;
      if (!in_upper && q >= k) break;
      in_upper = !in_upper;
      if (next == m && in_upper) {
        closed = true;
        break;
      }
      cur = next;
    }
    if (closed) ++res.loops;
    else {
      // a dead path: mark the rest of it from the other direction
      int c = m;
      bool up = false;
      while (true) {
        middle_seen[c] = true;
        const MotzkinDiagram& d = up ? upper : lower;
        int local = up ? k + c : c;
        int q = d.partner(local);
        if (q < 0 || (up && q < k) || (!up && q >= k)) break;
        c = up ? q - k : q;
        up = !up;
      }
    }
  }
  return res;
}

}  // namespace oracle
