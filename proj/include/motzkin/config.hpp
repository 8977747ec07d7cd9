#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace motzkin {

/// Resource bounds shared by all modules. Exceeding one is a clean
/// ResourceLimitError, never a crash.
struct Limits {
  int max_width = 6;                  // widest diagram basis we enumerate
  std::size_t max_terms = 1'000'000;  // terms in one algebra element
  std::size_t max_dim = 4096;         // n^k for tensor-power operators
  std::size_t max_dense_dim = 1024;   // n^k for dense projections G_k
  std::size_t max_multi_indices = 2048;
};

/// Process-wide limits; MOTZKIN_MAX_DIM overrides max_dim. Read once.
inline const Limits& limits() {
  static const Limits value = [] {
    Limits l;
    if (const char* env = std::getenv("MOTZKIN_MAX_DIM")) {
      try {
        auto parsed = std::stoull(env);
        if (parsed > 0) l.max_dim = parsed;
      } catch (...) {
      }
    }
    return l;
  }();
  return value;
}

}  // namespace motzkin
