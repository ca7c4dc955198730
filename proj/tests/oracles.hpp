#pragma once

// Independent closed forms and brute-force enumerations shared by the unit
// tests and the acceptance binary.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracles {

using Table = std::vector<std::vector<int64_t>>;

inline Table plus(Table t, int64_t m) {
  for (auto& row : t)
    for (auto& x : row) x += m;
  return t;
}

inline int64_t fdiv(int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Closed forms of ã_n(Λ) as exponent matrices.
inline Table closed_form_filtration(const std::string& name, int64_t n) {
  if (name == "L1") {
    const int64_t m = fdiv(n + 1, 2);  // n = 2m - 1 or 2m
    return plus(Table(3, std::vector<int64_t>(3, 0)), m);
  }
  if (name == "L2") {
    const int64_t m = fdiv(n, 2);
    if (n - 2 * m == 0) return plus({{0, 0, -1}, {1, 0, 0}, {1, 1, 0}}, m);
    return plus({{1, 0, 0}, {1, 1, 0}, {2, 1, 1}}, m);
  }
  const int64_t m = fdiv(n, 4), r = n - 4 * m;
  static const Table t[4] = {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}},
                             {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}},
                             {{1, 1, 0}, {1, 1, 1}, {1, 1, 1}},
                             {{1, 1, 1}, {1, 1, 1}, {2, 1, 1}}};
  return plus(t[r], m);
}

// Closed-form U_der levels.
inline int64_t closed_form_uder(const std::string& name, int64_t n, bool ram) {
  if (!ram) {
    if (name == "L1") return fdiv(n + 1, 2);
    if (name == "L2") return n % 2 == 0 ? n / 2 - 1 : fdiv(n - 1, 2);
    const int64_t m = fdiv(n, 4), r = n - 4 * m;
    return r == 3 ? m + 1 : m;
  }
  const int64_t m = fdiv(n + 1, 2);  // n = 2m - 1 or 2m
  if (name == "L1") return fdiv(m, 2);
  return fdiv(m - 1, 2);
}

// Brute-force oracle: the classes ϖ0^v·u (u mod p) hit by x·σ(x) with
// x = a + bδ, a, b running over residues mod p^k, computed with plain integers.
inline std::set<std::pair<int64_t, int64_t>> enumerate_norm_classes(int64_t p, bool ram, int64_t D,
                                                                  int k) {
  int64_t m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  const int64_t dsq = ram ? -p : D;
  std::set<std::pair<int64_t, int64_t>> out;
  for (int64_t a = 0; a < m; ++a)
    for (int64_t b = 0; b < m; ++b) {
      int64_t n = ((a * a - dsq * b * b) % (m * m) + m * m) % (m * m);
      if (n == 0) continue;
      int64_t v = 0;
      while (n % p == 0) {
        n /= p;
        ++v;
      }
      if (v > 2) continue;
      out.insert({v, n % p});
    }
  return out;
}

}  // namespace oracles
