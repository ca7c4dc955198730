#pragma once

#include <random>

#include "u21/padic.hpp"

namespace testing {

inline u21::FieldPtr field(int64_t p, bool ram, int prec = 24) {
  return u21::Field::make({p, ram, u21::smallest_nonresidue(p), prec});
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}
  int64_t uniform(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(g);
  }
  // Unit of o_F0 with small digits.
  u21::BaseElement unit(const u21::Field& f) {
    int64_t a;
    do a = uniform(-400, 400);
    while (a % f.p() == 0);
    return f.from_int(a);
  }
  u21::BaseElement integral(const u21::Field& f) { return f.from_int(uniform(-400, 400)); }
  // Element of o_F.
  u21::ExtElement ext_integral(const u21::Field& f) {
    return {integral(f), integral(f)};
  }
  u21::ExtElement ext_unit(const u21::Field& f) {
    for (;;) {
      u21::ExtElement x = ext_integral(f);
      if (!x.is_zero() && x.nu_F() == 0) return x;
    }
  }
};

}  // namespace testing
