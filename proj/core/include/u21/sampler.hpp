#pragma once

#include <cstdint>
#include <random>

#include <utility>

#include "u21/stratum.hpp"

namespace u21 {

struct SampleOptions {
  int64_t p = 5;
  bool ramified = false;
  TypeTag type = TypeTag::D;
  int max_valuation = 6;  // bound on |ν_F| of the entries of β
  int precision = 24;
  int max_attempts = 10000;
};

// Draws a valid stratum by rejection; throws InconclusiveEnumeration when
// max_attempts candidates all fail validation.
Stratum sample_stratum(std::mt19937_64& rng, const SampleOptions& opt);

// Same, over a caller-provided field.
Stratum sample_stratum(std::mt19937_64& rng, const FieldPtr& f, TypeTag type, int max_valuation = 6,
                       int max_attempts = 10000);

// Product of `factors` random generators u(c, d), ū(c, d) and diag(z, z', σ(z)^-1)
// with integral coordinates, in a Witt basis.
Matrix random_group_element(std::mt19937_64& rng, const Field& f, int factors = 4);

// Pair (x, y) in o_F with x·σ(x) + y + σ(y) = 0 and ν_F(x) = nu (x = 0 for nu = kInf).
std::pair<ExtElement, ExtElement> random_unipotent_pair(std::mt19937_64& rng, const Field& f,
                                                        int64_t nu);

}  // namespace u21
