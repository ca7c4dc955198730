#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "u21/stratum.hpp"

namespace u21 {

// Variables z = (x0, y0, x1, y1, x2, y2) with v_i = x_i + y_i·δ.
inline constexpr int kVars = 6;
using Point6 = std::array<BaseElement, kVars>;

// Q(z) = unit · p^scale · z^T S z with S symmetric and primitive integral.
struct QuadraticForm6 {
  std::array<std::array<BaseElement, kVars>, kVars> S;
  int64_t scale = 0;
  BaseElement unit;  // invalid means 1
  bool zero = true;

  BaseElement eval(const Point6& z) const;
  BaseElement raw(const Point6& z) const;  // z^T S z
  // Gradient of z^T S z (without p^scale).
  std::array<BaseElement, kVars> gradient(const Point6& z) const;
};

struct QuadricPairSystem {
  FieldPtr field;
  QuadraticForm6 q1;  // h(v, v)
  QuadraticForm6 q2;  // h(v, βv)/δ
  // Members Q2 - c·Q1 of the pencil vanishing on V_i for scalar blocks;
  // implied by (Q1, Q2) and used only to prune the search.
  std::vector<QuadraticForm6> pencil;
};

QuadricPairSystem assemble_system(const Stratum& s);

// A pencil member (Q2 included) supported on one F-coordinate is c·N(v_i), so every common
// zero has v_i = 0. Once those vanish Q2 may be a multiple of Q1, and the
// system is a single quadric.
struct SystemShape {
  std::array<bool, 3> forced_zero{};
  bool single = false;
};

SystemShape system_shape(const QuadricPairSystem& sys);
Point6 to_point(const Vec& v);
Vec from_point(const Field& f, const Point6& z);

enum class XStatus { Empty, NonEmpty };
const char* to_string(XStatus x);

// One consulted rule: an identifier, the rule in words, its inputs and the outcome.
struct TraceStep {
  std::string lemma;
  std::string rule;
  std::string inputs;
  std::string outcome;
};

struct CriterionResult {
  XStatus status = XStatus::Empty;
  std::vector<TraceStep> trace;
};

CriterionResult criterion_status(const Stratum& s);

// Exact decision for type D: the solutions (N(a), N(b), N(c)) of the two linear
// equations form the line spanned by k, and 𝔛_β(F0) ≠ ∅ iff k/k3 is a vector of norms.
XStatus type_d_norm_vector_rule(const Stratum& s);

struct HenselCertificate {
  std::array<int, 2> minor_rows = {0, 1};
  std::array<int, 2> minor_cols = {0, 1};
  int64_t minor_valuation = 0;  // t
  int64_t residual_level = 0;   // m
  Point6 lifted;                // Newton limit, in lifted_field
  FieldPtr lifted_field;
  int64_t lifted_level = 0;     // min ν(Q_i(lifted))
};

struct Witness {
  Point6 point;
  int64_t residual_level = 0;
  std::optional<HenselCertificate> certificate;
};

struct SearchOptions {
  int depth = 12;
  int threads = 1;
  int64_t node_budget = 4'000'000;  // per batch
};

struct SearchResult {
  std::optional<Witness> witness;  // certified if any batch certified one
  bool exhausted = false;          // every branch pruned or resolved within the budget
  int64_t nodes = 0;
};

SearchResult brute_search(const QuadricPairSystem& sys, const SearchOptions& opt);

struct HenselOutcome {
  std::optional<HenselCertificate> certificate;
  int64_t best_m = 0, best_t = 0;  // reported on rejection
};

HenselOutcome hensel_check(const QuadricPairSystem& sys, const Witness& w);

// −d1·d2^{-1} ∈ Nr_{F[β2]/D}(F[β2]^×), evaluated by enumeration.
bool relative_norm_test(const Stratum& s);

std::string format_witness(const Witness& w);

}  // namespace u21
