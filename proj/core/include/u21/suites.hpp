#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "u21/classifier.hpp"

namespace u21 {

struct SuiteOptions {
  uint64_t seed = 1;
  int64_t trials = 200;
  int threads = 1;
};

// Counts are order-independent; first_failure is the failing trial of least index.
struct SuiteReport {
  std::string name;
  int64_t trials = 0, passed = 0, skipped = 0, failed = 0;
  std::string first_failure;
  bool ok() const { return failed == 0 && passed > 0; }
};

// Trace identities and the U_der(r) threshold against char_level, on random
// strata of types B/C/D and random group elements.
SuiteReport suite_char_nontrivial(const SuiteOptions& opt);
// Min formula on Empty type D strata with v = g·e1.
SuiteReport suite_valuation_separation(const SuiteOptions& opt);
// opt.trials triples per (p, ramification), p ∈ {3, 5, 7}.
SuiteReport suite_conjugation(const SuiteOptions& opt);
// Exhaustive over the case tables: m, m1, m2 ∈ [0, 8], ν_F(x) ∈ [0, 10], both w,
// p ∈ {3, 5, 7}. Type C instances with d(𝔵, w, x) = d(𝔵, w) count as skipped.
SuiteReport suite_claims(const SuiteOptions& opt);

std::vector<SuiteReport> verify_lemmas(const SuiteOptions& opt);

struct FuzzOptions {
  uint64_t seed = 1;
  int64_t trials = 100;
  int threads = 1;
  int depth = 12;
  int escalate_depth = 16;
  int max_valuation = 6;
};

struct FuzzOutcome {
  int64_t trials = 0, agreements = 0;
  int64_t soft_failures = 0;  // NonEmpty, no certified witness after escalation
  int64_t hard_failures = 0;  // Empty, certified witness
  int64_t escalations = 0;
  std::map<std::string, int64_t> histogram;  // deciding rule / status
  std::string first_hard, first_soft;
};

// Types B/C/D, p ∈ {3, 5, 7} and both ramifications drawn uniformly per trial.
FuzzOutcome run_fuzz(const FuzzOptions& opt);
std::string format_fuzz(const FuzzOutcome& o);

// Seed of trial i, independent of scheduling.
uint64_t trial_seed(uint64_t seed, uint64_t index);

}  // namespace u21
