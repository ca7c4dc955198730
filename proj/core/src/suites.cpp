#include "u21/suites.hpp"

#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "u21/io.hpp"
#include "u21/sampler.hpp"

namespace u21 {

uint64_t trial_seed(uint64_t seed, uint64_t index) {
  // splitmix64 of (seed, index)
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct Trial {
  int64_t passed = 0, skipped = 0, failed = 0;
  std::string message;
};

template <class Fn>
void parallel_for(int64_t n, int threads, Fn&& fn) {
  std::atomic<int64_t> next{0};
  auto work = [&] {
    for (int64_t i = next++; i < n; i = next++) fn(i);
  };
  const int t = std::max(1, threads);
  if (t == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

template <class Fn>
SuiteReport run_trials(const std::string& name, int64_t n, int threads, Fn&& fn) {
  std::vector<Trial> res(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int64_t i) {
    try {
      res[size_t(i)] = fn(i);
    } catch (const std::exception& e) {
      res[size_t(i)] = {0, 0, 1, std::string("exception: ") + e.what()};
    }
  });
  SuiteReport r;
  r.name = name;
  for (int64_t i = 0; i < n; ++i) {
    const Trial& t = res[size_t(i)];
    r.trials += t.passed + t.skipped + t.failed;
    r.passed += t.passed;
    r.skipped += t.skipped;
    r.failed += t.failed;
    if (t.failed && r.first_failure.empty())
      r.first_failure = "trial " + std::to_string(i) + ":\n" + t.message;
  }
  return r;
}

struct Rand {
  std::mt19937_64 g;
  explicit Rand(uint64_t s) : g(s) {}
  int64_t uniform(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(g);
  }
  bool coin(int n = 2) { return uniform(0, n - 1) == 0; }
  BaseElement unit(const Field& f) {
    int64_t a;
    do a = uniform(-200, 200);
    while (a % f.p() == 0);
    return f.from_int(a);
  }
};

constexpr int64_t kPrimes[3] = {3, 5, 7};

FieldPtr make_field(int64_t p, bool ram) {
  return Field::make({p, ram, smallest_nonresidue(p), 24});
}

std::string show_matrix(const Matrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += "; ";
    for (int j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + format_ext(m(i, j));
  }
  return s + "]";
}

const char* weyl_name(Weyl w) { return w == Weyl::id ? "id" : "w"; }

}  // namespace

// ---------------------------------------------------------------------------

SuiteReport suite_char_nontrivial(const SuiteOptions& opt) {
  return run_trials("char-nontrivial", opt.trials, opt.threads, [&](int64_t i) {
    Rand r(trial_seed(opt.seed, uint64_t(i)));
    const FieldPtr f = make_field(kPrimes[r.uniform(0, 2)], r.coin());
    const TypeTag types[3] = {TypeTag::B, TypeTag::C, TypeTag::D};
    const Stratum s = sample_stratum(r.g, f, types[r.uniform(0, 2)], 4);
    for (int attempt = 0; attempt < 20; ++attempt) {
      const Matrix g = random_group_element(r.g, *f, 5);
      const Side side = r.coin() ? Side::upper : Side::lower;
      CharCheck c;
      try {
        c = char_nontrivial(g, s, 0, side);
      } catch (const IndeterminateValuation&) {
        continue;
      }
      const int64_t cl = char_level((f->delta() * c.h).a());
      const bool at = char_nontrivial(g, s, cl, side).nontrivial;
      const bool above = char_nontrivial(g, s, cl + 1, side).nontrivial;
      const bool below = char_nontrivial(g, s, cl - 3, side).nontrivial;
      const bool ok = c.trace_identity && c.norm_identity && cl == -c.level && at && !above && below;
      if (ok) return Trial{1, 0, 0, ""};
      std::ostringstream m;
      m << emit_stratum_file(s) << "g = " << show_matrix(g)
        << "\nside = " << (side == Side::upper ? "upper" : "lower") << "\nh = " << format_ext(c.h)
        << "\ntrace = " << format_ext(c.trace) << "\ntrace_identity = " << c.trace_identity
        << " norm_identity = " << c.norm_identity << " level = " << c.level
        << " char_level = " << cl << " nontrivial(cl, cl+1, cl-3) = " << at << above << below
        << "\n";
      return Trial{0, 0, 1, m.str()};
    }
    return Trial{0, 1, 0, ""};
  });
}

SuiteReport suite_valuation_separation(const SuiteOptions& opt) {
  return run_trials("valuation-separation", opt.trials, opt.threads, [&](int64_t i) {
    Rand r(trial_seed(opt.seed, uint64_t(i)));
    const FieldPtr f = make_field(kPrimes[r.uniform(0, 2)], r.coin());
    Stratum s;
    bool found = false;
    for (int k = 0; k < 500 && !found; ++k) {
      s = sample_stratum(r.g, f, TypeTag::D, 6);
      found = criterion_status(s).status == XStatus::Empty;
    }
    if (!found) return Trial{0, 1, 0, ""};
    const WittModel model = witt_model(s);
    for (int attempt = 0; attempt < 20; ++attempt) {
      const Matrix g = random_group_element(r.g, *f, 5);
      const Vec v = model.basis * (g * unit_vector(*f, 3, 0));
      const ExtElement a = v[size_t(s.blocks[0][0])], b = v[size_t(s.blocks[1][0])],
                       c = v[size_t(s.blocks[2][0])];
      SeparationCheck sc;
      try {
        sc = valuation_separation(s, a, b, c);
      } catch (const HypothesisViolated&) {
        continue;
      }
      if (sc.holds) return Trial{1, 0, 0, ""};
      std::ostringstream m;
      m << emit_stratum_file(s) << "g = " << show_matrix(g) << "\na = " << format_ext(a)
        << "\nb = " << format_ext(b) << "\nc = " << format_ext(c) << "\nnu(h(v, beta v)) = "
        << sc.lhs << " min = " << sc.rhs << "\n";
      return Trial{0, 0, 1, m.str()};
    }
    return Trial{0, 1, 0, ""};
  });
}

SuiteReport suite_conjugation(const SuiteOptions& opt) {
  return run_trials("conjugation-identity", 6 * opt.trials, opt.threads, [&](int64_t i) {
    Rand r(trial_seed(opt.seed, uint64_t(i)));
    const FieldPtr f = make_field(kPrimes[i % 3], (i / 3) % 2 == 1);
    const int64_t nu = r.coin(6) ? kInf : r.uniform(0, 3);
    const auto [x, y] = random_unipotent_pair(r.g, *f, nu);
    const ExtElement a =
        r.coin(6) ? f->ext_zero() : f->delta() * ExtElement(r.unit(*f).shift(r.uniform(-3, 3)));
    const ConjugationCheck c = conjugation_identity(x, y, a);
    if (c.holds) return Trial{1, 0, 0, ""};
    std::ostringstream m;
    m << "p = " << f->p() << " ramified = " << f->ramified() << "\nx = " << format_ext(x)
      << "\ny = " << format_ext(y) << "\na = " << format_ext(a)
      << "\nproduct = " << show_matrix(c.product) << "\nexpected = " << show_matrix(c.expected)
      << "\n";
    return Trial{0, 0, 1, m.str()};
  });
}

namespace {

struct ClaimCase {
  TypeTag type;
  ShallowShape shape;
  int64_t p, m1, r1, m2, r2;
  int variant;  // type C: (β, 0), (0, β), (β, 2β)
};

std::vector<ClaimCase> claim_cases() {
  std::vector<ClaimCase> out;
  for (int64_t p : kPrimes) {
    for (int64_t m = 0; m <= 8; ++m)
      for (int64_t r = 0; r <= 1; ++r) {
        if (m == 0 && r == 0) continue;
        for (int v = 0; v < 3; ++v) {
          out.push_back({TypeTag::C, ShallowShape::unram_oo, p, m, r, 0, 0, v});
          out.push_back({TypeTag::C, ShallowShape::unram_op, p, m, r, 0, 0, v});
          if (r == 1) out.push_back({TypeTag::C, ShallowShape::ramified, p, m, r, 0, 0, v});
        }
      }
    for (int64_t m1 = 0; m1 <= 8; ++m1)
      for (int64_t m2 = 0; m2 <= 8; ++m2) {
        for (int64_t r1 = 0; r1 <= 1; ++r1) {
          // Empty needs ν_F(β1) - ν_F(β2) odd for unit λ and even for λ2 = λ3 = ϖ.
          const int64_t r2 = 1 - r1;
          if (m2 + r2 > 0 && 2 * m1 + r1 > 2 * m2 + r2)
            out.push_back({TypeTag::D, ShallowShape::unram_oo, p, m1, r1, m2, r2, 0});
          if (m2 + r1 > 0 && m1 >= m2)
            out.push_back({TypeTag::D, ShallowShape::unram_op, p, m1, r1, m2, r1, 0});
        }
        if (m1 >= m2) out.push_back({TypeTag::D, ShallowShape::ramified, p, m1, 1, m2, 1, 0});
      }
  }
  return out;
}

// Skew scalar δ·u with ν_F = v.
ExtElement skew_of_level(const Field& f, int64_t v, const BaseElement& u) {
  if (!f.ramified()) return f.delta() * ExtElement(u.shift(v));
  // ν_F(δ·ϖ0^k) = 1 + 2k.
  return f.delta() * ExtElement(u.shift((v - 1) / 2));
}

std::optional<Stratum> claim_stratum(const ClaimCase& c, Rand& r) {
  const FieldPtr f = make_field(c.p, c.shape == ShallowShape::ramified);
  const Field& F = *f;
  if (c.type == TypeTag::C) {
    const int64_t v = -(2 * c.m1 + c.r1);
    const ExtElement b = skew_of_level(F, v, r.unit(F));
    ExtElement b1 = b, b2 = F.ext_zero();
    if (c.variant == 1) std::swap(b1, b2);
    if (c.variant == 2) b2 = b * F.ext_int(2);
    const std::string key = c.shape == ShallowShape::unram_oo ? "L1" : "L2";
    return make_type_c_witt(f, b1, b2, key);
  }
  const BaseElement one = F.one(), pi = F.from_int(c.p);
  std::vector<BaseElement> l = {one, one, one};
  if (c.shape == ShallowShape::unram_op) l = {one, pi, pi};
  if (c.shape == ShallowShape::ramified) l = {one, one, -one};
  const ExtElement b1 = skew_of_level(F, -(2 * c.m1 + c.r1), r.unit(F));
  for (int attempt = 0; attempt < 64; ++attempt) {
    const ExtElement b2 = skew_of_level(F, -(2 * c.m2 + c.r2), r.unit(F));
    Stratum s = make_type_d(f, l, {b1, b2, F.ext_zero()});
    if (!validate(s).empty() || !w1_isotropic(s)) continue;
    if (criterion_status(s).status == XStatus::Empty) return s;
  }
  return std::nullopt;
}

}  // namespace

SuiteReport suite_claims(const SuiteOptions& opt) {
  const std::vector<ClaimCase> cases = claim_cases();
  return run_trials("claim-inequalities", int64_t(cases.size()), opt.threads, [&](int64_t i) {
    const ClaimCase& c = cases[size_t(i)];
    Rand r(trial_seed(opt.seed, uint64_t(i)));
    Trial t;
    const auto s = claim_stratum(c, r);
    if (!s || !validate(*s).empty()) {
      t.failed = 1;
      t.message = "could not build a stratum for the case m1=" + std::to_string(c.m1) +
                  " r1=" + std::to_string(c.r1) + " m2=" + std::to_string(c.m2) +
                  " r2=" + std::to_string(c.r2) + " shape=" + to_string(c.shape) + "\n";
      return t;
    }
    const ShallowParams sp = shallow_params(*s);
    if (sp.shape != c.shape || sp.m1 != c.m1 || sp.r1 != c.r1 ||
        (c.type == TypeTag::D && (sp.m2 != c.m2 || sp.r2 != c.r2))) {
      t.failed = 1;
      t.message = emit_stratum_file(*s) + "stratum invariants differ from the case table\n";
      return t;
    }
    for (Weyl w : {Weyl::id, Weyl::w})
      for (int64_t nu = 0; nu <= 10; ++nu) {
        const auto [x, y] = random_unipotent_pair(r.g, s->f(), nu);
        ClaimCheck cc;
        try {
          cc = claim_inequalities(*s, w, x, y);
        } catch (const HypothesisViolated&) {
          ++t.skipped;
          continue;
        }
        if (cc.holds) {
          ++t.passed;
          continue;
        }
        ++t.failed;
        if (t.message.empty()) {
          std::ostringstream m;
          m << emit_stratum_file(*s) << "shape = " << to_string(c.shape) << " m1 = " << c.m1
            << " r1 = " << c.r1 << " m2 = " << c.m2 << " r2 = " << c.r2 << "\nw = " << weyl_name(w)
            << " nu_F(x) = " << nu << "\nx = " << format_ext(x) << "\ny = " << format_ext(y)
            << "\nlhs = " << cc.lhs << " d = " << cc.d << " d_stable = " << cc.d_stable << "\n";
          t.message = m.str();
        }
      }
    return t;
  });
}

std::vector<SuiteReport> verify_lemmas(const SuiteOptions& opt) {
  SuiteOptions conj = opt;
  conj.trials = std::max<int64_t>(1, opt.trials / 2);
  return {suite_char_nontrivial(opt), suite_valuation_separation(opt), suite_conjugation(conj),
          suite_claims(opt)};
}

// ---------------------------------------------------------------------------
// Fuzzing the criteria against the search.

namespace {

struct FuzzTrial {
  std::string key;
  bool agree = false, soft = false, hard = false, escalated = false;
  std::string message;
};

bool certified(const SearchResult& r) { return r.witness && r.witness->certificate; }

}  // namespace

FuzzOutcome run_fuzz(const FuzzOptions& opt) {
  if (opt.trials < 1) throw InvalidConfig("trials must be at least 1");
  if (opt.depth < 4) throw InvalidConfig("depth must be at least 4");
  std::vector<FuzzTrial> res(static_cast<size_t>(opt.trials));
  parallel_for(opt.trials, opt.threads, [&](int64_t i) {
    FuzzTrial& t = res[size_t(i)];
    Rand r(trial_seed(opt.seed, uint64_t(i)));
    const TypeTag types[3] = {TypeTag::B, TypeTag::C, TypeTag::D};
    SampleOptions so;
    so.type = types[r.uniform(0, 2)];
    so.p = kPrimes[r.uniform(0, 2)];
    so.ramified = r.coin();
    so.max_valuation = opt.max_valuation;
    Stratum s;
    try {
      s = sample_stratum(r.g, so);
      const CriterionResult crit = criterion_status(s);
      t.key = std::string(to_string(so.type)) + " " + crit.trace.back().lemma + " " +
              to_string(crit.status);
      const QuadricPairSystem sys = assemble_system(s);
      SearchResult sr = brute_search(sys, {opt.depth, 1, SearchOptions{}.node_budget});
      if (crit.status == XStatus::NonEmpty && !certified(sr) && opt.escalate_depth > opt.depth) {
        t.escalated = true;
        sr = brute_search(sys, {opt.escalate_depth, 1, SearchOptions{}.node_budget});
      }
      if (crit.status == XStatus::Empty && certified(sr)) {
        t.hard = true;
        t.message = emit_stratum_file(s) + "criterion: Empty\nwitness:\n" + format_witness(*sr.witness);
      } else if (crit.status == XStatus::NonEmpty && !certified(sr)) {
        t.soft = true;
        t.message = emit_stratum_file(s) + "criterion: NonEmpty, no certified witness\n";
      } else {
        t.agree = true;
      }
    } catch (const std::exception& e) {
      t.soft = true;
      t.key = "error";
      t.message = emit_stratum_file(s) + "exception: " + e.what() + "\n";
    }
  });
  FuzzOutcome o;
  o.trials = opt.trials;
  for (int64_t i = 0; i < opt.trials; ++i) {
    const FuzzTrial& t = res[size_t(i)];
    o.agreements += t.agree;
    o.soft_failures += t.soft;
    o.hard_failures += t.hard;
    o.escalations += t.escalated;
    ++o.histogram[t.key];
    if (t.hard && o.first_hard.empty()) o.first_hard = "trial " + std::to_string(i) + ":\n" + t.message;
    if (t.soft && o.first_soft.empty()) o.first_soft = "trial " + std::to_string(i) + ":\n" + t.message;
  }
  return o;
}

std::string format_fuzz(const FuzzOutcome& o) {
  std::ostringstream s;
  s << "trials: " << o.trials << "\n"
    << "agreements: " << o.agreements << "\n"
    << "soft_failures: " << o.soft_failures << "\n"
    << "hard_failures: " << o.hard_failures << "\n"
    << "escalations: " << o.escalations << "\n"
    << "histogram:\n";
  for (const auto& [k, v] : o.histogram) s << "  " << k << ": " << v << "\n";
  if (!o.first_hard.empty()) s << "first hard failure, " << o.first_hard;
  if (!o.first_soft.empty()) s << "first soft failure, " << o.first_soft;
  return s.str();
}

}  // namespace u21
