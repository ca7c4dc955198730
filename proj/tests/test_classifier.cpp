#include "doctest.h"
#include "support.hpp"
#include "u21/classifier.hpp"
#include "u21/sampler.hpp"
#include "u21/suites.hpp"

using namespace u21;
using testing::field;
using testing::Rng;

namespace {

ExtElement dpow(const Field& f, int64_t u, int64_t k) {
  return f.delta() * f.from_int(u).shift(k);
}

// δ·u·ϖ0^k in the ramified case has ν_F = 2k + 1.
ExtElement dpow0(const Field& f, int64_t u, int64_t k) {
  return f.delta() * (f.from_int(u) * f.pi0_pow(k));
}

Matrix antidiag(const Field& f, const ExtElement& y, const ExtElement& z) {
  Matrix m(f, 2, 2);
  m(0, 1) = y;
  m(1, 0) = z;
  return m;
}

Stratum d_even(const FieldPtr& f) {
  const BaseElement one = f->one();
  return make_type_d(f, {one, one, one}, {dpow(*f, 1, -3), dpow(*f, 2, -1), f->ext_zero()});
}

// Ramified type D with λ = (1, 1, -1), β3 = 0, q1 = 4m1 + 2, q2 = 4m2 + 2 and
// 𝔛_β(F0) empty.
Stratum ramified_d_empty(const FieldPtr& f, int64_t m1, int64_t m2) {
  const BaseElement one = f->one();
  for (int64_t u = 1; u < 4 * f->p(); ++u) {
    if (u % f->p() == 0) continue;
    Stratum s = make_type_d(f, {one, one, -one},
                            {dpow0(*f, 1, -(m1 + 1)), dpow0(*f, u, -(m2 + 1)), f->ext_zero()});
    if (validate(s).empty() && w1_isotropic(s) && criterion_status(s).status == XStatus::Empty)
      return s;
  }
  FAIL("no empty ramified type D stratum");
  return d_even(f);
}

bool contains(const std::vector<TraceStep>& path, const std::string& id) {
  for (const auto& s : path)
    if (s.lemma == id) return true;
  return false;
}

}  // namespace

TEST_CASE("depth_zero_rule") {
  using L = DepthZeroLattice;
  CHECK(depth_zero_rule({true, L::L2, true}) == Verdict::NonGeneric);
  CHECK(depth_zero_rule({true, L::L1, true}) == Verdict::Generic);
  CHECK(depth_zero_rule({false, L::L1, true}) == Verdict::Generic);
  CHECK(depth_zero_rule({false, L::L2, true}) == Verdict::NonGeneric);
  for (bool ram : {false, true})
    for (L l : {L::L1, L::L2}) CHECK(depth_zero_rule({ram, l, false}) == Verdict::NonGeneric);

  const auto r = classify_genericity(make_depth_zero(field(3, true), "L1", true));
  CHECK(r.verdict == Verdict::Generic);
  CHECK(r.case_path.at(0).lemma == "depth-zero");
}

TEST_CASE("classify_genericity on the decision table") {
  auto f = field(5, false);
  Matrix beta(*f, 3, 3);
  beta(0, 2) = dpow(*f, 1, -1);
  beta(1, 0) = f->ext_one();
  beta(2, 1) = -f->ext_one();
  const auto a = classify_genericity(make_type_a(f, {}, beta));
  CHECK(a.verdict == Verdict::Generic);
  CHECK(contains(a.case_path, "theorem-typeA"));

  const auto b = classify_genericity(
      make_type_b_witt(f, dpow(*f, 1, -1), antidiag(*f, dpow(*f, 1, -1), dpow(*f, 1, 0))));
  CHECK(b.verdict == Verdict::Generic);
  CHECK(b.xbeta == XStatus::NonEmpty);
  CHECK(contains(b.case_path, "typeB-unram-iso-q1>q2"));

  const auto c = classify_genericity(make_type_c_witt(f, dpow(*f, 1, -3), f->ext_zero(), "L2"));
  CHECK(c.verdict == Verdict::NonGeneric);
  CHECK(c.xbeta == XStatus::NonEmpty);
  CHECK(contains(c.case_path, "theorem-typeC-iso"));

  const BaseElement one = f->one(), five = f->from_int(5);
  const auto ca = classify_genericity(make_type_c(f, {five, one, five}, dpow(*f, 1, -3), f->ext_zero()));
  CHECK(ca.verdict == Verdict::NonGeneric);
  CHECK(ca.xbeta == XStatus::Empty);

  const auto d = classify_genericity(d_even(f));
  CHECK(d.verdict == Verdict::Generic);
  CHECK(d.case_path.at(0).lemma == "typeD-unram-uniform");
  CHECK(d.case_path.back().lemma == "theorem-typeD");
}

TEST_CASE("classify_genericity attaches only certified witnesses") {
  auto f = field(5, false);
  ClassifyOptions opt;
  opt.search_witness = true;
  const auto r = classify_genericity(d_even(f), opt);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->certificate.has_value());
}

TEST_CASE("invalid strata are rejected") {
  auto f = field(5, false);
  const BaseElement one = f->one();
  const auto s = make_type_d(f, {one, one, one},
                             {ExtElement(f->one().shift(-3)), dpow(*f, 2, -1), f->ext_zero()});
  CHECK_THROWS_AS(classify_genericity(s), UnsupportedConfiguration);
}

TEST_CASE("decision consistency with the stratum-level table") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    SampleOptions so;
    so.type = std::array{TypeTag::B, TypeTag::C, TypeTag::D}[size_t(i % 3)];
    so.p = std::array<int64_t, 3>{3, 5, 7}[size_t((i / 3) % 3)];
    so.ramified = (i / 9) % 2 == 1;
    const Stratum s = sample_stratum(rng, so);
    const auto r = classify_genericity(s);
    const XStatus crit = criterion_status(s).status;
    CHECK(r.xbeta == crit);
    Verdict expect = Verdict::NonGeneric;
    if (s.type == TypeTag::B) {
      const auto q = q_invariants(s).q;
      const bool iso = v2_isotropic(s);
      if ((iso && q[0] > q[1]) || (!iso && q[1] > q[0])) expect = Verdict::Generic;
    } else if (s.type == TypeTag::D && crit == XStatus::NonEmpty) {
      expect = Verdict::Generic;
    }
    CHECK(r.verdict == expect);
  }
}

TEST_CASE("type C with (V2, h) isotropic: non-empty and non-generic") {
  std::mt19937_64 rng(5);
  int seen = 0;
  for (int i = 0; seen < 50 && i < 1000; ++i) {
    const Stratum s = sample_stratum(rng, field(std::array<int64_t, 3>{3, 5, 7}[size_t(i % 3)], i % 2),
                                     TypeTag::C);
    if (!v2_isotropic(s)) continue;
    ++seen;
    const auto r = classify_genericity(s);
    CHECK(r.xbeta == XStatus::NonEmpty);
    CHECK(r.verdict == Verdict::NonGeneric);
  }
  CHECK(seen == 50);
}

TEST_CASE("char_nontrivial: threshold, monotonicity and the trace identities") {
  auto f = field(5, false);
  const Stratum s = d_even(f);
  const Matrix id = Matrix::identity(*f, 3);
  const CharCheck c = char_nontrivial(id, s, 0, Side::upper);
  CHECK(c.trace_identity);
  CHECK(c.norm_identity);
  CHECK(char_nontrivial(id, s, -c.level, Side::upper).nontrivial);
  CHECK_FALSE(char_nontrivial(id, s, -c.level + 1, Side::upper).nontrivial);
  CHECK_FALSE(char_nontrivial(id, s, 1000, Side::upper).nontrivial);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Matrix g = random_group_element(rng, *f, 4);
    for (Side side : {Side::upper, Side::lower}) {
      CharCheck k;
      try {
        k = char_nontrivial(g, s, 0, side);
      } catch (const IndeterminateValuation&) {
        continue;
      }
      bool prev = true;
      for (int64_t r = -k.level - 4; r <= -k.level + 4; ++r) {
        const bool now = char_nontrivial(g, s, r, side).nontrivial;
        CHECK((prev || !now));
        prev = now;
      }
    }
  }
  Matrix bad = id;
  bad(0, 0) = f->ext_int(2);
  CHECK_THROWS_AS(char_nontrivial(bad, s, 0, Side::upper), ConstraintViolated);
}

TEST_CASE("char_nontrivial on a type D stratum with ν_F0(δβ1λ1) = -3") {
  auto f = field(5, false);
  const BaseElement one = f->one(), five = f->from_int(5);
  // W1 anisotropic: e1 has a v1 component and h(e1, βe1) has the valuation of δβ1λ1.
  const Stratum s = make_type_d(f, {five, one, five}, {dpow(*f, 1, -4), dpow(*f, 2, -1), f->ext_zero()});
  REQUIRE(validate(s).empty());
  const Matrix id = Matrix::identity(*f, 3);
  const CharCheck c = char_nontrivial(id, s, 3, Side::upper);
  CHECK(c.level == -3);
  CHECK(c.nontrivial);
  CHECK_FALSE(char_nontrivial(id, s, 4, Side::upper).nontrivial);
}

TEST_CASE("valuation_separation hypotheses") {
  auto f = field(5, false);
  const BaseElement one = f->one(), five = f->from_int(5);
  const Stratum empty = make_type_d(f, {one, five, five * f->from_int(2)},
                                    {dpow(*f, 1, -3), dpow(*f, 2, -1), f->ext_zero()});
  REQUIRE(criterion_status(empty).status == XStatus::Empty);
  CHECK_THROWS_AS(valuation_separation(empty, f->ext_zero(), f->ext_one(), f->ext_one()),
                  HypothesisViolated);
  CHECK_THROWS_AS(valuation_separation(d_even(f), f->ext_one(), f->ext_one(), f->ext_zero()),
                  HypothesisViolated);
  // Not isotropic.
  CHECK_THROWS_AS(valuation_separation(empty, f->ext_one(), f->ext_zero(), f->ext_zero()),
                  HypothesisViolated);
}

TEST_CASE("shallowness examples") {
  auto f = field(5, false);
  const Stratum op = make_type_c_witt(f, dpow(*f, 1, -3), f->ext_zero(), "L2");
  REQUIRE(shallow_params(op).shape == ShallowShape::unram_op);
  CHECK(stable_shallowness(shallow_params(op), Weyl::w) == 2);
  CHECK(shallowness(op, Weyl::w, f->ext_zero()) == 2);

  auto fr = field(5, true);
  const Stratum ram = make_type_c_witt(fr, dpow0(*fr, 1, -3), fr->ext_zero(), "L2");
  REQUIRE(shallow_params(ram).shape == ShallowShape::ramified);
  CHECK(stable_shallowness(shallow_params(ram), Weyl::w) == 1);

  for (int64_t m1 = 0; m1 <= 8; ++m1)
    for (int64_t m2 = 0; m2 <= 8; ++m2) {
      const ShallowParams p{TypeTag::D, ShallowShape::unram_oo, m1, 0, m2, 1};
      CHECK(shallowness(p, Weyl::id, 0) == std::max(m2 + 1, m1 + 1));
    }
}

TEST_CASE("shallowness is at least d(𝔵, w) and stabilises at the threshold") {
  for (TypeTag t : {TypeTag::C, TypeTag::D})
    for (ShallowShape sh : {ShallowShape::unram_oo, ShallowShape::unram_op, ShallowShape::ramified})
      for (int64_t m1 = 0; m1 <= 8; ++m1)
        for (int64_t r1 = 0; r1 <= 1; ++r1)
          for (int64_t m2 = 0; m2 <= 8; ++m2)
            for (Weyl w : {Weyl::id, Weyl::w}) {
              const ShallowParams p{t, sh, m1, r1, m2, 1 - r1};
              const int64_t d = stable_shallowness(p, w), th = shallowness_threshold(p, w);
              for (int64_t nu = 0; nu <= th + 12; ++nu) {
                CHECK(shallowness(p, w, nu) >= d);
                CHECK((shallowness(p, w, nu) == d) == (nu >= th));
              }
            }
}

TEST_CASE("claim inequalities: documented instances") {
  std::mt19937_64 rng(9);
  auto f = field(5, false);
  // m = 3, r = 1: ν_F(β) = -7.
  const Stratum c = make_type_c_witt(f, dpow(*f, 1, -7), f->ext_zero(), "L1");
  const ShallowParams pc = shallow_params(c);
  REQUIRE(pc.m1 == 3);
  REQUIRE(pc.r1 == 1);
  const auto [x, y] = random_unipotent_pair(rng, *f, 0);
  const ClaimCheck cc = claim_inequalities(c, Weyl::id, x, y);
  CHECK(cc.d > cc.d_stable);
  CHECK(cc.holds);

  auto fr = field(5, true);
  const Stratum d = ramified_d_empty(fr, 5, 2);
  const ShallowParams pd = shallow_params(d);
  REQUIRE(pd.m1 == 5);
  REQUIRE(pd.m2 == 2);
  // ν_{F/F0}(x) = 1.
  for (Weyl w : {Weyl::id, Weyl::w}) {
    const auto [xr, yr] = random_unipotent_pair(rng, *fr, 2);
    CHECK(claim_inequalities(d, w, xr, yr).holds);
  }

  // d(𝔵, w, x) = d(𝔵, w) is outside the lemma.
  const auto [x9, y9] = random_unipotent_pair(rng, *f, 9);
  CHECK_THROWS_AS(claim_inequalities(c, Weyl::id, x9, y9), HypothesisViolated);
  // Constraint violated.
  CHECK_THROWS_AS(claim_inequalities(c, Weyl::id, f->ext_one(), f->ext_zero()), HypothesisViolated);
}

TEST_CASE("conjugation identity") {
  std::mt19937_64 rng(4);
  for (int64_t p : {3, 5, 7})
    for (bool ram : {false, true}) {
      auto f = field(p, ram);
      const ExtElement a = dpow(*f, 3, -1);
      const ConjugationCheck x0 = conjugation_identity(f->ext_zero(), f->ext_zero(), a);
      CHECK(x0.holds);
      CHECK(x0.product == make_unipotent(f->ext_zero(), a, Side::upper));
      const auto [x, y] = random_unipotent_pair(rng, *f, 1);
      const ConjugationCheck a0 = conjugation_identity(x, y, f->ext_zero());
      CHECK(a0.holds);
      CHECK(a0.product == Matrix::identity(*f, 3));
      for (int i = 0; i < 10; ++i) {
        const auto [xi, yi] = random_unipotent_pair(rng, *f, i % 4);
        CHECK(conjugation_identity(xi, yi, dpow(*f, 1 + i, i - 5)).holds);
      }
      CHECK_THROWS_AS(conjugation_identity(x, y, f->ext_one()), ConstraintViolated);
    }
}

TEST_CASE("lemma suites pass on small runs and ignore the thread count") {
  SuiteOptions o;
  o.trials = 20;
  for (const auto& r : verify_lemmas(o)) {
    INFO(r.name << "\n" << r.first_failure);
    CHECK(r.ok());
  }
  SuiteOptions o4 = o;
  o4.threads = 4;
  const auto a = suite_char_nontrivial(o), b = suite_char_nontrivial(o4);
  CHECK(a.passed == b.passed);
  CHECK(a.skipped == b.skipped);
}

TEST_CASE("fuzz: configuration checks and determinism") {
  FuzzOptions o;
  o.trials = 0;
  CHECK_THROWS_AS(run_fuzz(o), InvalidConfig);
  o.trials = 30;
  o.depth = 3;
  CHECK_THROWS_AS(run_fuzz(o), InvalidConfig);
  o.depth = 12;
  const FuzzOutcome a = run_fuzz(o);
  o.threads = 3;
  const FuzzOutcome b = run_fuzz(o);
  CHECK(a.hard_failures == 0);
  CHECK(format_fuzz(a) == format_fuzz(b));
}
