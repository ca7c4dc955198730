#include "doctest.h"
#include "support.hpp"
#include "u21/xbeta.hpp"

using namespace u21;
using testing::field;
using testing::Rng;

namespace {

ExtElement dpow(const Field& f, int64_t u, int64_t k) {
  return f.delta() * f.from_int(u).shift(k);
}

Matrix antidiag(const Field& f, const ExtElement& y, const ExtElement& z) {
  Matrix m(f, 2, 2);
  m(0, 1) = y;
  m(1, 0) = z;
  return m;
}

Stratum even_d(const FieldPtr& f) {
  const BaseElement one = f->one();
  return make_type_d(f, {one, one, one}, {dpow(*f, 1, -3), dpow(*f, 2, -1), f->ext_zero()});
}

// Unramified isotropic type B with q1 = 4 < q2 = 6.
Stratum b_empty(const FieldPtr& f) {
  return make_type_b_witt(f, dpow(*f, 1, -1), antidiag(*f, dpow(*f, 1, -2), dpow(*f, 1, -1)));
}

// Unramified isotropic type B with q1 = 8 > q2 = 6.
Stratum b_nonempty(const FieldPtr& f) {
  return make_type_b_witt(f, dpow(*f, 1, -2), antidiag(*f, dpow(*f, 1, -2), dpow(*f, 1, -1)));
}

Vec random_vec(Rng& r, const Field& f) {
  return {r.ext_integral(f), r.ext_integral(f), r.ext_integral(f)};
}

bool zero_mod(const BaseElement& x, int64_t k) { return x.is_zero() || x.valuation() >= k; }

}  // namespace

TEST_CASE("assemble_system reproduces h(v, v) and h(v, βv)/δ") {
  Rng rng(7);
  for (int64_t p : {3, 5, 7})
    for (bool ram : {false, true}) {
      auto f = field(p, ram);
      const Stratum s = ram ? make_type_d(f, {f->one(), f->one(), f->one()},
                                          {dpow(*f, 1, -3), dpow(*f, 2, -1), f->ext_zero()})
                            : b_empty(f);
      const auto sys = assemble_system(s);
      for (int i = 0; i < 100; ++i) {
        const Vec v = random_vec(rng, *f);
        const Point6 z = to_point(v);
        CHECK(ExtElement(sys.q1.eval(z)) == h_eval(s.space, v, v));
        CHECK(ExtElement(sys.q2.eval(z)) * f->delta() == h_eval(s.space, v, s.beta * v));
      }
    }
}

TEST_CASE("type D diagonal system is Σ N_i and -Σ (β_i/δ) N_i") {
  auto f = field(5, false);
  const Stratum s = even_d(f);
  const auto sys = assemble_system(s);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec v = random_vec(rng, *f);
    BaseElement n1 = f->zero(), n2 = f->zero();
    for (int k = 0; k < 3; ++k) {
      const BaseElement N = v[size_t(k)].norm();
      n1 = n1 + N;
      n2 = n2 - s.scalar(k).b() * N;  // σ(β_i) = -β_i
    }
    CHECK(sys.q1.eval(to_point(v)) == n1);
    CHECK(sys.q2.eval(to_point(v)) == n2);
  }
}

TEST_CASE("β = 0 gives Q2 identically zero") {
  auto f = field(5, false);
  const auto sys = assemble_system(make_depth_zero(f, "L1", true));
  CHECK(sys.q2.zero);
  CHECK_FALSE(sys.q1.zero);
}

TEST_CASE("pencil members vanish on their blocks") {
  auto f = field(7, true);
  const Stratum s = make_type_c(f, {f->one(), f->one(), f->one()}, dpow(*f, 1, -2),
                                dpow(*f, 3, -1));
  const auto sys = assemble_system(s);
  REQUIRE(sys.pencil.size() == 2);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    Vec on1 = {rng.ext_integral(*f), f->ext_zero(), f->ext_zero()};
    Vec on2 = {f->ext_zero(), rng.ext_integral(*f), rng.ext_integral(*f)};
    CHECK(sys.pencil[0].eval(to_point(on1)).is_zero());
    CHECK(sys.pencil[1].eval(to_point(on2)).is_zero());
  }
}

TEST_CASE("criterion_status on the documented examples") {
  auto f = field(5, false);
  const auto d = criterion_status(even_d(f));
  CHECK(d.status == XStatus::NonEmpty);
  CHECK(d.trace.at(0).lemma == "typeD-unram-uniform");

  // ν(λ2) = ν(λ3) = 1 with an even difference.
  const BaseElement one = f->one(), five = f->from_int(5);
  const auto d2 = make_type_d(f, {one, five, five * f->from_int(2)},
                              {dpow(*f, 1, -3), dpow(*f, 2, -1), f->ext_zero()});
  REQUIRE(validate(d2).empty());
  const auto r2 = criterion_status(d2);
  CHECK(r2.status == XStatus::Empty);
  CHECK(r2.trace.at(0).lemma == "typeD-unram-nonuniform");

  const auto b = criterion_status(b_empty(f));
  CHECK(b.status == XStatus::Empty);
  CHECK(b.trace.at(0).lemma == "typeB-unram-iso-q2>q1");
  CHECK(criterion_status(b_nonempty(f)).status == XStatus::NonEmpty);
}

TEST_CASE("type D criteria agree with the norm-vector rule") {
  Rng rng(2024);
  int checked = 0;
  for (int64_t p : {3, 5, 7})
    for (bool ram : {false, true}) {
      auto f = field(p, ram);
      for (int i = 0; i < 400; ++i) {
        std::vector<BaseElement> l;
        for (int k = 0; k < 3; ++k) {
          BaseElement u = rng.unit(*f);
          if (rng.uniform(0, 2) == 0) u = u.shift(1);
          l.push_back(u);
        }
        std::vector<ExtElement> b;
        for (int k = 0; k < 3; ++k) b.push_back(f->delta() * rng.unit(*f).shift(rng.uniform(-6, 0)));
        if (rng.uniform(0, 3) == 0) b[2] = f->ext_zero();
        const Stratum s = make_type_d(f, l, b);
        if (!validate(s).empty()) continue;
        ++checked;
        CHECK(criterion_status(s).status == type_d_norm_vector_rule(s));
      }
    }
  CHECK(checked > 100);
}

TEST_CASE("brute_search: isotropic binary part with β = 0") {
  auto f = field(5, false);
  Stratum s = make_depth_zero(f, "L1", true);
  s.space = HermitianSpace::orthogonal({f->one(), -f->one(), f->one()});
  const auto sys = assemble_system(s);
  const auto r = brute_search(sys, {8, 1, 100000});
  REQUIRE(r.witness);
  REQUIRE(r.witness->certificate);
  CHECK(r.witness->certificate->minor_valuation == 0);
  const Vec v = from_point(*f, r.witness->point);
  CHECK(zero_mod(h_eval(s.space, v, v).a(), 8));
}

TEST_CASE("brute_search finds a certified witness for the even type D instance") {
  auto f = field(5, false);
  const auto sys = assemble_system(even_d(f));
  const auto r = brute_search(sys, {8, 1, 1'000'000});
  REQUIRE(r.witness);
  REQUIRE(r.witness->certificate);
  const auto& c = *r.witness->certificate;
  CHECK(c.residual_level > 2 * c.minor_valuation);
  CHECK(c.lifted_level >= 24);
  // Re-verify the lifted point in its own field.
  CHECK(zero_mod(sys.q1.raw(c.lifted), 24));
  CHECK(zero_mod(sys.q2.raw(c.lifted), 24));
}

TEST_CASE("brute_search exhausts the empty type B instance") {
  auto f = field(5, false);
  const auto r = brute_search(assemble_system(b_empty(f)), {8, 1, 2'000'000});
  CHECK(r.exhausted);
  CHECK_FALSE(r.witness);
}

TEST_CASE("brute_search is independent of the thread count") {
  auto f = field(3, true);
  const BaseElement one = f->one();
  const auto s = make_type_d(f, {one, one, -one},
                             {dpow(*f, 1, -3), dpow(*f, 1, -1), f->ext_zero()});
  REQUIRE(validate(s).empty());
  const auto sys = assemble_system(s);
  const auto a = brute_search(sys, {10, 1, 1'000'000});
  const auto b = brute_search(sys, {10, 4, 1'000'000});
  REQUIRE(a.witness.has_value() == b.witness.has_value());
  if (a.witness)
    for (size_t i = 0; i < kVars; ++i) CHECK(a.witness->point[i] == b.witness->point[i]);
}

TEST_CASE("brute_search rejects shallow and overlong depths") {
  auto f = field(7, false);
  const auto sys = assemble_system(even_d(f));
  CHECK_THROWS_AS(brute_search(sys, {3, 1, 10}), InvalidConfig);
  CHECK_THROWS_AS(brute_search(sys, {40, 1, 10}), InvalidConfig);
}

TEST_CASE("hensel_check threshold") {
  auto f = field(5, false);
  const auto sys = assemble_system(even_d(f));
  // v = (5, 5, 0): Q1 = 50, a gradient minor of valuation 1 at best.
  Witness w;
  const Vec v = {f->ext_int(5), f->ext_int(5), f->ext_zero()};
  w.point = to_point(v);
  const auto h = hensel_check(sys, w);
  CHECK_FALSE(h.certificate);
  CHECK(h.best_m <= 2 * h.best_t);
}

TEST_CASE("relative_norm_test agrees with the type B rule") {
  auto f = field(5, false);
  CHECK(relative_norm_test(b_nonempty(f)));
  CHECK_FALSE(relative_norm_test(b_empty(f)));
  CHECK_THROWS_AS(relative_norm_test(even_d(f)), UnsupportedConfiguration);
}

TEST_CASE("criterion_status is invariant under unit scalings") {
  Rng rng(5);
  for (bool ram : {false, true}) {
    auto f = field(7, ram);
    const BaseElement one = f->one();
    for (int i = 0; i < 40; ++i) {
      std::vector<ExtElement> b = {f->delta() * rng.unit(*f).shift(-5),
                                   f->delta() * rng.unit(*f).shift(rng.uniform(-4, -1)),
                                   f->ext_zero()};
      std::vector<BaseElement> l = {one, rng.unit(*f), rng.unit(*f)};
      const Stratum s = make_type_d(f, l, b);
      if (!validate(s).empty()) continue;
      const XStatus base = criterion_status(s).status;
      const BaseElement u = rng.unit(*f);
      std::vector<ExtElement> ub;
      for (const auto& x : b) ub.push_back(x * ExtElement(u));
      CHECK(criterion_status(make_type_d(f, l, ub)).status == base);
      const BaseElement n = rng.ext_unit(*f).norm();
      std::vector<BaseElement> nl;
      for (const auto& x : l) nl.push_back(x * n);
      CHECK(criterion_status(make_type_d(f, nl, b)).status == base);
    }
  }
}

TEST_CASE("format_witness lists coordinates and the certificate") {
  auto f = field(5, false);
  const auto r = brute_search(assemble_system(even_d(f)), {6, 1, 100000});
  REQUIRE(r.witness);
  const std::string s = format_witness(*r.witness);
  CHECK(s.find("point =") == 0);
  CHECK(s.find("certified = yes") != std::string::npos);
}

TEST_CASE("type C: the anisotropic pencil member pins V1 and leaves one quadric") {
  for (bool ram : {false, true}) {
    auto f = field(5, ram);
    const BaseElement one = f->one();
    const auto s = make_type_c(f, {one, one, -one}, dpow(*f, 1, -3), dpow(*f, 2, -1));
    REQUIRE(validate(s).empty());
    const auto sys = assemble_system(s);
    const SystemShape sh = system_shape(sys);
    CHECK(sh.forced_zero[0]);
    CHECK_FALSE(sh.forced_zero[1]);
    CHECK_FALSE(sh.forced_zero[2]);
    CHECK(sh.single);
    const auto r = brute_search(sys, {10, 2, 1'000'000});
    REQUIRE(r.witness);
    REQUIRE(r.witness->certificate);
    CHECK(r.witness->point[0].is_zero());
    CHECK(r.witness->point[1].is_zero());
  }
}

TEST_CASE("type C with β2 = 0: Q2 itself pins V1") {
  auto f = field(7, false);
  const auto s = make_type_c_witt(f, dpow(*f, 3, -2), f->ext_zero());
  REQUIRE(validate(s).empty());
  const auto sys = assemble_system(s);
  const SystemShape sh = system_shape(sys);
  CHECK(sh.forced_zero[1]);
  CHECK(sh.single);
  const auto r = brute_search(sys, {12, 1, 1'000'000});
  REQUIRE(r.witness);
  CHECK(r.witness->certificate);
}

TEST_CASE("type D systems are genuine pairs") {
  auto f = field(5, false);
  const SystemShape sh = system_shape(assemble_system(even_d(f)));
  CHECK_FALSE(sh.single);
  CHECK_FALSE((sh.forced_zero[0] || sh.forced_zero[1] || sh.forced_zero[2]));
}

TEST_CASE("hensel_check rejects a point off the reduced system") {
  auto f = field(5, false);
  const BaseElement one = f->one();
  const auto sys =
      assemble_system(make_type_c(f, {one, one, -one}, dpow(*f, 1, -3), dpow(*f, 2, -1)));
  Witness w;
  w.point = to_point({f->ext_int(25), f->ext_one(), f->ext_one()});
  CHECK_FALSE(hensel_check(sys, w).certificate);
}
