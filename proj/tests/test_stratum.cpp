#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "u21/stratum.hpp"

using namespace u21;
using testing::field;
using testing::Rng;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& s) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& x) { return x.find(s) != std::string::npos; });
}

ExtElement dpow(const Field& f, int64_t u, int64_t k) {
  return f.delta() * f.from_int(u).shift(k);
}

// Antidiagonal β2 on (e1, e-1): [[0, y], [z, 0]], skew for the Witt form when y, z ∈ δF0.
Matrix antidiag(const Field& f, const ExtElement& y, const ExtElement& z) {
  Matrix m(f, 2, 2);
  m(0, 1) = y;
  m(1, 0) = z;
  return m;
}

Stratum sample_d(const FieldPtr& f) {
  const BaseElement one = f->one();
  return make_type_d(f, {one, one, one}, {dpow(*f, 1, -3), dpow(*f, 2, -1), f->ext_zero()});
}

}  // namespace

TEST_CASE("type tags round trip") {
  for (TypeTag t : {TypeTag::A, TypeTag::B, TypeTag::C, TypeTag::D, TypeTag::depth_zero})
    CHECK(parse_type_tag(to_string(t)) == t);
  CHECK_THROWS_AS(parse_type_tag("E"), InvalidConfig);
}

TEST_CASE("type D: valid sample and pairwise distinctness") {
  auto f = field(5, false);
  CHECK(validate(sample_d(f)).empty());
  const BaseElement one = f->one();
  auto s = make_type_d(f, {one, one, one},
                       {dpow(*f, 1, -3), dpow(*f, 2, -1), dpow(*f, 2, -1)});
  CHECK(mentions(validate(s), "components not pairwise distinct"));
}

TEST_CASE("type D: one mutation per clause") {
  auto f = field(5, false);
  const BaseElement one = f->one();
  const auto b1 = dpow(*f, 1, -3), b2 = dpow(*f, 2, -1);
  // Non-skew component.
  CHECK(mentions(validate(make_type_d(f, {one, one, one}, {b1, b2, f->ext_int(3)})), "σ(β3)"));
  // Ordering.
  CHECK(mentions(validate(make_type_d(f, {one, one, one}, {b2, b1, f->ext_zero()})),
                 "ordering"));
  // Two zero components.
  CHECK(mentions(validate(make_type_d(f, {one, one, one}, {b1, f->ext_zero(), f->ext_zero()})),
                 "more than one component is zero"));
  // Unnormalised λ.
  CHECK(mentions(validate(make_type_d(f, {one, one, f->from_int(25)}, {b1, b2, f->ext_zero()})),
                 "not normalised"));
  // Discriminant: diag(1, 1, 5) has -det of odd valuation.
  CHECK(mentions(validate(make_type_d(f, {one, one, f->from_int(5)}, {b1, b2, f->ext_zero()})),
                 "discriminant"));
  // Equal valuations with equal residues: 1 - β2/β1 is not a unit.
  CHECK(mentions(validate(make_type_d(f, {one, one, one}, {b1, b1 + dpow(*f, 1, 0), f->ext_zero()})),
                 "is not a unit"));
  // A nonzero component of non-negative level.
  CHECK(mentions(validate(make_type_d(f, {one, one, one}, {b1, b2, dpow(*f, 1, 0)})),
                 "not minimal"));
}

TEST_CASE("type C: skewness and distinctness") {
  auto f = field(5, false);
  const BaseElement one = f->one();
  auto s = make_type_c(f, {one, one, f->from_int(-1)}, f->ext_int(3), dpow(*f, 1, -1));
  CHECK(mentions(validate(s), "σ(β1) ≠ -β1"));
  auto t = make_type_c(f, {one, one, f->from_int(-1)}, dpow(*f, 1, -1), dpow(*f, 1, -1));
  CHECK(mentions(validate(t), "components not pairwise distinct"));
  auto ok = make_type_c(f, {one, one, f->from_int(-1)}, dpow(*f, 1, -1), dpow(*f, 2, -1));
  CHECK(validate(ok).empty());
}

TEST_CASE("type B unramified isotropic with q1 = 4, q2 = 6 is valid") {
  auto f = field(5, false);
  auto s = make_type_b_witt(f, dpow(*f, 1, -1), antidiag(*f, dpow(*f, 1, -2), dpow(*f, 1, -1)));
  CHECK(validate(s).empty());
  const Invariants inv = q_invariants(s);
  CHECK(inv.q == std::vector<int64_t>{4, 6});
  CHECK(inv.n == 6);
  CHECK(inv.e == 4);
}

TEST_CASE("type B with q1 = q2 is rejected") {
  auto f = field(5, false);
  // β2 = [[x, y], [z, x]] with x = δ/ϖ0 has level -4, as does β1 = 2δ/ϖ0 on e0.
  Matrix b2 = antidiag(*f, dpow(*f, 1, 0), dpow(*f, 1, 1));
  b2(0, 0) = b2(1, 1) = dpow(*f, 1, -1);
  auto s = make_type_b_witt(f, dpow(*f, 2, -1), b2);
  CHECK(q_invariants(s).q == std::vector<int64_t>{4, 4});
  CHECK(mentions(validate(s), "q1 = q2"));
}

TEST_CASE("type B rejects a zero V1 component and split β2") {
  auto f = field(5, false);
  auto s = make_type_b_witt(f, f->ext_zero(), antidiag(*f, dpow(*f, 1, -2), dpow(*f, 1, -1)));
  CHECK(mentions(validate(s), "β1 = 0"));
  // yz of even valuation and square: F[β2] = F × F.
  auto t = make_type_b_witt(f, dpow(*f, 1, -1), antidiag(*f, dpow(*f, 1, -1), dpow(*f, 1, -1)));
  CHECK(mentions(validate(t), "quadratic"));
}

TEST_CASE("q_invariants: ramified type D scalar δ/ϖ0 has q = 2") {
  auto f = field(5, true);
  const BaseElement one = f->one();
  auto s = make_type_d(f, {one, one, f->from_int(-1)},
                       {f->delta() * f->pi0_pow(-1), f->delta() * f->from_int(2), f->ext_zero()});
  const Invariants inv = q_invariants(s);
  CHECK(inv.q[0] == 2);
  CHECK(inv.e == 2);
}

TEST_CASE("q_invariants are unchanged by unit scalings of β") {
  Rng r(21);
  for (bool ram : {false, true}) {
    auto f = field(7, ram);
    auto s = ram ? make_type_d(f, {f->one(), f->one(), f->from_int(-1)},
                               {dpow(*f, 1, -3), dpow(*f, 3, -1), f->ext_zero()})
                 : sample_d(f);
    const Invariants base = q_invariants(s);
    for (int t = 0; t < 10; ++t) {
      Stratum u = s;
      u.beta = s.beta * ExtElement(r.unit(*f));
      CHECK(q_invariants(u).q == base.q);
    }
  }
}

TEST_CASE("attached lattice sequences are self-dual with shift -1") {
  auto f = field(5, false);
  // Isotropic V2 in an orthogonal basis: λ = (1, 1, -1).
  const BaseElement one = f->one();
  auto c = make_type_c(f, {one, one, f->from_int(-1)}, dpow(*f, 1, -1), dpow(*f, 2, -1));
  const AttachedLattice at = attach_lattice_sequence(c);
  CHECK(at.witt);
  CHECK(at.space.gram == HermitianSpace::witt(*f).gram);
  CHECK(at.seq.duality_shift == -1);
  CHECK(at.seq.name == "L1");
  auto d = attach_lattice_sequence(sample_d(f));
  CHECK(d.seq.duality_shift == -1);
  auto b = make_type_b_witt(f, dpow(*f, 1, -1), antidiag(*f, dpow(*f, 1, -2), dpow(*f, 1, -1)));
  auto ab = attach_lattice_sequence(b);
  CHECK(ab.seq.name == "L3");
  CHECK(ab.seq.duality_shift == -1);

  auto g = field(3, true);
  auto cr = make_type_c_witt(g, dpow(*g, 1, -1), dpow(*g, 2, -1));
  auto acr = attach_lattice_sequence(cr);
  CHECK(acr.seq.name == "L2");
  CHECK(acr.seq.at(0) == std::vector<int64_t>{0, 0, 1});
  CHECK(acr.seq.at(1) == std::vector<int64_t>{0, 1, 1});
  CHECK_THROWS_AS(attach_lattice_sequence(make_type_c_witt(g, dpow(*g, 1, -1), dpow(*g, 2, -1), "L1")),
                  UnsupportedConfiguration);
}

TEST_CASE("type A: cyclic β with ν_F(det β) prime to 3") {
  auto f = field(5, false);
  Matrix beta(*f, 3, 3);
  const ExtElement a = dpow(*f, 1, -1), b = f->ext_one();
  beta(0, 2) = a;
  beta(1, 0) = b;
  beta(2, 1) = -b.conj();
  auto s = make_type_a(f, {}, beta);
  CHECK(validate(s).empty());
  CHECK(q_invariants(s).n == 2);
  CHECK(q_invariants(s).e == 6);
  // β = diag is split.
  auto t = make_type_a(f, {}, Matrix::diag({a, a * f->ext_int(2), -a.conj()}));
  CHECK_FALSE(validate(t).empty());
}

TEST_CASE("depth-zero strata") {
  auto f = field(3, true);
  CHECK(validate(make_depth_zero(f, "L1", true)).empty());
  CHECK(validate(make_depth_zero(f, "L2", false)).empty());
  CHECK_FALSE(validate(make_depth_zero(f, "L3", true)).empty());
  CHECK(q_invariants(make_depth_zero(f, "L2", true)).n == 0);
}

TEST_CASE("has_root_in_F") {
  for (bool ram : {false, true}) {
    auto f = field(5, ram);
    const ExtElement one = f->ext_one(), zero = f->ext_zero();
    // x^2 - 4, x^2 - δ^2 have roots; x^2 - ϖ0 has one only when ramified (p = 5).
    CHECK(has_root_in_F({f->ext_int(-4), zero, one}));
    CHECK(has_root_in_F({-(f->delta() * f->delta()), zero, one}));
    // Ramified: ϖ0 = -δ^2 and -1 is a square mod 5.
    CHECK(has_root_in_F({ExtElement(-f->pi0_pow(1)), zero, one}) == ram);
    // x^3 - ϖ0 is Eisenstein in the unramified case.
    if (!ram) CHECK_FALSE(has_root_in_F({ExtElement(-f->pi0_pow(1)), zero, zero, one}));
    // (x - 2)(x^2 - ϖ0)
    const ExtElement p0(f->pi0_pow(1));
    CHECK(has_root_in_F({f->ext_int(2) * p0, -p0, f->ext_int(-2), one}));
    // x^2 - 2·25 (2 is a non-square mod 5, a square in F only when unramified).
    CHECK(has_root_in_F({f->ext_int(-50), zero, one}) == !ram);
  }
}
