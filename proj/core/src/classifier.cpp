#include "u21/classifier.hpp"

#include <algorithm>
#include <sstream>

namespace u21 {

const char* to_string(Verdict v) { return v == Verdict::Generic ? "Generic" : "NonGeneric"; }

Verdict parse_verdict(const std::string& s) {
  if (s == "Generic") return Verdict::Generic;
  if (s == "NonGeneric") return Verdict::NonGeneric;
  throw ParseError("unknown verdict '" + s + "'");
}

XStatus parse_xstatus(const std::string& s) {
  if (s == "Empty") return XStatus::Empty;
  if (s == "NonEmpty") return XStatus::NonEmpty;
  throw ParseError("unknown 𝔛_β status '" + s + "'");
}

const char* to_string(ShallowShape s) {
  switch (s) {
    case ShallowShape::unram_oo: return "unramified, o+o";
    case ShallowShape::unram_op: return "unramified, o+p";
    case ShallowShape::ramified: return "ramified";
  }
  return "?";
}

namespace {

std::string yesno(bool b) { return b ? "yes" : "no"; }

int64_t nu_or_inf(const ExtElement& x) { return x.is_zero() ? kInf : x.nu_F(); }

BaseElement lambda_of(const Stratum& s, int i) {
  const int k = s.blocks[size_t(i)][0];
  return s.space.gram(k, k).a();
}

WittModel finish_model(const Stratum& s, Matrix basis) {
  WittModel m;
  m.space.gram = basis.transpose() * s.space.gram * basis.conj();
  m.space.kind = BasisKind::witt;
  m.beta = basis.inverse() * s.beta * basis;
  m.basis = std::move(basis);
  return m;
}

// Frame for type D: e0 ∈ V1 a unit vector, (e1, e-1) a Witt pair of W1 = V2 ⊕ V3.
Matrix type_d_frame(const Stratum& s) {
  const Field& f = s.f();
  const int i1 = s.blocks[0][0], i2 = s.blocks[1][0], i3 = s.blocks[2][0];
  const WittPair wp =
      witt_from_anisotropic_pair(HermitianSpace::orthogonal({lambda_of(s, 1), lambda_of(s, 2)}),
                                 f.ramified());
  Vec e1(3, f.ext_zero()), e0(3, f.ext_zero()), em1(3, f.ext_zero());
  e0[size_t(i1)] = solve_norm_equation(lambda_of(s, 0)).inv();
  e1[size_t(i2)] = wp.e1[0];
  e1[size_t(i3)] = wp.e1[1];
  em1[size_t(i2)] = wp.em1[0];
  em1[size_t(i3)] = wp.em1[1];
  return Matrix::from_columns({e1, e0, em1});
}

void require_valid(const Stratum& s) {
  const auto v = validate(s);
  if (v.empty()) return;
  std::string msg = "invalid stratum:";
  for (const auto& x : v) msg += " " + x + ";";
  throw UnsupportedConfiguration(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Decision table.

Verdict depth_zero_rule(const DepthZeroInput& in) {
  return in.lattice == DepthZeroLattice::L1 && in.sigma_generic ? Verdict::Generic
                                                                : Verdict::NonGeneric;
}

ClassificationReport classify_genericity(const Stratum& s, const ClassifyOptions& opt) {
  require_valid(s);
  ClassificationReport r;
  auto step = [&](std::string id, std::string rule, std::string in, std::string out) {
    r.case_path.push_back({std::move(id), std::move(rule), std::move(in), std::move(out)});
  };

  if (s.type == TypeTag::depth_zero) {
    const std::string key = s.lattice_key.empty() ? "L1" : s.lattice_key;
    DepthZeroInput in{s.ramified(), key == "L1" ? DepthZeroLattice::L1 : DepthZeroLattice::L2,
                      s.sigma_generic};
    r.xbeta = XStatus::NonEmpty;
    r.verdict = depth_zero_rule(in);
    step("depth-zero", "generic iff Λ = Λ1 and σ is generic",
         "lattice=" + key + " sigma_generic=" + yesno(s.sigma_generic) +
             " ramified=" + yesno(s.ramified()),
         to_string(r.verdict));
    return r;
  }

  const CriterionResult crit = criterion_status(s);
  r.case_path = crit.trace;
  r.xbeta = crit.status;
  const std::string xs = std::string("xbeta=") + to_string(r.xbeta);
  switch (s.type) {
    case TypeTag::A:
      r.verdict = Verdict::Generic;
      step("theorem-typeA", "F[β] a field: every representation in Π_𝔵 is generic", xs,
           to_string(r.verdict));
      break;
    case TypeTag::B:
      r.verdict = r.xbeta == XStatus::NonEmpty ? Verdict::Generic : Verdict::NonGeneric;
      step("theorem-typeB", "generic iff 𝔛_β(F0) is non-empty", xs, to_string(r.verdict));
      break;
    case TypeTag::C: {
      r.verdict = Verdict::NonGeneric;
      const bool iso = r.xbeta == XStatus::NonEmpty;
      step(iso ? "theorem-typeC-iso" : "theorem-typeC-aniso",
           iso ? "(V2, h) isotropic: 𝔛_β(F0) is non-empty and every representation is non-generic"
               : "(V2, h) anisotropic: every representation is non-generic",
           xs, to_string(r.verdict));
      break;
    }
    case TypeTag::D:
      r.verdict = r.xbeta == XStatus::NonEmpty ? Verdict::Generic : Verdict::NonGeneric;
      step("theorem-typeD", "generic iff 𝔛_β(F0) is non-empty", xs, to_string(r.verdict));
      break;
    case TypeTag::depth_zero:
      break;
  }

  if (opt.search_witness && r.xbeta == XStatus::NonEmpty) {
    const SearchResult sr = brute_search(assemble_system(s), opt.search);
    if (sr.witness && sr.witness->certificate) r.witness = sr.witness;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Witt models.

bool w1_isotropic(const Stratum& s) {
  if (s.type != TypeTag::D) throw UnsupportedConfiguration("W1 is defined for type D");
  return is_isotropic_binary(ExtElement(lambda_of(s, 1)), ExtElement(lambda_of(s, 2)));
}

WittModel witt_model(const Stratum& s) {
  if ((s.type == TypeTag::B || s.type == TypeTag::C) && v2_isotropic(s)) {
    const AttachedLattice at = attach_lattice_sequence(s);
    if (at.witt) return finish_model(s, at.basis);
  }
  if (s.type == TypeTag::D && w1_isotropic(s)) return finish_model(s, type_d_frame(s));
  return finish_model(s, witt_frame(s.space));
}

// ---------------------------------------------------------------------------
// Character nontriviality on U_der(r).

CharCheck char_nontrivial(const Matrix& g, const Stratum& s, int64_t r, Side side) {
  const Field& f = s.f();
  const WittModel m = witt_model(s);
  if (!is_unitary(m.space, g)) throw ConstraintViolated("g is not unitary");
  const int k = side == Side::upper ? 0 : 2;
  const Vec v = g * unit_vector(f, 3, k);
  CharCheck c;
  c.h = h_eval(m.space, v, m.beta * v);
  if (c.h.is_zero()) throw IndeterminateValuation("h(g e, β g e) vanishes to working precision");
  const ExtElement dh = f.delta() * c.h;
  c.level = dh.a().valuation();
  c.nontrivial = c.level <= -r;

  Matrix x(f, 3, 3);
  x(k, 2 - k) = f.ext_one();
  c.trace = (g.inverse() * m.beta * g * x).trace();
  c.trace_identity = c.trace == c.h.conj() && c.h.conj() == -c.h;
  c.norm_identity = ExtElement(dh.trace()) == dh * f.ext_int(2);
  return c;
}

// ---------------------------------------------------------------------------
// Valuation separation for type D.

SeparationCheck valuation_separation(const Stratum& s, const ExtElement& a, const ExtElement& b,
                                     const ExtElement& c) {
  if (s.type != TypeTag::D) throw HypothesisViolated("valuation separation is for type D");
  require_valid(s);
  if (criterion_status(s).status != XStatus::Empty)
    throw HypothesisViolated("𝔛_β(F0) is non-empty");
  if (a.is_zero()) throw HypothesisViolated("a = 0");
  const Field& f = s.f();
  Vec v(3, f.ext_zero());
  v[size_t(s.blocks[0][0])] = a;
  v[size_t(s.blocks[1][0])] = b;
  v[size_t(s.blocks[2][0])] = c;
  if (!h_eval(s.space, v, v).is_zero()) throw HypothesisViolated("v is not isotropic");
  const ExtElement rest = s.scalar(1) * ExtElement(lambda_of(s, 1) * b.norm()) +
                          s.scalar(2) * ExtElement(lambda_of(s, 2) * c.norm());
  if (rest.is_zero()) throw HypothesisViolated("β2λ2N(b) + β3λ3N(c) = 0");
  const ExtElement first = s.scalar(0) * ExtElement(lambda_of(s, 0) * a.norm());
  SeparationCheck r;
  r.lhs = h_eval(s.space, v, s.beta * v).nu_F();
  r.rhs = std::min(first.nu_F(), rest.nu_F());
  r.holds = r.lhs == r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Shallowness.

ShallowParams shallow_params(const Stratum& s) {
  require_valid(s);
  ShallowParams p;
  p.type = s.type;
  const bool ram = s.ramified();
  auto split = [](int64_t q, int64_t& m, int64_t& r) {
    m = q / 4;
    r = (q % 4) / 2;
  };
  if (s.type == TypeTag::C) {
    if (!v2_isotropic(s)) throw UnsupportedConfiguration("type C shallowness needs (V2, h) isotropic");
    split(q_invariants(s).n, p.m1, p.r1);
    if (ram)
      p.shape = ShallowShape::ramified;
    else
      p.shape = attach_lattice_sequence(s).seq.name == "L1" ? ShallowShape::unram_oo
                                                            : ShallowShape::unram_op;
    return p;
  }
  if (s.type == TypeTag::D) {
    if (!w1_isotropic(s)) throw UnsupportedConfiguration("type D shallowness needs (W1, h) isotropic");
    const Invariants inv = q_invariants(s);
    split(inv.q[0], p.m1, p.r1);
    split(inv.q[1], p.m2, p.r2);
    if (ram)
      p.shape = ShallowShape::ramified;
    else
      p.shape = lambda_of(s, 1).valuation() == 0 ? ShallowShape::unram_oo : ShallowShape::unram_op;
    return p;
  }
  throw UnsupportedConfiguration("shallowness is defined for types C and D");
}

int64_t shallowness(const ShallowParams& p, Weyl w, int64_t nu) {
  const bool stable = nu >= kInf;
  // max{base, top - ν}, dropping the second term for ν = ∞.
  auto mx = [&](int64_t base, int64_t top) { return stable ? base : std::max(base, top - nu); };
  const bool id = w == Weyl::id;
  if (p.type == TypeTag::C) {
    const int64_t m = p.m1, r = p.r1;
    switch (p.shape) {
      case ShallowShape::unram_oo: return mx(1, m + 1);
      case ShallowShape::unram_op: return id ? mx(0, m + r) : mx(2, m + r + 1);
      case ShallowShape::ramified:
        // ⌈(m + r - 1)/2 - ν⌉ and ⌈(m + r)/2 - ν⌉.
        if (stable) return id ? 0 : 1;
        return id ? std::max<int64_t>(0, ceil_div(m + r - 1 - 2 * nu, 2))
                  : std::max<int64_t>(1, ceil_div(m + r - 2 * nu, 2));
    }
  }
  if (p.type == TypeTag::D) {
    switch (p.shape) {
      case ShallowShape::unram_oo: return mx(p.m2 + 1, p.m1 + 1);
      case ShallowShape::unram_op: return id ? mx(p.m2, p.m1 + p.r1) : mx(p.m2 + 2, p.m1 + p.r1 + 1);
      case ShallowShape::ramified: {
        // ⌈m1/2 - ν_{F/F0}(x)⌉ with ν_{F/F0}(x) = ν/2.
        const int64_t base = ceil_div(p.m2, 2);
        return stable ? base : std::max(base, ceil_div(p.m1 - nu, 2));
      }
    }
  }
  throw UnsupportedConfiguration("shallowness is defined for types C and D");
}

int64_t shallowness(const Stratum& s, Weyl w, const ExtElement& x) {
  return shallowness(shallow_params(s), w, nu_or_inf(x));
}

int64_t stable_shallowness(const ShallowParams& p, Weyl w) { return shallowness(p, w, kInf); }

int64_t shallowness_threshold(const ShallowParams& p, Weyl w) {
  const int64_t d = stable_shallowness(p, w);
  int64_t nu = 0;
  while (shallowness(p, w, nu) != d) ++nu;
  return nu;
}

// ---------------------------------------------------------------------------
// Claim inequalities.

ClaimCheck claim_inequalities(const Stratum& s, Weyl w, const ExtElement& x, const ExtElement& y) {
  const Field& f = s.f();
  if ((!x.is_zero() && x.nu_F() < 0) || (!y.is_zero() && y.nu_F() < 0))
    throw HypothesisViolated("x, y must lie in o_F");
  if (!(x * x.conj() + y + y.conj()).is_zero())
    throw HypothesisViolated("x·σ(x) + y + σ(y) != 0");
  if (s.type == TypeTag::C && !v2_isotropic(s))
    throw HypothesisViolated("(V2, h) is anisotropic");
  if (s.type == TypeTag::D) {
    if (!w1_isotropic(s)) throw HypothesisViolated("(W1, h) is anisotropic");
    if (criterion_status(s).status != XStatus::Empty)
      throw HypothesisViolated("𝔛_β(F0) is non-empty");
  }
  const ShallowParams p = shallow_params(s);
  ClaimCheck c;
  c.d = shallowness(p, w, nu_or_inf(x));
  c.d_stable = stable_shallowness(p, w);
  if (s.type == TypeTag::C && c.d == c.d_stable)
    throw HypothesisViolated("d(𝔵, w, x) = d(𝔵, w)");

  const WittModel m = witt_model(s);
  const bool id = w == Weyl::id;
  const Matrix u = make_unipotent(x, y, id ? Side::lower : Side::upper);
  const Vec v = u * unit_vector(f, 3, id ? 0 : 2);
  const ExtElement hv = h_eval(m.space, v, m.beta * v);
  c.lhs = hv.is_zero() ? kInf : (f.delta() * hv).a().valuation();
  c.holds = c.lhs <= -c.d;
  return c;
}

ClaimCheck claim_inequalities(const Stratum& s, Weyl w, const ExtElement& x) {
  return claim_inequalities(s, w, x, -(x * x.conj()).half());
}

// ---------------------------------------------------------------------------
// Conjugation identity.

ConjugationCheck conjugation_identity(const ExtElement& x, const ExtElement& y,
                                      const ExtElement& a) {
  const Field& f = *x.field();
  if (!(a + a.conj()).is_zero()) throw ConstraintViolated("a ∉ δF0");
  const ExtElement n = x * x.conj();
  const Matrix lhs = make_unipotent(x, y, Side::lower);  // checks the constraint
  ConjugationCheck c;
  c.product = lhs * make_unipotent(f.ext_zero(), a, Side::upper) *
              make_unipotent(-x, -y - n, Side::lower);
  const ExtElement one = f.ext_one(), sx = x.conj();
  c.expected = Matrix::from_rows({
      {one - a * (n + y), a * sx, a},
      {a * x * (-y - n), one + a * n, a * x},
      {-(a * y * (y + n)), a * sx * y, a * y + one},
  });
  c.holds = c.product == c.expected;
  return c;
}

}  // namespace u21
