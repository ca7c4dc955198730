#include "u21/stratum.hpp"

#include <algorithm>
#include <set>

namespace u21 {

const char* to_string(TypeTag t) {
  switch (t) {
    case TypeTag::A: return "A";
    case TypeTag::B: return "B";
    case TypeTag::C: return "C";
    case TypeTag::D: return "D";
    case TypeTag::depth_zero: return "depth_zero";
  }
  return "?";
}

TypeTag parse_type_tag(const std::string& s) {
  if (s == "A") return TypeTag::A;
  if (s == "B") return TypeTag::B;
  if (s == "C") return TypeTag::C;
  if (s == "D") return TypeTag::D;
  if (s == "depth_zero" || s == "0") return TypeTag::depth_zero;
  throw InvalidConfig("unknown stratum type '" + s + "'");
}

namespace {

Stratum base(FieldPtr f, TypeTag t, HermitianSpace space, std::vector<std::vector<int>> blocks,
             Matrix beta) {
  Stratum s;
  s.field = std::move(f);
  s.type = t;
  s.space = std::move(space);
  s.blocks = std::move(blocks);
  s.beta = std::move(beta);
  return s;
}

Matrix embed(const Field& f, const ExtElement& b1, const std::vector<int>& i1, const Matrix& b2,
             const std::vector<int>& i2) {
  Matrix m(f, 3, 3);
  m(i1[0], i1[0]) = b1;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) m(i2[size_t(a)], i2[size_t(b)]) = b2(a, b);
  return m;
}

Matrix scalar2(const ExtElement& x) { return Matrix::diag({x, x}); }

}  // namespace

Stratum make_type_d(FieldPtr f, const std::vector<BaseElement>& lambdas,
                    const std::vector<ExtElement>& betas) {
  if (lambdas.size() != 3 || betas.size() != 3)
    throw InvalidConfig("type D needs three λ and three β");
  auto sp = HermitianSpace::orthogonal(lambdas);
  return base(std::move(f), TypeTag::D, sp, {{0}, {1}, {2}}, Matrix::diag(betas));
}

Stratum make_type_c(FieldPtr f, const std::vector<BaseElement>& lambdas, const ExtElement& beta1,
                    const ExtElement& beta2, const std::string& lattice_key) {
  if (lambdas.size() != 3) throw InvalidConfig("type C needs three λ");
  auto sp = HermitianSpace::orthogonal(lambdas);
  Matrix b = embed(*f, beta1, {0}, scalar2(beta2), {1, 2});
  Stratum s = base(std::move(f), TypeTag::C, sp, {{0}, {1, 2}}, b);
  s.lattice_key = lattice_key;
  return s;
}

Stratum make_type_c_witt(FieldPtr f, const ExtElement& beta1, const ExtElement& beta2,
                         const std::string& lattice_key) {
  auto sp = HermitianSpace::witt(*f);
  Matrix b = embed(*f, beta1, {1}, scalar2(beta2), {0, 2});
  Stratum s = base(std::move(f), TypeTag::C, sp, {{1}, {0, 2}}, b);
  s.lattice_key = lattice_key;
  return s;
}

Stratum make_type_b(FieldPtr f, const std::vector<BaseElement>& lambdas, const ExtElement& beta1,
                    const Matrix& beta2) {
  if (lambdas.size() != 3) throw InvalidConfig("type B needs three λ");
  auto sp = HermitianSpace::orthogonal(lambdas);
  Matrix b = embed(*f, beta1, {0}, beta2, {1, 2});
  return base(std::move(f), TypeTag::B, sp, {{0}, {1, 2}}, b);
}

Stratum make_type_b_witt(FieldPtr f, const ExtElement& beta1, const Matrix& beta2) {
  auto sp = HermitianSpace::witt(*f);
  Matrix b = embed(*f, beta1, {1}, beta2, {0, 2});
  return base(std::move(f), TypeTag::B, sp, {{1}, {0, 2}}, b);
}

Stratum make_type_a(FieldPtr f, const std::vector<BaseElement>& lambdas, const Matrix& beta) {
  auto sp = lambdas.empty() ? HermitianSpace::witt(*f) : HermitianSpace::orthogonal(lambdas);
  return base(std::move(f), TypeTag::A, sp, {{0, 1, 2}}, beta);
}

Stratum make_depth_zero(FieldPtr f, const std::string& lattice_key, bool sigma_generic) {
  auto sp = HermitianSpace::witt(*f);
  Matrix b(*f, 3, 3);
  Stratum s = base(std::move(f), TypeTag::depth_zero, sp, {{0, 1, 2}}, b);
  s.lattice_key = lattice_key;
  s.sigma_generic = sigma_generic;
  return s;
}

// ---------------------------------------------------------------------------
// Roots of polynomials over F.

namespace {

using Poly = std::vector<ExtElement>;

ExtElement eval(const Poly& p, const ExtElement& x) {
  ExtElement acc = p.back();
  for (size_t i = p.size() - 1; i-- > 0;) acc = acc * x + p[i];
  return acc;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * p[i].field()->from_int(int64_t(i)));
  return d;
}

// p(a + c·z) as a polynomial in z.
Poly taylor_shift(const Poly& p, const ExtElement& a, const ExtElement& c) {
  const Field& f = *a.field();
  Poly out(p.size(), f.ext_zero());
  // Horner: out = out·(a + c z) + p_i.
  for (size_t i = p.size(); i-- > 0;) {
    Poly next(p.size(), f.ext_zero());
    for (size_t k = 0; k + 1 < p.size(); ++k) {
      next[k] = next[k] + out[k] * a;
      next[k + 1] = next[k + 1] + out[k] * c;
    }
    next[0] = next[0] + p[i];
    out = next;
  }
  return out;
}

int64_t min_nu(const Poly& p) {
  int64_t m = kInf;
  for (const auto& c : p)
    if (!c.is_zero()) m = std::min(m, c.nu_F());
  return m;
}

Poly scale_down(const Poly& p, int64_t k) {
  const ExtElement s = p.front().field()->uniformizer().pow(-k);
  Poly out;
  for (const auto& c : p) out.push_back(c * s);
  return out;
}

std::vector<ExtElement> residue_reps(const Field& f) {
  std::vector<ExtElement> r;
  for (int64_t a = 0; a < f.p(); ++a) {
    if (f.ramified()) {
      r.push_back(f.ext_int(a));
      continue;
    }
    for (int64_t b = 0; b < f.p(); ++b) r.push_back(f.ext_int(a) + f.ext_int(b) * f.delta());
  }
  return r;
}

// Integral polynomial with a unit coefficient: root in o_F?
bool root_in_o(const Poly& p, int depth) {
  const Field& f = *p.front().field();
  if (depth > f.N()) return true;  // a root to working precision
  const Poly dp = derivative(p);
  for (const ExtElement& z0 : residue_reps(f)) {
    const ExtElement v = eval(p, z0);
    if (v.is_zero()) return true;
    if (v.nu_F() == 0) continue;
    const ExtElement dv = eval(dp, z0);
    if (!dv.is_zero() && v.nu_F() > 2 * dv.nu_F()) return true;
    Poly q = taylor_shift(p, z0, f.uniformizer());
    const int64_t m = min_nu(q);
    if (m == kInf) return true;
    if (root_in_o(scale_down(q, m), depth + 1)) return true;
  }
  return false;
}

}  // namespace

bool has_root_in_F(const std::vector<ExtElement>& poly) {
  if (poly.size() < 2) return false;
  if (poly.size() == 2) return true;
  if (poly[0].is_zero()) return true;
  const Field& f = *poly[0].field();
  std::vector<std::pair<int, int64_t>> pts;
  for (size_t i = 0; i < poly.size(); ++i)
    if (!poly[i].is_zero()) pts.emplace_back(int(i), poly[i].nu_F());
  std::set<int64_t> cands;
  for (size_t a = 0; a < pts.size(); ++a)
    for (size_t b = a + 1; b < pts.size(); ++b) {
      const int64_t num = pts[a].second - pts[b].second;
      const int64_t den = pts[b].first - pts[a].first;
      if (num % den == 0) cands.insert(num / den);
    }
  for (int64_t r : cands) {
    // Root valuation r: the minimum of ν(c_i) + i·r is attained twice.
    int64_t m = kInf;
    int count = 0;
    for (auto [i, v] : pts) {
      const int64_t w = v + i * r;
      if (w < m) {
        m = w;
        count = 1;
      } else if (w == m) {
        ++count;
      }
    }
    if (count < 2) continue;
    Poly q = taylor_shift(poly, f.ext_zero(), f.uniformizer().pow(r));
    if (root_in_o(scale_down(q, m), 0)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

bool v2_isotropic(const Stratum& s) {
  if (s.type != TypeTag::B && s.type != TypeTag::C)
    throw UnsupportedConfiguration("V2 isotropy is defined for types B and C");
  if (s.space.kind == BasisKind::witt) return true;
  const auto& v2 = s.blocks[1];
  return is_isotropic_binary(s.space.gram(v2[0], v2[0]), s.space.gram(v2[1], v2[1]));
}

namespace {

std::vector<int64_t> gram_nu(const HermitianSpace& sp) {
  std::vector<int64_t> nu;
  for (int i = 0; i < sp.dim(); ++i) nu.push_back(sp.gram(i, i).nu_F());
  return nu;
}

}  // namespace

AttachedLattice attach_lattice_sequence(const Stratum& s) {
  const Field& f = s.f();
  AttachedLattice r;
  r.basis = Matrix::identity(f, 3);
  r.space = s.space;
  r.blocks = s.blocks;
  r.witt = s.space.kind == BasisKind::witt;

  auto witt_key = [&](const std::string& dflt) {
    const std::string key = s.lattice_key.empty() ? dflt : s.lattice_key;
    return catalog_sequence(key, f.ramified());
  };

  switch (s.type) {
    case TypeTag::A:
      throw UnsupportedConfiguration("type A lattice sequences are not tabulated");
    case TypeTag::depth_zero:
      if (!r.witt) throw UnsupportedConfiguration("depth-zero strata are given in a Witt basis");
      r.seq = witt_key("L1");
      break;
    case TypeTag::D:
      r.seq = orthogonal_sequence(gram_nu(s.space));
      break;
    case TypeTag::B:
    case TypeTag::C: {
      const bool iso = v2_isotropic(s);
      if (iso && !r.witt) {
        // e0 = v1/ε1 with ε1σ(ε1) = λ1; (e1, e-1) from the binary space V_2.
        const auto& v1 = s.blocks[0];
        const auto& v2 = s.blocks[1];
        const WittPair wp = witt_from_anisotropic_pair(s.space.restrict_to(v2), f.ramified());
        const ExtElement eps1 = solve_norm_equation(s.space.gram(v1[0], v1[0]).a());
        Vec e1(3, f.ext_zero()), e0(3, f.ext_zero()), em1(3, f.ext_zero());
        e0[size_t(v1[0])] = eps1.inv();
        for (int k = 0; k < 2; ++k) {
          e1[size_t(v2[size_t(k)])] = wp.e1[size_t(k)];
          em1[size_t(v2[size_t(k)])] = wp.em1[size_t(k)];
        }
        r.basis = Matrix::from_columns({e1, e0, em1});
        r.blocks = {{1}, {0, 2}};
        r.witt = true;
      }
      if (!iso) {
        r.seq = orthogonal_sequence(gram_nu(s.space));
      } else if (s.type == TypeTag::B) {
        r.seq = f.ramified() ? lambda2() : lambda3();
      } else {
        r.seq = f.ramified() ? witt_key("L2") : witt_key("L1");
        if (f.ramified() && r.seq.name != "L2")
          throw UnsupportedConfiguration("ramified type C strata use L2");
        if (r.seq.name != "L1" && r.seq.name != "L2")
          throw UnsupportedConfiguration("type C strata use L1 or L2");
      }
      break;
    }
  }
  if (!r.basis.field()) r.basis = Matrix::identity(f, 3);
  r.space.gram = r.basis.transpose() * s.space.gram * r.basis.conj();
  r.space.kind = r.witt ? BasisKind::witt : BasisKind::orthogonal;
  r.beta = r.basis.inverse() * s.beta * r.basis;
  r.seq = with_duality(r.seq, r.space);
  return r;
}

namespace {

int64_t q_of(const AttachedLattice& at, int i) {
  const Matrix& b = at.beta;
  bool zero = true;
  for (int x : at.blocks[size_t(i)])
    for (int y : at.blocks[size_t(i)]) zero = zero && b(x, y).is_zero();
  if (zero) return 0;
  return -nu_lambda_block(at.seq, b, at.blocks[size_t(i)]);
}

// n for type A from ν_F(det β), with E = F[β] cubic.
Invariants type_a_invariants(const Stratum& s) {
  const Field& f = s.f();
  const ExtElement d = s.beta.det();
  if (d.is_zero()) throw IndeterminateValuation("det β vanishes");
  const int64_t v = d.nu_F();
  Invariants inv;
  if (v % 3 != 0) {
    inv.n = -2 * v;  // E/F totally ramified, ν_E(β) = v
    inv.e = 6;
  } else {
    const Matrix scaled = s.beta * f.uniformizer().pow(-v / 3);
    Poly cp = char_poly(scaled);
    bool has_residue_root = false;
    for (const ExtElement& z : residue_reps(f)) {
      const ExtElement val = eval(cp, z);
      if (val.is_zero() || val.nu_F() > 0) has_residue_root = true;
    }
    if (has_residue_root)
      throw UnsupportedConfiguration("type A: ramification of F[β]/F not determined by det β");
    inv.n = -2 * v / 3;
    inv.e = 2;
  }
  inv.q = {inv.n};
  return inv;
}

}  // namespace

Invariants q_invariants(const Stratum& s) {
  if (s.type == TypeTag::A) return type_a_invariants(s);
  const AttachedLattice at = attach_lattice_sequence(s);
  Invariants inv;
  inv.e = at.seq.period;
  for (size_t i = 0; i < at.blocks.size(); ++i) inv.q.push_back(q_of(at, int(i)));
  if (s.type == TypeTag::depth_zero) {
    inv.q.clear();
    inv.n = 0;
    return inv;
  }
  inv.n = *std::max_element(inv.q.begin(), inv.q.end());
  return inv;
}

// ---------------------------------------------------------------------------
// Validation.

namespace {

std::string idx(int i) { return std::to_string(i + 1); }

bool is_unit(const ExtElement& x) { return !x.is_zero() && x.nu_F() == 0; }

void check_general(const Stratum& s, std::vector<std::string>& out) {
  const Field& f = s.f();
  for (auto& v : s.space.violations()) out.push_back(v);
  if (!out.empty()) return;
  if (s.space.dim() != 3 || s.beta.rows() != 3 || s.beta.cols() != 3) {
    out.push_back("dimension is not 3");
    return;
  }
  // Blocks partition {0, 1, 2}.
  std::vector<int> seen;
  for (const auto& b : s.blocks) seen.insert(seen.end(), b.begin(), b.end());
  std::sort(seen.begin(), seen.end());
  if (seen != std::vector<int>{0, 1, 2}) {
    out.push_back("splitting does not partition the basis");
    return;
  }
  auto block_of = [&](int i) {
    for (size_t k = 0; k < s.blocks.size(); ++k)
      if (std::find(s.blocks[k].begin(), s.blocks[k].end(), i) != s.blocks[k].end()) return k;
    return size_t(0);
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (block_of(i) == block_of(j)) continue;
      if (!s.space.gram(i, j).is_zero()) out.push_back("splitting is not orthogonal");
      if (!s.beta(i, j).is_zero()) out.push_back("β is not block-diagonal for the splitting");
    }
  if (!out.empty()) {
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return;
  }
  const ExtElement det = s.space.gram.det();
  if (!det.in_base() || !is_norm_class(-det.a()))
    out.push_back("discriminant: -det(h) is not a norm");

  if (s.space.kind == BasisKind::orthogonal) {
    for (int i = 0; i < 3; ++i) {
      const ExtElement& l = s.space.gram(i, i);
      if (!l.in_base()) {
        out.push_back("λ" + idx(i) + " not in F0");
        continue;
      }
      const int64_t v = l.nu_F();
      const bool ok = f.ramified() ? v == 0 : (v == 0 || v == 1);
      if (!ok) out.push_back("λ" + idx(i) + " not normalised (ν_F0 must be " +
                             (f.ramified() ? "0)" : "0 or 1)"));
    }
  }

  // Skewness of each component.
  for (size_t k = 0; k < s.blocks.size(); ++k) {
    const Matrix c = s.component(int(k));
    if (c.rows() == 1 || (s.type == TypeTag::C && k == 1)) {
      bool scalar = true;
      for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j)
          if (i == j ? c(i, j) != c(0, 0) : !c(i, j).is_zero()) scalar = false;
      if (!scalar) {
        out.push_back("β" + idx(int(k)) + " is not scalar on V" + idx(int(k)));
        continue;
      }
      if (!c(0, 0).is_skew()) out.push_back("skewness violated: σ(β" + idx(int(k)) + ") ≠ -β" + idx(int(k)));
    } else {
      const HermitianSpace sub = s.space.restrict_to(s.blocks[k]);
      if (!is_skew(sub, c)) out.push_back("skewness violated: σ_h(β" + idx(int(k)) + ") ≠ -β" + idx(int(k)));
    }
  }
}

void check_components(const Stratum& s, const Invariants& inv, std::vector<std::string>& out) {
  int zeros = 0;
  for (size_t k = 0; k < s.blocks.size(); ++k) {
    if (s.component(int(k)).is_zero()) {
      ++zeros;
      continue;
    }
    if (inv.q[k] <= 0)
      out.push_back("nonzero component β" + idx(int(k)) + " has q" + idx(int(k)) +
                    " <= 0 (not minimal)");
  }
  if (zeros > 1) out.push_back("more than one component is zero");
  if (inv.n <= 0) out.push_back("n must be positive");
}

void check_type_d(const Stratum& s, const Invariants& inv, std::vector<std::string>& out) {
  const ExtElement b[3] = {s.scalar(0), s.scalar(1), s.scalar(2)};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (b[i] == b[j]) {
        out.push_back("components not pairwise distinct");
        i = j = 3;
      }
  if (b[0].is_zero() || b[1].is_zero()) out.push_back("only β3 may be zero");
  if (!(inv.q[0] >= inv.q[1] && inv.q[1] >= inv.q[2] && inv.q[2] >= 0))
    out.push_back("ordering q1 >= q2 >= q3 >= 0 violated");
  if (!out.empty()) return;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      if (b[i].is_zero()) continue;
      const ExtElement u = b[i].field()->ext_one() - b[j] / b[i];
      if (!is_unit(u))
        out.push_back("(1 - β" + idx(j) + "β" + idx(i) + "^-1) is not a unit");
    }
}

void check_type_c(const Stratum& s, std::vector<std::string>& out) {
  const ExtElement b1 = s.scalar(0), b2 = s.scalar(1);
  if (b1 == b2) {
    out.push_back("components not pairwise distinct");
    return;
  }
  // The sum of the two blocks must not be equivalent to a simple stratum.
  const int64_t v1 = b1.is_zero() ? kInf : b1.nu_F(), v2 = b2.is_zero() ? kInf : b2.nu_F();
  if ((b1 - b2).nu_F() != std::min(v1, v2)) out.push_back("β1 - β2 is not minimal");
}

void check_type_b(const Stratum& s, const AttachedLattice& at, const Invariants& inv,
                  std::vector<std::string>& out) {
  const Field& f = s.f();
  if (s.scalar(0).is_zero()) out.push_back("β1 = 0 (type B needs a nonzero V1 component)");
  const Matrix b2 = s.component(1);
  const ExtElement tr = b2.trace(), det = b2.det();
  const ExtElement disc = tr * tr - det * f.ext_int(4);
  if (disc.is_zero() || is_square_ext(disc)) {
    out.push_back("F[β2] is not a quadratic field");
    return;
  }
  const bool odd = disc.nu_F() % 2 != 0;
  if (odd == f.ramified())
    out.push_back(std::string("F[β2]/F must be ") +
                  (f.ramified() ? "unramified" : "ramified") + " when F/F0 is " +
                  (f.ramified() ? "ramified" : "unramified"));
  if (!out.empty()) return;
  const int64_t q1 = inv.q[0], q2 = inv.q[1];
  if (q1 == q2) out.push_back("q1 = q2");
  auto mod = [](int64_t a, int64_t m) { return ((a % m) + m) % m; };
  if (f.ramified()) {
    if (mod(q2, 4) != 0 || mod(q1, 4) != 2) out.push_back("parity: ramified needs q2 ≡ 0, q1 ≡ 2 mod 4");
  } else if (v2_isotropic(s)) {
    if (mod(q2, 4) != 2 || mod(q1, 4) != 0)
      out.push_back("parity: unramified isotropic needs q2 ≡ 2, q1 ≡ 0 mod 4");
  } else {
    if (mod(q2, 2) != 1 || mod(q1, 2) != 0)
      out.push_back("parity: unramified anisotropic needs q2 odd, q1 even");
  }
  const auto& v2 = at.blocks[1];
  const LatticeSequence sub = restrict_to(at.seq, v2);
  const Matrix c = at.beta.block(v2);
  if (nu_lambda(sub, c.inverse()) != -nu_lambda(sub, c))
    out.push_back("β2 does not normalise Λ ∩ V2");
}

void check_type_a(const Stratum& s, std::vector<std::string>& out) {
  if (s.blocks.size() != 1) {
    out.push_back("type A has a single block");
    return;
  }
  if (!is_skew(s.space, s.beta)) out.push_back("skewness violated: σ_h(β) ≠ -β");
  if (has_root_in_F(char_poly(s.beta)))
    out.push_back("characteristic polynomial of β has a root in F (F[β] is not a field)");
}

bool shape_ok(const Stratum& s, std::vector<std::string>& out) {
  std::vector<size_t> dims;
  for (const auto& b : s.blocks) dims.push_back(b.size());
  bool ok = true;
  switch (s.type) {
    case TypeTag::D: ok = dims == std::vector<size_t>{1, 1, 1}; break;
    case TypeTag::B:
    case TypeTag::C: ok = dims == std::vector<size_t>{1, 2}; break;
    case TypeTag::A:
    case TypeTag::depth_zero: ok = dims == std::vector<size_t>{3}; break;
  }
  if (!ok) out.push_back(std::string("splitting does not match type ") + to_string(s.type));
  return ok;
}

}  // namespace

std::vector<std::string> validate(const Stratum& s) {
  std::vector<std::string> out;
  if (!s.field) return {"stratum has no field"};
  if (!shape_ok(s, out)) return out;
  check_general(s, out);
  if (!out.empty()) return out;
  if (s.type == TypeTag::depth_zero) {
    if (!s.beta.is_zero()) out.push_back("depth-zero stratum must have β = 0");
    try {
      attach_lattice_sequence(s);
    } catch (const Error& e) {
      out.push_back(e.what());
    }
    return out;
  }
  if (s.type == TypeTag::A) {
    check_type_a(s, out);
    if (!out.empty()) return out;
    try {
      if (q_invariants(s).n <= 0) out.push_back("n must be positive");
    } catch (const Error& e) {
      out.push_back(e.what());
    }
    return out;
  }
  if (s.type == TypeTag::C) check_type_c(s, out);
  if (!out.empty()) return out;
  AttachedLattice at;
  Invariants inv;
  try {
    at = attach_lattice_sequence(s);
    inv = q_invariants(s);
  } catch (const Error& e) {
    out.push_back(e.what());
    return out;
  }
  check_components(s, inv, out);
  if (s.type == TypeTag::D) check_type_d(s, inv, out);
  if (s.type == TypeTag::B) check_type_b(s, at, inv, out);
  return out;
}

}  // namespace u21
