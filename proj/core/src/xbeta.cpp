#include "u21/xbeta.hpp"

#include <numeric>
#include <sstream>

namespace u21 {

const char* to_string(XStatus x) { return x == XStatus::Empty ? "Empty" : "NonEmpty"; }

// ---------------------------------------------------------------------------
// Quadratic forms.

BaseElement QuadraticForm6::raw(const Point6& z) const {
  const Field* f = z[0].field();
  BaseElement acc = f->zero();
  if (zero) return acc;
  for (int u = 0; u < kVars; ++u)
    for (int w = 0; w < kVars; ++w)
      if (!S[size_t(u)][size_t(w)].is_exact_zero())
        acc = acc + S[size_t(u)][size_t(w)] * z[size_t(u)] * z[size_t(w)];
  return acc;
}

BaseElement QuadraticForm6::eval(const Point6& z) const {
  const BaseElement r = raw(z).shift(scale);
  return unit.valid() ? r * unit : r;
}

std::array<BaseElement, kVars> QuadraticForm6::gradient(const Point6& z) const {
  const Field* f = z[0].field();
  std::array<BaseElement, kVars> g;
  for (int u = 0; u < kVars; ++u) {
    BaseElement acc = f->zero();
    if (!zero)
      for (int w = 0; w < kVars; ++w)
        if (!S[size_t(u)][size_t(w)].is_exact_zero()) acc = acc + S[size_t(u)][size_t(w)] * z[size_t(w)];
    g[size_t(u)] = acc + acc;
  }
  return g;
}

namespace {

// Real part of v^T H σ(v), as a symmetric matrix in z, scaled to be primitive.
// H_ik = a + bδ contributes a(x_i x_k − D y_i y_k) + bD(y_i x_k − x_i y_k).
QuadraticForm6 real_form(const Field& f, const Matrix& H) {
  const BaseElement D = f.delta_sq();
  std::array<std::array<BaseElement, kVars>, kVars> C;
  for (auto& row : C) row.fill(f.zero());
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const BaseElement& a = H(i, k).a();
      const BaseElement& b = H(i, k).b();
      const size_t xi = size_t(2 * i), yi = xi + 1, xk = size_t(2 * k), yk = xk + 1;
      C[xi][xk] = C[xi][xk] + a;
      C[yi][yk] = C[yi][yk] - a * D;
      C[yi][xk] = C[yi][xk] + b * D;
      C[xi][yk] = C[xi][yk] - b * D;
    }
  QuadraticForm6 q;
  int64_t m = kInf;
  for (size_t u = 0; u < kVars; ++u)
    for (size_t w = 0; w < kVars; ++w) {
      q.S[u][w] = (C[u][w] + C[w][u]).half();
      if (!q.S[u][w].is_zero()) m = std::min(m, q.S[u][w].valuation());
    }
  if (m == kInf) {
    for (auto& row : q.S) row.fill(BaseElement::exact_zero(&f));
    q.zero = true;
    return q;
  }
  for (auto& row : q.S)
    for (auto& x : row) x = x.is_zero() ? BaseElement::exact_zero(&f) : x.shift(-m);
  q.scale = m;
  q.zero = false;
  return q;
}

}  // namespace

Point6 to_point(const Vec& v) {
  Point6 z;
  for (size_t i = 0; i < 3; ++i) {
    z[2 * i] = v[i].a();
    z[2 * i + 1] = v[i].b();
  }
  return z;
}

Vec from_point(const Field& f, const Point6& z) {
  (void)f;
  Vec v;
  for (size_t i = 0; i < 3; ++i) v.emplace_back(z[2 * i], z[2 * i + 1]);
  return v;
}

QuadricPairSystem assemble_system(const Stratum& s) {
  const Field& f = s.f();
  QuadricPairSystem sys;
  sys.field = s.field;
  const Matrix& G = s.space.gram;
  // h(v, βv) = v^T G σ(β) σ(v); δ·h(v, βv) = D·Q2 lies in F0 without dividing by δ.
  const Matrix H2 = G * s.beta.conj() * f.delta();
  sys.q1 = real_form(f, G);
  sys.q2 = real_form(f, H2);
  if (!sys.q2.zero) {
    // Q2 = δ·h(v, βv)/D.
    const BaseElement D = f.delta_sq();
    sys.q2.scale -= D.valuation();
    sys.q2.unit = D.shift(-D.valuation()).inv();
  }
  // Pencil members vanishing on each scalar block: on V_k, h(v, βv) = σ(c)h(v, v).
  for (size_t k = 0; k < s.blocks.size(); ++k) {
    const Matrix c = s.component(int(k));
    bool scalar = true;
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j)
        if (i == j ? c(i, j) != c(0, 0) : !c(i, j).is_zero()) scalar = false;
    if (!scalar || c(0, 0).is_zero() || s.blocks.size() == 1) continue;
    const ExtElement mu = c(0, 0).conj() * f.delta();  // D·σ(c)/δ
    QuadraticForm6 q = real_form(f, H2 - G * mu);
    if (!q.zero) sys.pencil.push_back(q);
  }
  return sys;
}

SystemShape system_shape(const QuadricPairSystem& sys) {
  SystemShape sh;
  std::vector<const QuadraticForm6*> members{&sys.q2};
  for (const QuadraticForm6& q : sys.pencil) members.push_back(&q);
  for (const QuadraticForm6* pq : members) {
    const QuadraticForm6& q = *pq;
    if (q.zero) continue;
    std::array<bool, kVars> used{};
    for (size_t u = 0; u < kVars; ++u)
      for (size_t w = 0; w < kVars; ++w)
        if (!q.S[u][w].is_zero()) used[u] = true;
    for (size_t i = 0; i < 3; ++i) {
      bool only_i = true;
      for (size_t u = 0; u < kVars; ++u)
        if (used[u] != (u / 2 == i)) only_i = false;
      if (only_i) sh.forced_zero[i] = true;
    }
  }
  if (sys.q2.zero) {
    sh.single = true;
    return sh;
  }
  auto free_var = [&](size_t u) { return !sh.forced_zero[u / 2]; };
  // Pivot on the entry of Q1 of least valuation among free variables.
  size_t pu = kVars, pw = kVars;
  for (size_t u = 0; u < kVars; ++u)
    for (size_t w = 0; w < kVars; ++w) {
      if (!free_var(u) || !free_var(w) || sys.q1.S[u][w].is_zero()) continue;
      if (pu == kVars || sys.q1.S[u][w].valuation() < sys.q1.S[pu][pw].valuation()) pu = u, pw = w;
    }
  if (pu == kVars) return sh;
  const BaseElement c = sys.q2.S[pu][pw] / sys.q1.S[pu][pw];
  bool prop = true;
  for (size_t u = 0; u < kVars && prop; ++u)
    for (size_t w = 0; w < kVars && prop; ++w)
      if (free_var(u) && free_var(w) && !(sys.q2.S[u][w] - c * sys.q1.S[u][w]).is_zero())
        prop = false;
  sh.single = prop;
  return sh;
}

// ---------------------------------------------------------------------------
// Criteria.

namespace {

std::string yesno(bool b) { return b ? "yes" : "no"; }

void require_valid(const Stratum& s) {
  const auto v = validate(s);
  if (!v.empty()) {
    std::string msg = "invalid stratum:";
    for (const auto& x : v) msg += " " + x + ";";
    throw UnsupportedConfiguration(msg);
  }
}

// β_i/δ ∈ F0 for a skew scalar.
BaseElement over_delta(const ExtElement& b) { return b.b(); }

}  // namespace

XStatus type_d_norm_vector_rule(const Stratum& s) {
  if (s.type != TypeTag::D) throw UnsupportedConfiguration("norm-vector rule is for type D");
  BaseElement l[3], b[3];
  for (int i = 0; i < 3; ++i) {
    l[i] = s.space.gram(s.blocks[size_t(i)][0], s.blocks[size_t(i)][0]).a();
    b[i] = over_delta(s.scalar(i));
  }
  const BaseElement k[3] = {l[1] * l[2] * (b[2] - b[1]), l[0] * l[2] * (b[0] - b[2]),
                            l[0] * l[1] * (b[1] - b[0])};
  for (int i = 0; i < 2; ++i)
    if (!is_norm_class(k[i] / k[2])) return XStatus::Empty;
  return XStatus::NonEmpty;
}

CriterionResult criterion_status(const Stratum& s) {
  require_valid(s);
  const Field& f = s.f();
  CriterionResult r;
  auto step = [&](std::string id, std::string rule, std::string in, XStatus st) {
    r.status = st;
    r.trace.push_back({std::move(id), std::move(rule), std::move(in), to_string(st)});
  };
  switch (s.type) {
    case TypeTag::depth_zero:
      step("depth-zero", "β = 0: every Borel subgroup lies in 𝔛_β", "n=0", XStatus::NonEmpty);
      break;
    case TypeTag::A:
      step("simple-nonempty", "F[β] a field: 𝔛_β(F0) is non-empty", "type=A", XStatus::NonEmpty);
      break;
    case TypeTag::C: {
      const bool iso = v2_isotropic(s);
      step("typeC-isotropy", "non-empty iff (V2, h) is isotropic", "isotropic=" + yesno(iso),
           iso ? XStatus::NonEmpty : XStatus::Empty);
      break;
    }
    case TypeTag::B: {
      const bool iso = v2_isotropic(s);
      const Invariants inv = q_invariants(s);
      const int64_t q1 = inv.q[0], q2 = inv.q[1];
      const std::string in = "q1=" + std::to_string(q1) + " q2=" + std::to_string(q2) +
                             " isotropic=" + yesno(iso) + " ramified=" + yesno(f.ramified());
      if (iso && q2 > q1)
        step(f.ramified() ? "typeB-ram-iso-q2>q1" : "typeB-unram-iso-q2>q1",
             "isotropic V2 and q2 > q1: h(ge1, βge1) ≠ 0 for all g", in, XStatus::Empty);
      else if (iso)
        step(f.ramified() ? "typeB-ram-iso-q1>=q2" : "typeB-unram-iso-q1>q2",
             "isotropic V2 and q1 > q2: -d1/d2 is a relative norm", in, XStatus::NonEmpty);
      else if (q1 > q2)
        step(f.ramified() ? "typeB-ram-aniso-q1>q2" : "typeB-unram-aniso-q1>q2",
             "anisotropic V2 and q1 > q2: ν_F(h(ge1, βge1)) = ν_F(β1)", in, XStatus::Empty);
      else
        step("typeB-aniso-q2>q1", "anisotropic V2 and q2 > q1: -d1/d2 is a relative norm", in,
             XStatus::NonEmpty);
      break;
    }
    case TypeTag::D: {
      BaseElement l[3];
      ExtElement b[3];
      for (int i = 0; i < 3; ++i) {
        l[i] = s.space.gram(s.blocks[size_t(i)][0], s.blocks[size_t(i)][0]).a();
        b[i] = s.scalar(i);
      }
      if (!f.ramified()) {
        const int64_t dv = b[0].nu_F() - b[1].nu_F();
        const bool odd = dv % 2 != 0;
        std::ostringstream in;
        in << "ν_F(β1)-ν_F(β2)=" << dv << " ν(λ)=(" << l[0].valuation() << ","
           << l[1].valuation() << "," << l[2].valuation() << ")";
        const bool units = l[0].valuation() == 0 && l[1].valuation() == 0 && l[2].valuation() == 0;
        if (units)
          step("typeD-unram-uniform", "non-empty iff ν_F(β1) - ν_F(β2) is even", in.str(),
               odd ? XStatus::Empty : XStatus::NonEmpty);
        else
          step("typeD-unram-nonuniform",
               "non-empty iff ν_F(λ2) = ν_F(λ3) = 1 and ν_F(β1) - ν_F(β2) is odd", in.str(),
               (l[1].valuation() == 1 && l[2].valuation() == 1 && odd) ? XStatus::NonEmpty
                                                                        : XStatus::Empty);
      } else {
        const ExtElement one = f.ext_one();
        const ExtElement c1 = -(one - b[1] / b[0]) / (one - b[2] / b[0]) *
                              ExtElement(l[1] / l[2]);
        const ExtElement c2 = ExtElement(l[2] / l[0]) * (b[1] / b[0]) * (one - b[2] / b[1]) /
                              (one - b[1] / b[0]);
        const bool n1 = is_norm_class(c1.a()), n2 = is_norm_class(c2.a());
        std::string in = "c1=" + format_base(c1.a()) + " c2=" + format_base(c2.a());
        if (!n1)
          step("typeD-ram-case1", "c1 = -(1-β2/β1)(1-β3/β1)^-1 λ2/λ3 is not a norm", in,
               XStatus::Empty);
        else if (!n2)
          step("typeD-ram-case2", "c1 is a norm and c2 = (λ3/λ1)(β2/β1)(1-β3/β2)(1-β2/β1)^-1 is not",
               in, XStatus::Empty);
        else
          step("typeD-ram-nonempty", "c1 and c2 are norms", in, XStatus::NonEmpty);
      }
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Relative norm criterion for type B.

namespace {

// Elements s + tβ2 of E = F[β2], with β2^2 = tr·β2 - det.
struct EPair {
  ExtElement s, t;
};

struct EArith {
  ExtElement tr, det;
  EPair mul(const EPair& x, const EPair& y) const {
    const ExtElement bd = x.t * y.t;
    return {x.s * y.s - bd * det, x.s * y.t + x.t * y.s + bd * tr};
  }
  // N_{E/F}.
  ExtElement norm(const EPair& x) const {
    return x.s * x.s + x.s * x.t * tr + x.t * x.t * det;
  }
  EPair inv(const EPair& x) const {
    const ExtElement n = norm(x).inv();
    return {(x.s + x.t * tr) * n, -x.t * n};
  }
  // σ_h(s + tβ2) = σ(s) - σ(t)β2.
  EPair sigma_h(const EPair& x) const { return {x.s.conj(), -x.t.conj()}; }
  EPair rel_norm(const EPair& x) const { return mul(x, sigma_h(x)); }
};

std::vector<ExtElement> residue_units(const Field& f) {
  std::vector<ExtElement> out;
  const int64_t p = f.p();
  if (f.ramified()) {
    for (int64_t a = 1; a < p; ++a) out.push_back(f.ext_int(a));
  } else {
    for (int64_t a = 0; a < p; ++a)
      for (int64_t b = 0; b < p; ++b)
        if (a || b) out.emplace_back(f.from_int(a), f.from_int(b));
  }
  return out;
}

}  // namespace

bool relative_norm_test(const Stratum& s) {
  if (s.type != TypeTag::B) throw UnsupportedConfiguration("relative norm test is for type B");
  const Field& f = s.f();
  const ExtElement beta1 = s.scalar(0);
  const Matrix b2 = s.component(1);
  const HermitianSpace v2 = s.space.restrict_to(s.blocks[1]);
  const int l1 = s.blocks[0][0];
  const BaseElement lambda1 = s.space.gram(l1, l1).a();
  EArith E{b2.trace(), b2.det()};

  // h'(v0, v0) = a = s + tβ2 from λ(a) = h(v0, v0), λ(β2 a) = h(β2 v0, v0).
  const ExtElement h00 = v2.gram(0, 0);
  const ExtElement hb0 = b2(0, 0) * v2.gram(0, 0) + b2(1, 0) * v2.gram(1, 0);
  const ExtElement m11 = f.ext_one(), m12 = beta1, m21 = beta1, m22 = E.tr * beta1 - E.det;
  const ExtElement det = m11 * m22 - m12 * m21;
  const EPair a{(h00 * m22 - m12 * hb0) / det, (m11 * hb0 - m21 * h00) / det};
  EPair y = E.mul(a, {ExtElement(-lambda1.inv()), f.ext_zero()});
  const EPair ys = E.sigma_h(y);
  if (ys.s != y.s || ys.t != y.t) throw ConstraintViolated("h'(v0, v0) is not fixed by σ_h");

  // Bring ν(N_{E/F}(y)) into [0, 4) using Nr(ϖ^k) ∈ F0.
  const ExtElement pi = f.uniformizer();
  const BaseElement nr_pi = pi.norm();
  int64_t vy = E.norm(y).nu_F();
  const int64_t k = floor_div(vy, 4);
  y = E.mul(y, {ExtElement(nr_pi.pow(-k)), f.ext_zero()});
  vy -= 4 * k;

  const int64_t db = E.det.nu_F();
  const int64_t j0 = -floor_div(db, 2);
  const auto units = residue_units(f);
  std::vector<ExtElement> reps = units;
  reps.push_back(f.ext_zero());
  bool matched_valuation = false;
  int64_t reach = 4;  // valuations of enumerated relative norms generate reach·Z
  for (int64_t i = 0; i <= 1; ++i)
    for (int64_t j = j0 - 2; j <= j0 + 2; ++j) {
      const ExtElement pij = pi.pow(j);
      for (const ExtElement& s0 : reps)
        for (const ExtElement& t0 : reps) {
          if (s0.is_zero() && t0.is_zero()) continue;
          const EPair x = E.mul({pi.pow(i), f.ext_zero()}, {s0, t0 * pij});
          const EPair nx = E.rel_norm(x);
          const ExtElement nn = E.norm(nx);
          if (nn.is_zero()) continue;
          reach = std::gcd(reach, nn.nu_F());
          if (nn.nu_F() != vy) continue;
          matched_valuation = true;
          EPair z = E.mul(y, E.inv(nx));
          z.s = z.s - f.ext_one();
          const ExtElement nz = E.norm(z);
          if (nz.is_zero() || nz.nu_F() > 0) return true;
        }
    }
  // The window contains units and uniformizers of F[β2], so reach is exact.
  if (!matched_valuation && vy % reach != 0) return false;
  if (!matched_valuation)
    throw InconclusiveEnumeration("no enumerated relative norm has the valuation of -d1/d2");
  return false;
}

// ---------------------------------------------------------------------------
// Hensel lifting.

namespace {

int max_precision(int64_t p) {
  const u128 limit = u128(1) << 100;
  u128 x = 1;
  int n = 0;
  while (x <= limit / u128(p)) {
    x *= u128(p);
    ++n;
  }
  return n;
}

int64_t vb(const BaseElement& x) { return x.is_zero() ? x.abs_precision() : x.valuation(); }

BaseElement lift_to(const Field* g, const BaseElement& x) {
  if (x.is_zero()) return BaseElement::exact_zero(g);
  return BaseElement::make(g, x.signed_unit(), x.valuation(), kInf);
}

struct Jac {
  std::array<BaseElement, kVars> g1, g2;
  bool single = false;  // Q2 follows from Q1
  std::array<bool, kVars> usable{};
};

struct Minor {
  int u = 0, w = 0;
  int64_t t = kInf;
};

Minor best_minor(const Jac& J) {
  Minor best;
  if (J.single) {
    for (int u = 0; u < kVars; ++u)
      if (J.usable[size_t(u)] && !J.g1[size_t(u)].is_zero() &&
          J.g1[size_t(u)].valuation() < best.t) {
        best.u = best.w = u;
        best.t = J.g1[size_t(u)].valuation();
      }
    return best;
  }
  for (int u = 0; u < kVars; ++u)
    for (int w = u + 1; w < kVars; ++w) {
      if (!J.usable[size_t(u)] || !J.usable[size_t(w)]) continue;
      const BaseElement m = J.g1[size_t(u)] * J.g2[size_t(w)] - J.g1[size_t(w)] * J.g2[size_t(u)];
      if (!m.is_zero() && m.valuation() < best.t) best = {u, w, m.valuation()};
    }
  return best;
}

QuadraticForm6 form_in(const Field* g, const QuadraticForm6& q) {
  QuadraticForm6 r = q;
  r.unit = BaseElement();
  for (auto& row : r.S)
    for (auto& x : row) x = x.is_exact_zero() ? BaseElement::exact_zero(g) : lift_to(g, x);
  return r;
}

BaseElement raw(const QuadraticForm6& q, const Point6& z) { return q.raw(z); }

}  // namespace

HenselOutcome hensel_check(const QuadricPairSystem& sys, const Witness& w) {
  HenselOutcome out;
  const SystemShape shape = system_shape(sys);
  const bool single = shape.single;
  Point6 z = w.point;
  Jac J;
  for (size_t u = 0; u < kVars; ++u) {
    J.usable[u] = !shape.forced_zero[u / 2];
    if (J.usable[u]) continue;
    if (!z[u].is_zero()) return out;  // off the reduced system
    z[u] = BaseElement::exact_zero(z[u].field());
  }
  const int64_t m = std::min(vb(raw(sys.q1, z)), single ? kInf : vb(raw(sys.q2, z)));
  J.g1 = sys.q1.gradient(z);
  J.g2 = sys.q2.gradient(z);
  J.single = single;
  const Minor mn = best_minor(J);
  out.best_m = m;
  out.best_t = mn.t;
  if (mn.t == kInf || !(m > 2 * mn.t)) return out;

  // Newton iteration in a field carrying 2t + 2 extra digits.
  const Field& f = *sys.field;
  PrimeConfig cfg = f.config();
  cfg.precision = std::min(max_precision(f.p()), f.N() + 2 * int(mn.t) + 2);
  FieldPtr g = Field::make(cfg);
  const QuadraticForm6 q1 = form_in(g.get(), sys.q1), q2 = form_in(g.get(), sys.q2);
  Point6 x;
  for (size_t i = 0; i < kVars; ++i) x[i] = lift_to(g.get(), z[i]);
  const int64_t target = std::min<int64_t>(f.N(), cfg.precision - 2 * mn.t);
  int64_t level = 0;
  for (int it = 0; it < 64; ++it) {
    const BaseElement r1 = raw(q1, x), r2 = raw(q2, x);
    level = std::min(vb(r1), q2.zero ? kInf : vb(r2));
    if (level >= target) break;
    const auto a1 = q1.gradient(x);
    const size_t u = size_t(mn.u), v = size_t(mn.w);
    if (single) {
      x[u] = x[u] - r1 / a1[u];
      continue;
    }
    const auto a2 = q2.gradient(x);
    const BaseElement d = a1[u] * a2[v] - a1[v] * a2[u];
    x[u] = x[u] - (a2[v] * r1 - a1[v] * r2) / d;
    x[v] = x[v] - (a1[u] * r2 - a2[u] * r1) / d;
  }
  if (level < target) return out;
  HenselCertificate c;
  c.minor_rows = {0, single ? 0 : 1};
  c.minor_cols = {mn.u, mn.w};
  c.minor_valuation = mn.t;
  c.residual_level = m;
  c.lifted = x;
  c.lifted_level = level;
  c.lifted_field = g;
  out.certificate = c;
  return out;
}

std::string format_witness(const Witness& w) {
  std::ostringstream os;
  os << "point =";
  for (const auto& x : w.point) os << " " << format_base(x);
  os << "\nresidual_level = " << w.residual_level << "\n";
  if (w.certificate) {
    const auto& c = *w.certificate;
    os << "certified = yes\nminor_rows = " << c.minor_rows[0] << " " << c.minor_rows[1]
       << "\nminor_cols = " << c.minor_cols[0] << " " << c.minor_cols[1]
       << "\nminor_valuation = " << c.minor_valuation << "\nlifted_level = " << c.lifted_level
       << "\n";
  } else {
    os << "certified = no\n";
  }
  return os.str();
}

}  // namespace u21
