#include "u21/padic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace u21 {

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int legendre(int64_t a, int64_t p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  int64_t r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

int64_t smallest_nonresidue(int64_t p) {
  for (int64_t a = 2; a < p; ++a)
    if (legendre(a, p) == -1) return a;
  return 0;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

int default_precision() {
  if (const char* env = std::getenv("U21_PRECISION")) {
    int v = std::atoi(env);
    if (v >= 8) return v;
  }
  return 24;
}

// ---------------------------------------------------------------- Field

Field::Field(const PrimeConfig& cfg) : cfg_(cfg) {
  if (cfg.p < 3 || !is_prime(cfg.p)) throw InvalidConfig("p must be an odd prime");
  if (cfg.precision < 8) throw InvalidConfig("precision must be at least 8");
  if (legendre(cfg.nonsquare_unit, cfg.p) != -1)
    throw InvalidConfig("nonsquare_unit is not a quadratic non-residue mod p");
  pow_.push_back(1);
  const u128 limit = u128(1) << 100;
  for (int k = 1; k <= cfg.precision; ++k) {
    if (pow_.back() > limit / u128(cfg.p)) throw InvalidConfig("p^precision exceeds 2^100");
    pow_.push_back(pow_.back() * u128(cfg.p));
  }
  small_ = pow_.back() < (u128(1) << 64);
}

std::shared_ptr<const Field> Field::make(const PrimeConfig& cfg) {
  return std::make_shared<const Field>(cfg);
}

u128 Field::mulmod(u128 a, u128 b, int k) const {
  const u128 m = pow_[k];
  if (small_ || m < (u128(1) << 64)) return (a % m) * (b % m) % m;
  a %= m;
  b %= m;
  u128 r = 0;
  for (int shift = 112; shift >= 0; shift -= 16) {
    r = ((r << 16) + a * ((b >> shift) & 0xFFFF)) % m;
  }
  return r;
}

u128 Field::invmod(u128 a, int k) const {
  const i128 m = i128(pow_[k]);
  i128 r0 = m, r1 = i128(a % pow_[k]), s0 = 0, s1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw DivisionByApparentZero("not a unit");
  s0 %= m;
  if (s0 < 0) s0 += m;
  return u128(s0);
}

BaseElement Field::zero() const { return BaseElement::exact_zero(this); }
BaseElement Field::one() const { return from_int(1); }
BaseElement Field::from_int(int64_t n) const { return BaseElement::make(this, n, 0, kInf); }
BaseElement Field::from_i128(i128 n) const { return BaseElement::make(this, n, 0, kInf); }
BaseElement Field::pi0_pow(int64_t k) const { return BaseElement::make(this, 1, k, kInf); }
BaseElement Field::delta_sq() const {
  return cfg_.ramified ? BaseElement::make(this, -1, 1, kInf) : from_int(cfg_.nonsquare_unit);
}

ExtElement Field::ext_zero() const { return ExtElement(zero()); }
ExtElement Field::ext_one() const { return ExtElement(one()); }
ExtElement Field::ext_int(int64_t n) const { return ExtElement(from_int(n)); }
ExtElement Field::delta() const { return {zero(), one()}; }
ExtElement Field::uniformizer() const {
  return cfg_.ramified ? delta() : ExtElement(pi0_pow(1));
}

// ---------------------------------------------------------- BaseElement

namespace {

// s * p^val known mod p^abs, with 0 <= s < p^(abs-val).
BaseElement normalize(const Field* f, u128 s, int64_t val, int64_t abs) {
  if (s == 0) return BaseElement::inexact_zero(f, abs);
  const u128 p = u128(f->p());
  while (s % p == 0) {
    s /= p;
    ++val;
  }
  if (val >= abs) return BaseElement::inexact_zero(f, abs);
  return BaseElement::make(f, i128(s), val, abs);
}

}  // namespace

BaseElement BaseElement::make(const Field* f, i128 digits, int64_t val, int64_t abs) {
  BaseElement r;
  r.f_ = f;
  if (digits == 0) {
    if (abs >= kInf) return exact_zero(f);
    return inexact_zero(f, abs);
  }
  const i128 p = f->p();
  while (digits % p == 0) {
    digits /= p;
    ++val;
  }
  if (abs < kInf && val >= abs) return inexact_zero(f, abs);
  int64_t rel = abs >= kInf ? f->N() : std::min<int64_t>(abs - val, f->N());
  i128 m = i128(f->pk(rel));
  i128 u = digits % m;
  if (u < 0) u += m;
  r.val_ = val;
  r.abs_ = val + rel;
  r.unit_ = u128(u);
  return r;
}

BaseElement BaseElement::exact_zero(const Field* f) {
  BaseElement r;
  r.f_ = f;
  return r;
}

BaseElement BaseElement::inexact_zero(const Field* f, int64_t abs) {
  BaseElement r;
  r.f_ = f;
  r.abs_ = abs;
  return r;
}

int64_t BaseElement::valuation() const {
  if (val_ == kInf && abs_ != kInf)
    throw IndeterminateValuation("all known digits vanish (O(p^" + std::to_string(abs_) + "))");
  return val_;
}

int64_t BaseElement::residue() const {
  if (is_zero()) return 0;
  return int64_t(unit_ % u128(f_->p()));
}

BaseElement BaseElement::operator-() const {
  if (is_zero()) return *this;
  BaseElement r = *this;
  const u128 m = f_->pk(rel_precision());
  r.unit_ = (m - unit_) % m;
  return r;
}

BaseElement BaseElement::operator+(const BaseElement& o) const {
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  const int64_t abs = std::min(abs_, o.abs_);
  if (is_zero()) return o.truncate(abs);
  if (o.is_zero()) return truncate(abs);
  const int64_t v = std::min(val_, o.val_);
  if (v >= abs) return inexact_zero(f_, abs);
  const int k = int(abs - v);
  const u128 m = f_->pk(k);
  auto term = [&](const BaseElement& x) -> u128 {
    int64_t s = x.val_ - v;
    if (s >= k) return 0;
    return f_->mulmod(x.unit_ % m, f_->pk(s), k);
  };
  u128 s = (term(*this) + term(o)) % m;
  return normalize(f_, s, v, abs);
}

BaseElement BaseElement::operator-(const BaseElement& o) const { return *this + (-o); }

BaseElement BaseElement::operator*(const BaseElement& o) const {
  if (is_exact_zero() || o.is_exact_zero()) return exact_zero(f_ ? f_ : o.f_);
  if (is_zero() && o.is_zero()) return inexact_zero(f_, abs_ + o.abs_);
  if (is_zero()) return inexact_zero(f_, abs_ + o.val_);
  if (o.is_zero()) return inexact_zero(f_, o.abs_ + val_);
  const int rel = int(std::min(rel_precision(), o.rel_precision()));
  BaseElement r;
  r.f_ = f_;
  r.val_ = val_ + o.val_;
  r.abs_ = r.val_ + rel;
  r.unit_ = f_->mulmod(unit_, o.unit_, rel);
  return r;
}

BaseElement BaseElement::inv() const {
  if (is_zero()) throw DivisionByApparentZero("inverse of an element indistinguishable from 0");
  const int rel = int(rel_precision());
  BaseElement r;
  r.f_ = f_;
  r.val_ = -val_;
  r.abs_ = r.val_ + rel;
  r.unit_ = f_->invmod(unit_, rel);
  return r;
}

BaseElement BaseElement::operator/(const BaseElement& o) const { return *this * o.inv(); }

BaseElement BaseElement::pow(int64_t k) const {
  if (k < 0) return inv().pow(-k);
  BaseElement r = f_->one(), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

BaseElement BaseElement::shift(int64_t k) const {
  if (is_exact_zero()) return *this;
  BaseElement r = *this;
  if (!is_zero()) r.val_ += k;
  r.abs_ += k;
  return r;
}

BaseElement BaseElement::truncate(int64_t abs) const {
  if (abs >= abs_) return *this;
  if (is_zero() || val_ >= abs) return inexact_zero(f_, abs);
  BaseElement r = *this;
  r.abs_ = abs;
  r.unit_ = unit_ % f_->pk(abs - val_);
  return r;
}

i128 BaseElement::signed_unit() const {
  if (is_zero()) return 0;
  const u128 m = f_->pk(rel_precision());
  if (unit_ > m / 2) return -i128(m - unit_);
  return i128(unit_);
}

i128 BaseElement::to_integer_mod(int64_t k) const {
  if (is_zero()) {
    if (abs_ < k) throw PrecisionExhausted("digits needed beyond precision");
    return 0;
  }
  if (val_ < 0) throw PrecisionExhausted("element is not integral");
  if (val_ >= k) return 0;
  if (abs_ < k) throw PrecisionExhausted("digits needed beyond precision");
  const int kk = int(k - val_);
  u128 u = unit_ % f_->pk(kk);
  // k <= N is assumed by callers; reduce into [0, p^k).
  return i128(f_->mulmod(u, f_->pk(val_), int(k)));
}

// ----------------------------------------------------------- ExtElement

ExtElement ExtElement::operator*(const ExtElement& o) const {
  const BaseElement d2 = field()->delta_sq();
  return {a_ * o.a_ + d2 * (b_ * o.b_), a_ * o.b_ + b_ * o.a_};
}

BaseElement ExtElement::norm() const {
  return a_ * a_ - field()->delta_sq() * (b_ * b_);
}

ExtElement ExtElement::inv() const {
  BaseElement n = norm();
  if (n.is_zero()) throw DivisionByApparentZero("inverse of an element indistinguishable from 0");
  BaseElement ni = n.inv();
  return {a_ * ni, -(b_ * ni)};
}

ExtElement ExtElement::pow(int64_t k) const {
  if (k < 0) return inv().pow(-k);
  ExtElement r = field()->ext_one(), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

namespace {

struct Cand {
  int64_t v;
  bool bound;
};

int64_t min_of(const Cand& x, const Cand& y, bool allow_bound) {
  int64_t nz = kInf, z = kInf;
  for (const Cand& c : {x, y}) {
    if (c.v >= kInf) continue;
    if (c.bound) z = std::min(z, c.v);
    else nz = std::min(nz, c.v);
  }
  if (allow_bound) return std::min(nz, z);
  if (nz == kInf && z == kInf) return kInf;
  if (nz <= z) return nz;
  throw IndeterminateValuation("valuation of a + bδ not determined by known digits");
}

}  // namespace

int64_t ExtElement::nu_F() const {
  auto scaled = [&](const BaseElement& x, int mul, int add) -> Cand {
    if (x.is_exact_zero()) return {kInf, false};
    if (x.is_zero()) return {mul * x.abs_precision() + add, true};
    return {mul * x.valuation() + add, false};
  };
  const bool ram = field()->ramified();
  Cand ca = scaled(a_, ram ? 2 : 1, 0), cb = scaled(b_, ram ? 2 : 1, ram ? 1 : 0);
  return min_of(ca, cb, false);
}

int64_t ExtElement::nu_F_bound() const {
  const bool ram = field()->ramified();
  auto s = [&](const BaseElement& x, int mul, int add) -> Cand {
    if (x.is_exact_zero()) return {kInf, false};
    return {mul * x.valuation_bound() + add, x.is_zero()};
  };
  return min_of(s(a_, ram ? 2 : 1, 0), s(b_, ram ? 2 : 1, ram ? 1 : 0), true);
}

HalfInt ExtElement::nu() const {
  int64_t v = nu_F();
  if (v >= kInf) throw IndeterminateValuation("valuation of exact zero");
  return HalfInt(v, field()->e());
}

// ------------------------------------------------------------ norm group

bool is_norm_class(const BaseElement& y) {
  if (y.is_zero()) throw IndeterminateValuation("norm class of zero");
  const int64_t v = y.valuation();
  const Field& f = *y.field();
  if (!f.ramified()) return v % 2 == 0;
  return legendre(y.residue(), f.p()) == 1;
}

int64_t char_level(const BaseElement& c) {
  if (c.is_zero()) throw IndeterminateValuation("character coefficient is zero");
  return -c.valuation();
}

bool is_square_base(const BaseElement& w) {
  if (w.is_zero()) throw IndeterminateValuation("square test of zero");
  return w.valuation() % 2 == 0 && legendre(w.residue(), w.field()->p()) == 1;
}

BaseElement base_sqrt(const BaseElement& w) {
  if (w.is_exact_zero()) return w;
  if (!is_square_base(w)) throw NoSolution("not a square in F0");
  const Field& f = *w.field();
  const int64_t v = w.valuation();
  const int64_t r0 = [&] {
    int64_t res = w.residue();
    for (int64_t r = 1; r < f.p(); ++r)
      if (r * r % f.p() == res) return r;
    return int64_t(0);
  }();
  BaseElement u = w.shift(-v);
  BaseElement x = f.from_int(r0);
  for (int64_t digits = 1; digits < 2 * f.N(); digits *= 2) x = (x + u / x).half();
  return x.truncate(u.abs_precision()).shift(v / 2);
}

bool is_square_ext(const ExtElement& z) {
  const Field& f = *z.field();
  const int64_t v = z.nu_F();
  if (v >= kInf) throw IndeterminateValuation("square test of zero");
  if (v % 2 != 0) return false;
  ExtElement u = f.ramified() ? z * ExtElement(f.delta_sq().pow(-v / 2))
                              : z * ExtElement(f.pi0_pow(-v));
  if (f.ramified()) return legendre(u.a().residue(), f.p()) == 1;
  return legendre(u.norm().residue(), f.p()) == 1;
}

std::pair<int64_t, int64_t> ext_residue(const ExtElement& u) {
  auto digit0 = [](const BaseElement& x) -> int64_t {
    if (x.is_zero()) return 0;
    if (x.valuation() < 0) throw PrecisionExhausted("residue of a non-integral element");
    return x.valuation() == 0 ? x.residue() : 0;
  };
  if (u.field()->ramified()) return {digit0(u.a()), 0};
  return {digit0(u.a()), digit0(u.b())};
}

ExtElement solve_norm_equation(const BaseElement& t) {
  if (t.is_zero()) throw IndeterminateValuation("norm equation with zero right side");
  const Field& f = *t.field();
  if (!is_norm_class(t)) throw NoSolution("element is not a norm from F");
  const int64_t k = t.valuation();
  const BaseElement u = t.shift(-k);
  if (f.ramified()) {
    // N(δ) = ϖ0, N(s) = s^2 for s in F0.
    return f.delta().pow(k) * ExtElement(base_sqrt(u));
  }
  const int64_t p = f.p(), D = f.config().nonsquare_unit;
  const int64_t ur = u.residue();
  for (int64_t a0 = 0; a0 < p; ++a0) {
    for (int64_t b0 = 0; b0 < p; ++b0) {
      if (((a0 * a0 - D * b0 * b0 - ur) % p + p) % p != 0) continue;
      const BaseElement Db = f.delta_sq();
      ExtElement eps;
      if (a0 != 0) {
        BaseElement b = f.from_int(b0);
        eps = ExtElement(base_sqrt(u + Db * b * b), b);
      } else {
        BaseElement a = f.zero();
        eps = ExtElement(a, base_sqrt((a * a - u) / Db));
      }
      return eps * ExtElement(f.pi0_pow(k / 2));
    }
  }
  throw NoSolution("no residue solution");
}

// -------------------------------------------------------------- literals

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool peek(char c) {
    ws();
    return i < s.size() && s[i] == c;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("bad element literal '" + s + "': " + what, 0, int(i) + 1);
  }
  i128 integer() {
    ws();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected integer");
    i128 v = 0;
    const i128 cap = (i128(1) << 120);
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i++] - '0');
      if (v > cap) fail("integer too large");
    }
    return neg ? -v : v;
  }
};

// term := ['-'] ( INT ['*' 'p' ['^' INT]] | 'p' ['^' INT] )
BaseElement parse_monomial(const Field& f, Lexer& lx) {
  bool neg = false;
  while (lx.peek('-') || lx.peek('+')) {
    if (lx.eat('-')) neg = !neg;
    else lx.eat('+');
  }
  i128 u = 1;
  bool have_p = false;
  lx.ws();
  if (lx.peek('p')) {
    have_p = true;
  } else {
    u = lx.integer();
    if (lx.peek('*')) {
      size_t save = lx.i;
      lx.eat('*');
      if (lx.peek('p')) have_p = true;
      else lx.i = save;
    }
  }
  int64_t k = 0;
  if (have_p) {
    lx.eat('p');
    k = 1;
    if (lx.eat('^')) {
      if (lx.eat('(')) {
        k = int64_t(lx.integer());
        if (!lx.eat(')')) lx.fail("expected ')'");
      } else {
        k = int64_t(lx.integer());
      }
    }
  }
  if (neg) u = -u;
  return BaseElement::make(&f, u, k, kInf);
}

// ext := sterm (('+'|'-') sterm)*, sterm := '(' ext ')' ['*' 'd'] | mono ['*' 'd'] | 'd'
ExtElement parse_sum(const Field& f, Lexer& lx);

ExtElement parse_term(const Field& f, Lexer& lx) {
  bool neg = false;
  while (lx.peek('-') || lx.peek('+')) {
    if (lx.eat('-')) neg = !neg;
    else lx.eat('+');
  }
  ExtElement v;
  if (lx.eat('(')) {
    v = parse_sum(f, lx);
    if (!lx.eat(')')) lx.fail("expected ')'");
  } else if (lx.peek('d')) {
    lx.eat('d');
    v = f.delta();
    if (neg) v = -v;
    return v;
  } else {
    v = ExtElement(parse_monomial(f, lx));
  }
  while (lx.peek('*')) {
    size_t save = lx.i;
    lx.eat('*');
    if (lx.eat('d')) {
      v = v * f.delta();
    } else if (lx.peek('(')) {
      v = v * parse_term(f, lx);
    } else {
      lx.i = save;
      break;
    }
  }
  return neg ? -v : v;
}

ExtElement parse_sum(const Field& f, Lexer& lx) {
  ExtElement acc = parse_term(f, lx);
  for (;;) {
    if (lx.peek('+')) {
      lx.eat('+');
      acc = acc + parse_term(f, lx);
    } else if (lx.peek('-')) {
      lx.eat('-');
      acc = acc - parse_term(f, lx);
    } else {
      return acc;
    }
  }
}

}  // namespace

ExtElement parse_ext(const Field& f, const std::string& text) {
  Lexer lx{text};
  ExtElement v = parse_sum(f, lx);
  lx.ws();
  if (lx.i != text.size()) lx.fail("trailing characters");
  return v;
}

BaseElement parse_base(const Field& f, const std::string& text) {
  ExtElement v = parse_ext(f, text);
  if (!v.b().is_zero()) throw ParseError("expected an element of F0, got a δ term: " + text);
  return v.a();
}

std::string format_base(const BaseElement& x) {
  if (x.is_zero()) return "0";
  return to_string(x.signed_unit()) + "*p^" + std::to_string(x.valuation());
}

std::string format_ext(const ExtElement& x) {
  if (x.b().is_zero()) return format_base(x.a());
  if (x.a().is_zero()) return "(" + format_base(x.b()) + ")*d";
  return "(" + format_base(x.a()) + ") + (" + format_base(x.b()) + ")*d";
}

}  // namespace u21
