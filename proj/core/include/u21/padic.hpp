#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "u21/errors.hpp"

namespace u21 {

using u128 = unsigned __int128;
using i128 = __int128;
using HalfInt = boost::rational<long long>;

inline constexpr int64_t kInf = INT64_MAX / 4;

struct PrimeConfig {
  int64_t p = 5;
  bool ramified = false;
  int64_t nonsquare_unit = 2;
  int precision = 24;
};

bool is_prime(int64_t n);
int legendre(int64_t a, int64_t p);
int64_t smallest_nonresidue(int64_t p);
std::string to_string(i128 v);

// Default precision, overridable through U21_PRECISION.
int default_precision();

class BaseElement;
class ExtElement;

// Immutable arithmetic context shared by all elements of F0 and F.
class Field {
 public:
  explicit Field(const PrimeConfig& cfg);
  static std::shared_ptr<const Field> make(const PrimeConfig& cfg);

  const PrimeConfig& config() const { return cfg_; }
  int64_t p() const { return cfg_.p; }
  int N() const { return cfg_.precision; }
  bool ramified() const { return cfg_.ramified; }
  int e() const { return cfg_.ramified ? 2 : 1; }

  u128 pk(int64_t k) const { return pow_[k]; }
  u128 mulmod(u128 a, u128 b, int k) const;
  u128 invmod(u128 a, int k) const;

  BaseElement zero() const;
  BaseElement one() const;
  BaseElement from_int(int64_t n) const;
  BaseElement from_i128(i128 n) const;
  BaseElement pi0_pow(int64_t k) const;
  BaseElement delta_sq() const;

  ExtElement ext_zero() const;
  ExtElement ext_one() const;
  ExtElement ext_int(int64_t n) const;
  ExtElement delta() const;
  // ϖ: δ in the ramified model, ϖ0 in the unramified one.
  ExtElement uniformizer() const;

 private:
  PrimeConfig cfg_;
  std::vector<u128> pow_;
  bool small_;  // p^N < 2^64
};

using FieldPtr = std::shared_ptr<const Field>;

// Element p^val * unit of F0, with unit known modulo p^(abs - val).
// val == kInf marks zero; abs == kInf additionally marks it exact.
class BaseElement {
 public:
  BaseElement() = default;

  static BaseElement make(const Field* f, i128 digits, int64_t val, int64_t abs);
  static BaseElement exact_zero(const Field* f);
  static BaseElement inexact_zero(const Field* f, int64_t abs);

  const Field* field() const { return f_; }
  bool valid() const { return f_ != nullptr; }
  bool is_zero() const { return val_ == kInf; }
  bool is_exact_zero() const { return val_ == kInf && abs_ == kInf; }
  int64_t abs_precision() const { return abs_; }
  int64_t rel_precision() const { return is_zero() ? 0 : abs_ - val_; }
  // Throws IndeterminateValuation on an inexact zero; kInf for exact zero.
  int64_t valuation() const;
  // Lower bound usable for inexact zeros.
  int64_t valuation_bound() const { return is_zero() ? abs_ : val_; }
  u128 unit() const { return unit_; }
  int64_t residue() const;  // unit part mod p

  BaseElement operator-() const;
  BaseElement operator+(const BaseElement& o) const;
  BaseElement operator-(const BaseElement& o) const;
  BaseElement operator*(const BaseElement& o) const;
  BaseElement operator/(const BaseElement& o) const;
  BaseElement inv() const;
  BaseElement pow(int64_t k) const;
  BaseElement shift(int64_t k) const;  // times p^k
  BaseElement truncate(int64_t abs) const;
  BaseElement half() const { return *this / f_->from_int(2); }

  // Equal to working precision.
  bool operator==(const BaseElement& o) const { return (*this - o).is_zero(); }
  bool operator!=(const BaseElement& o) const { return !(*this == o); }

  // Balanced integer representative of the unit digits.
  i128 signed_unit() const;
  // Integer x with x == this mod p^k, for val >= 0.
  i128 to_integer_mod(int64_t k) const;

 private:
  const Field* f_ = nullptr;
  int64_t val_ = kInf;
  int64_t abs_ = kInf;
  u128 unit_ = 0;
};

// a + b*δ in F.
class ExtElement {
 public:
  ExtElement() = default;
  ExtElement(BaseElement a, BaseElement b) : a_(std::move(a)), b_(std::move(b)) {}
  explicit ExtElement(const BaseElement& a) : a_(a), b_(BaseElement::exact_zero(a.field())) {}

  const Field* field() const { return a_.field(); }
  const BaseElement& a() const { return a_; }
  const BaseElement& b() const { return b_; }
  bool valid() const { return a_.valid(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_exact_zero() const { return a_.is_exact_zero() && b_.is_exact_zero(); }
  bool in_base() const { return b_.is_zero(); }
  bool is_skew() const { return a_.is_zero(); }

  ExtElement operator-() const { return {-a_, -b_}; }
  ExtElement operator+(const ExtElement& o) const { return {a_ + o.a_, b_ + o.b_}; }
  ExtElement operator-(const ExtElement& o) const { return {a_ - o.a_, b_ - o.b_}; }
  ExtElement operator*(const ExtElement& o) const;
  ExtElement operator*(const BaseElement& s) const { return {a_ * s, b_ * s}; }
  ExtElement operator/(const ExtElement& o) const { return *this * o.inv(); }
  ExtElement inv() const;
  ExtElement pow(int64_t k) const;
  ExtElement conj() const { return {a_, -b_}; }
  BaseElement norm() const;
  BaseElement trace() const { return a_ + a_; }
  ExtElement half() const { return {a_.half(), b_.half()}; }

  // Integer normalisation ν_F; kInf for exact zero.
  int64_t nu_F() const;
  int64_t nu_F_bound() const;
  // ν_{F/F0} = ν_F / e.
  HalfInt nu() const;

  bool operator==(const ExtElement& o) const { return (*this - o).is_zero(); }
  bool operator!=(const ExtElement& o) const { return !(*this == o); }

 private:
  BaseElement a_, b_;
};

inline ExtElement conj(const ExtElement& x) { return x.conj(); }
inline BaseElement ext_norm(const ExtElement& x) { return x.norm(); }
inline BaseElement ext_trace(const ExtElement& x) { return x.trace(); }
inline HalfInt ext_valuation(const ExtElement& x) { return x.nu(); }

bool is_norm_class(const BaseElement& y);
int64_t char_level(const BaseElement& c);

// Square root in F0 of an element of even valuation with square residue.
BaseElement base_sqrt(const BaseElement& w);
bool is_square_base(const BaseElement& w);
bool is_square_ext(const ExtElement& z);
// Some ε with ε·σ(ε) = t; NoSolution when t is not a norm.
ExtElement solve_norm_equation(const BaseElement& t);

// Residue class of a unit of F as (a mod p, b mod p); ramified fields give b = 0.
std::pair<int64_t, int64_t> ext_residue(const ExtElement& u);

// Literal syntax: u*p^k for F0, (u1*p^k1) + (u2*p^k2)*d for F.
BaseElement parse_base(const Field& f, const std::string& text);
ExtElement parse_ext(const Field& f, const std::string& text);
std::string format_base(const BaseElement& x);
std::string format_ext(const ExtElement& x);

}  // namespace u21
