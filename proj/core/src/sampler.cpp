#include "u21/sampler.hpp"

#include <algorithm>

namespace u21 {

namespace {

struct Draw {
  std::mt19937_64& g;
  FieldPtr fp;
  const Field& f;
  int vmax;

  int64_t uniform(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(g);
  }
  bool coin(int n = 2) { return uniform(0, n - 1) == 0; }

  BaseElement unit() {
    int64_t a;
    do a = uniform(-200, 200);
    while (a % f.p() == 0);
    return f.from_int(a);
  }
  ExtElement ext_unit() {
    for (;;) {
      const ExtElement x(f.from_int(uniform(-200, 200)), f.from_int(uniform(-200, 200)));
      if (!x.is_zero() && x.nu_F() == 0) return x;
    }
  }
  // λ normalised: a unit, or p times a unit when F/F0 is unramified.
  BaseElement lambda() {
    const BaseElement u = unit();
    return !f.ramified() && coin(3) ? u.shift(1) : u;
  }
  // Skew scalar δ·c with ν_F in [-vmax, hi].
  ExtElement skew(int64_t hi = -1) {
    for (;;) {
      const int64_t k = uniform(-vmax, vmax);
      const ExtElement x = f.delta() * unit().shift(k);
      const int64_t v = x.nu_F();
      if (v >= -vmax && v <= hi) return x;
    }
  }
  // Element of F with ν_F in [-vmax, vmax].
  ExtElement any() {
    return f.delta().pow(uniform(-vmax, vmax)) * ext_unit();
  }
  ExtElement any_skew_or_zero() { return coin(3) ? f.ext_zero() : skew(vmax); }
};

Stratum draw_d(Draw& d) {
  std::vector<BaseElement> l = {d.lambda(), d.lambda(), d.lambda()};
  std::vector<ExtElement> b = {d.skew(), d.skew(), d.coin(3) ? d.f.ext_zero() : d.skew()};
  // Order by valuation so the q-ordering holds more often.
  std::sort(b.begin(), b.end(), [](const ExtElement& x, const ExtElement& y) {
    const int64_t vx = x.is_zero() ? kInf : x.nu_F(), vy = y.is_zero() ? kInf : y.nu_F();
    return vx < vy;
  });
  return make_type_d(d.fp, l, b);
}

Stratum draw_c(Draw& d) {
  const ExtElement b1 = d.coin(4) ? d.f.ext_zero() : d.skew();
  const ExtElement b2 = b1.is_zero() || d.coin(4) ? d.skew() : (d.coin(3) ? d.f.ext_zero() : d.skew());
  if (d.coin(3)) {
    std::string key;
    if (!d.f.ramified()) key = d.coin() ? "L1" : "L2";
    return make_type_c_witt(d.fp, b1, b2, key);
  }
  return make_type_c(d.fp, {d.lambda(), d.lambda(), d.lambda()}, b1, b2);
}

Stratum draw_b(Draw& d) {
  const Field& f = d.f;
  const ExtElement b1 = d.skew();
  if (d.coin()) {
    // Witt basis (e1, e-1): [[x, y], [z, -σ(x)]] with y, z ∈ δF0.
    Matrix m(f, 2, 2);
    const ExtElement x = d.coin() ? f.ext_zero() : d.any();
    m(0, 0) = x;
    m(1, 1) = -x.conj();
    m(0, 1) = d.skew(d.vmax);
    m(1, 0) = d.skew(d.vmax);
    return make_type_b_witt(d.fp, b1, m);
  }
  // Orthogonal (λ2, λ3): [[x, y], [-σ(y)λ2/λ3, w]] with x, w ∈ δF0.
  const BaseElement l1 = d.lambda(), l2 = d.lambda(), l3 = d.lambda();
  Matrix m(f, 2, 2);
  const ExtElement y = d.any();
  m(0, 1) = y;
  m(1, 0) = -y.conj() * ExtElement(l2 / l3);
  m(0, 0) = d.coin() ? f.ext_zero() : d.any_skew_or_zero();
  m(1, 1) = d.coin() ? m(0, 0) : d.any_skew_or_zero();
  return make_type_b(d.fp, {l1, l2, l3}, b1, m);
}

bool usable(const Stratum& s) {
  try {
    if (!validate(s).empty()) return false;
    q_invariants(s);
    attach_lattice_sequence(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

Stratum sample_stratum(std::mt19937_64& rng, const FieldPtr& f, TypeTag type, int max_valuation,
                       int max_attempts) {
  Draw d{rng, f, *f, max_valuation};
  for (int i = 0; i < max_attempts; ++i) {
    Stratum s;
    switch (type) {
      case TypeTag::B: s = draw_b(d); break;
      case TypeTag::C: s = draw_c(d); break;
      case TypeTag::D: s = draw_d(d); break;
      default: throw UnsupportedConfiguration("sampler covers types B, C and D");
    }
    if (usable(s)) return s;
  }
  throw InconclusiveEnumeration("no valid stratum after " + std::to_string(max_attempts) +
                                " draws");
}

Stratum sample_stratum(std::mt19937_64& rng, const SampleOptions& opt) {
  const FieldPtr f =
      Field::make({opt.p, opt.ramified, smallest_nonresidue(opt.p), opt.precision});
  return sample_stratum(rng, f, opt.type, opt.max_valuation, opt.max_attempts);
}

std::pair<ExtElement, ExtElement> random_unipotent_pair(std::mt19937_64& rng, const Field& f,
                                                        int64_t nu) {
  auto uni = [&](int64_t lo, int64_t hi) { return std::uniform_int_distribution<int64_t>(lo, hi)(rng); };
  ExtElement x = f.ext_zero();
  if (nu < kInf) {
    ExtElement u;
    do u = ExtElement(f.from_int(uni(-200, 200)), f.from_int(uni(-200, 200)));
    while (u.is_zero() || u.nu_F() != 0);
    x = f.uniformizer().pow(nu) * u;
  }
  // y = -x·σ(x)/2 + δ·t with t ∈ o_F0.
  const ExtElement y = -(x * x.conj()).half() + f.delta() * ExtElement(f.from_int(uni(-200, 200)));
  return {x, y};
}

Matrix random_group_element(std::mt19937_64& rng, const Field& f, int factors) {
  auto uni = [&](int64_t lo, int64_t hi) { return std::uniform_int_distribution<int64_t>(lo, hi)(rng); };
  auto ext_unit = [&] {
    for (;;) {
      const ExtElement x(f.from_int(uni(-200, 200)), f.from_int(uni(-200, 200)));
      if (!x.is_zero() && x.nu_F() == 0) return x;
    }
  };
  Matrix g = Matrix::identity(f, 3);
  for (int k = 0; k < factors; ++k) {
    switch (uni(0, 2)) {
      case 0:
      case 1: {
        const auto [c, d] = random_unipotent_pair(rng, f, uni(0, 2));
        g = g * make_unipotent(c, d, uni(0, 1) == 0 ? Side::upper : Side::lower);
        break;
      }
      default: {
        const ExtElement w = ext_unit();
        g = g * make_torus(ext_unit(), w / w.conj());
        break;
      }
    }
  }
  return g;
}

}  // namespace u21
