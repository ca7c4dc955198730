#include "u21/lattice.hpp"

#include <algorithm>
#include <numeric>

namespace u21 {

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

int64_t LatticeSequence::c(int i, int64_t n) const {
  const int64_t k = floor_div(n, period);
  return exps[size_t(n - k * period)][size_t(i)] + k;
}

std::vector<int64_t> LatticeSequence::at(int64_t n) const {
  std::vector<int64_t> r;
  for (int i = 0; i < dim(); ++i) r.push_back(c(i, n));
  return r;
}

std::vector<std::string> LatticeSequence::violations() const {
  std::vector<std::string> out;
  for (int i = 0; i < dim(); ++i)
    for (int64_t n = 0; n < period; ++n)
      if (c(i, n + 1) < c(i, n)) {
        out.push_back("sequence is not decreasing");
        return out;
      }
  return out;
}

bool LatticeSequence::same_as(const LatticeSequence& o) const {
  if (dim() != o.dim()) return false;
  const int64_t l = std::lcm(int64_t(period), int64_t(o.period));
  for (int64_t n = 0; n < l; ++n)
    if (at(n) != o.at(n)) return false;
  return true;
}

namespace {

LatticeSequence from_fn(const std::string& name, int period,
                        const std::vector<int64_t (*)(int64_t)>& fns) {
  LatticeSequence L;
  L.name = name;
  L.period = period;
  for (int64_t k = 0; k < period; ++k) {
    std::vector<int64_t> row;
    for (auto fn : fns) row.push_back(fn(k));
    L.exps.push_back(row);
  }
  L.duality_shift = -1;
  return L;
}

}  // namespace

LatticeSequence lambda1() {
  return from_fn("L1", 2,
                 {[](int64_t n) { return ceil_div(n, 2); }, [](int64_t n) { return ceil_div(n, 2); },
                  [](int64_t n) { return ceil_div(n, 2); }});
}

LatticeSequence lambda2() {
  return from_fn("L2", 2,
                 {[](int64_t n) { return floor_div(n, 2); }, [](int64_t n) { return ceil_div(n, 2); },
                  [](int64_t n) { return ceil_div(n + 1, 2); }});
}

LatticeSequence lambda3() {
  return from_fn("L3", 4,
                 {[](int64_t n) { return ceil_div(n - 1, 4); }, [](int64_t n) { return ceil_div(n, 4); },
                  [](int64_t n) { return ceil_div(n + 1, 4); }});
}

LatticeSequence catalog_sequence(const std::string& name, bool ramified) {
  if (name == "L1") return lambda1();
  if (name == "L2") return lambda2();
  if (name == "L3" && !ramified) return lambda3();
  if (name == "L4")
    throw UnsupportedConfiguration("L4 (period 6, type A) is not tabulated");
  throw UnsupportedConfiguration("unknown lattice sequence '" + name + "'" +
                                 (ramified ? " for a ramified field" : ""));
}

LatticeSequence orthogonal_sequence(const std::vector<int64_t>& nu) {
  LatticeSequence L;
  L.name = "orthogonal";
  L.period = 2;
  for (int64_t k = 0; k < 2; ++k) {
    std::vector<int64_t> row;
    for (int64_t v : nu) row.push_back(ceil_div(k - v, 2));
    L.exps.push_back(row);
  }
  L.duality_shift = -1;
  return L;
}

LatticeSequence dual(const LatticeSequence& L, const HermitianSpace& s) {
  const int d = L.dim();
  // perm[j] = row i with G_ij != 0.
  std::vector<int> perm(size_t(d), -1);
  std::vector<int64_t> gval(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if (!s.gram(i, j).is_zero()) {
        if (perm[size_t(j)] != -1)
          throw UnsupportedConfiguration("dual needs a monomial Gram matrix");
        perm[size_t(j)] = i;
        gval[size_t(j)] = s.gram(i, j).nu_F();
      }
  LatticeSequence D;
  D.name = L.name + "#";
  D.period = L.period;
  for (int64_t k = 0; k < L.period; ++k) {
    std::vector<int64_t> row(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      row[size_t(perm[size_t(j)])] = 1 - L.c(j, -k) - gval[size_t(j)];
    D.exps.push_back(row);
  }
  return D;
}

std::optional<int64_t> self_dual_shift(const LatticeSequence& L, const HermitianSpace& s) {
  const LatticeSequence D = dual(L, s);
  for (int64_t sh = -2 * L.period; sh <= 2 * L.period; ++sh) {
    bool ok = true;
    for (int64_t n = 0; n < L.period && ok; ++n) ok = D.at(n) == L.at(n - sh);
    if (ok) return sh;
  }
  return std::nullopt;
}

LatticeSequence with_duality(LatticeSequence L, const HermitianSpace& s) {
  L.duality_shift = self_dual_shift(L, s);
  return L;
}

LatticeSequence affine(const LatticeSequence& L, int64_t a, int64_t b) {
  LatticeSequence R;
  R.name = L.name;
  R.period = int(a * L.period);
  for (int64_t n = 0; n < R.period; ++n) R.exps.push_back(L.at(ceil_div(n - b, a)));
  R.duality_shift = std::nullopt;
  return R;
}

LatticeSequence restrict_to(const LatticeSequence& L, const std::vector<int>& idx) {
  LatticeSequence R;
  R.name = L.name;
  R.period = L.period;
  for (const auto& row : L.exps) {
    std::vector<int64_t> r;
    for (int i : idx) r.push_back(row[size_t(i)]);
    R.exps.push_back(r);
  }
  R.duality_shift = std::nullopt;
  return R;
}

FiltrationMatrix hom_filtration(const LatticeSequence& L, int64_t n) {
  const int d = L.dim();
  FiltrationMatrix F;
  F.vals.assign(size_t(d), std::vector<int64_t>(size_t(d), 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      int64_t best = INT64_MIN;
      for (int64_t k = 0; k < L.period; ++k) best = std::max(best, L.c(i, k + n) - L.c(j, k));
      F.vals[size_t(i)][size_t(j)] = best;
    }
  return F;
}

bool in_filtration(const LatticeSequence& L, int64_t n, const Matrix& T) {
  const FiltrationMatrix F = hom_filtration(L, n);
  for (int i = 0; i < T.rows(); ++i)
    for (int j = 0; j < T.cols(); ++j) {
      const ExtElement& t = T(i, j);
      if (t.is_zero()) continue;
      if (t.nu_F() < F.vals[size_t(i)][size_t(j)]) return false;
    }
  return true;
}

bool in_skew_filtration(const LatticeSequence& L, int64_t n, const Matrix& T,
                        const HermitianSpace& s) {
  return in_filtration(L, n, T) && is_skew(s, T);
}

namespace {

int64_t entry_level(const LatticeSequence& L, int i, int j, int64_t t) {
  auto val = [&](int64_t k) {
    int64_t best = INT64_MIN;
    for (int64_t m = 0; m < L.period; ++m) best = std::max(best, L.c(i, m + k) - L.c(j, m));
    return best;
  };
  // val(k + e) = val(k) + 1 and val is nondecreasing.
  int64_t k = int64_t(L.period) * (t - val(0));
  while (val(k + 1) <= t) ++k;
  while (val(k) > t) --k;
  return k;
}

}  // namespace

int64_t nu_lambda_block(const LatticeSequence& L, const Matrix& T, const std::vector<int>& idx) {
  int64_t best = kInf;
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b) {
      const ExtElement& t = T(idx[a], idx[b]);
      if (t.is_zero()) continue;
      best = std::min(best, entry_level(L, idx[a], idx[b], t.nu_F()));
    }
  if (best == kInf) throw IndeterminateValuation("ν_Λ of a zero matrix");
  return best;
}

int64_t nu_lambda(const LatticeSequence& L, const Matrix& T) {
  std::vector<int> all;
  for (int i = 0; i < T.rows(); ++i) all.push_back(i);
  return nu_lambda_block(L, T, all);
}

int64_t uder_level(const LatticeSequence& L, int64_t n, bool ramified) {
  const bool catalogued =
      L.name == "L1" || L.name == "L2" || (L.name == "L3" && !ramified);
  if (!catalogued)
    throw UnsupportedConfiguration("U_der levels are tabulated only for L1, L2 and unramified L3");
  const int64_t v = hom_filtration(L, n).vals[0][2];
  // u(0, δy0) - 1 = δy0·E13 and ν_F(δy0) = ν_F(δ) + e·ν(y0).
  return ramified ? ceil_div(v - 1, 2) : v;
}

}  // namespace u21
