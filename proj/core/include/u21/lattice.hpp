#pragma once

#include <optional>
#include <string>
#include <vector>

#include "u21/hermitian.hpp"

namespace u21 {

int64_t floor_div(int64_t a, int64_t b);
int64_t ceil_div(int64_t a, int64_t b);

// Λ(n) = ⊕ p_F^{c_i(n)} b_i in a distinguished basis, with c_i(n + e) = c_i(n) + 1.
struct LatticeSequence {
  std::string name;
  int period = 2;
  std::vector<std::vector<int64_t>> exps;  // exps[k][i] = c_i(k), 0 <= k < period
  // s with Λ^# = Λ + s, i.e. Λ^#(n) = Λ(n - s); self-dual normalisation is s = -1.
  std::optional<int64_t> duality_shift;

  int dim() const { return exps.empty() ? 0 : int(exps[0].size()); }
  int64_t c(int i, int64_t n) const;
  std::vector<int64_t> at(int64_t n) const;
  std::vector<std::string> violations() const;
  bool same_as(const LatticeSequence& o) const;
};

// Catalogued sequences in the Witt basis (e1, e0, e-1).
LatticeSequence lambda1();
LatticeSequence lambda2();
LatticeSequence lambda3();
// "L1", "L2", "L3" (L3 unramified only); anything else is unsupported.
LatticeSequence catalog_sequence(const std::string& name, bool ramified);

// Orthogonal basis with ν_F(h(v_i, v_i)) = nu[i]: c_i(n) = ⌈(n - nu[i]) / 2⌉.
LatticeSequence orthogonal_sequence(const std::vector<int64_t>& nu);

// n ↦ Λ(-n)^# for a Gram with one nonzero entry per row and column.
LatticeSequence dual(const LatticeSequence& L, const HermitianSpace& s);
std::optional<int64_t> self_dual_shift(const LatticeSequence& L, const HermitianSpace& s);
LatticeSequence with_duality(LatticeSequence L, const HermitianSpace& s);

LatticeSequence affine(const LatticeSequence& L, int64_t a, int64_t b);
LatticeSequence restrict_to(const LatticeSequence& L, const std::vector<int>& idx);

struct FiltrationMatrix {
  std::vector<std::vector<int64_t>> vals;
  bool operator==(const FiltrationMatrix& o) const { return vals == o.vals; }
};

// vals[i][j] = max over one period of c_i(k + n) - c_j(k).
FiltrationMatrix hom_filtration(const LatticeSequence& L, int64_t n);
bool in_filtration(const LatticeSequence& L, int64_t n, const Matrix& T);
// Skew part a_n(Λ): also requires σ_h(T) = -T.
bool in_skew_filtration(const LatticeSequence& L, int64_t n, const Matrix& T,
                        const HermitianSpace& s);

// Largest k with T in ã_k(Λ).
int64_t nu_lambda(const LatticeSequence& L, const Matrix& T);
int64_t nu_lambda_block(const LatticeSequence& L, const Matrix& T, const std::vector<int>& idx);

// r with U_der ∩ a_n(Λ) = U_der(r), from the (1,3) entry of the filtration.
int64_t uder_level(const LatticeSequence& L, int64_t n, bool ramified);

}  // namespace u21
