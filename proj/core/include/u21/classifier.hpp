#pragma once

#include <optional>
#include <string>
#include <vector>

#include "u21/xbeta.hpp"

namespace u21 {

enum class Verdict { Generic, NonGeneric };
const char* to_string(Verdict v);
Verdict parse_verdict(const std::string& s);
XStatus parse_xstatus(const std::string& s);

// One verdict for the whole of Π_𝔵; never per representation.
struct ClassificationReport {
  Verdict verdict = Verdict::NonGeneric;
  XStatus xbeta = XStatus::Empty;
  std::vector<TraceStep> case_path;
  std::optional<Witness> witness;
};

struct ClassifyOptions {
  // Attach a certified witness when 𝔛_β(F0) is non-empty.
  bool search_witness = false;
  SearchOptions search;
};

// Throws UnsupportedConfiguration listing the violations of an invalid stratum.
ClassificationReport classify_genericity(const Stratum& s, const ClassifyOptions& opt = {});

enum class DepthZeroLattice { L1, L2 };

struct DepthZeroInput {
  bool ramified = false;
  DepthZeroLattice lattice = DepthZeroLattice::L1;
  bool sigma_generic = true;  // supplied by the finite-group side
};

// Generic iff Λ = Λ1 and σ is generic. Unramified: Λ1 is the lattice with
// P0/P1 ≅ U(2,1)(k_F/k_F0).
Verdict depth_zero_rule(const DepthZeroInput& in);

// Witt basis (e1, e0, e-1) adapted to the stratum: e±1 span V2 for types B/C with
// (V2, h) isotropic, W1 = V2 ⊕ V3 for type D with (W1, h) isotropic.
struct WittModel {
  Matrix basis;  // columns e1, e0, e-1 in input coordinates
  HermitianSpace space;
  Matrix beta;
};

WittModel witt_model(const Stratum& s);
// (W1, h) isotropic for type D.
bool w1_isotropic(const Stratum& s);

struct CharCheck {
  bool nontrivial = false;
  int64_t level = 0;           // ν_F0(δ·h(g e±1, β g e±1))
  ExtElement h;                // h(g e±1, β g e±1)
  ExtElement trace;            // tr(g^-1 β g X), X = E13 (upper) or E31 (lower)
  bool trace_identity = false; // trace = σ(h) = -h
  bool norm_identity = false;  // Tr_{F/F0}(δh) = 2δh
};

// g is a matrix in the Witt model of s. Throws IndeterminateValuation when h vanishes.
CharCheck char_nontrivial(const Matrix& g, const Stratum& s, int64_t r, Side side);

struct SeparationCheck {
  int64_t lhs = 0;  // ν_F(h(v, βv))
  int64_t rhs = 0;  // min of the two block valuations
  bool holds = false;
};

// Type D, v = a·v1 + b·v2 + c·v3 in the orthogonal input basis.
SeparationCheck valuation_separation(const Stratum& s, const ExtElement& a, const ExtElement& b,
                                     const ExtElement& c);

enum class ShallowShape { unram_oo, unram_op, ramified };
const char* to_string(ShallowShape s);

// Data entering d(𝔵, w, x): n = 4m + 2r for type C, q_i = 4m_i + 2r_i for type D.
struct ShallowParams {
  TypeTag type = TypeTag::C;
  ShallowShape shape = ShallowShape::unram_oo;
  int64_t m1 = 0, r1 = 0, m2 = 0, r2 = 0;
};

ShallowParams shallow_params(const Stratum& s);

// nu is ν_F(x); kInf gives the stable value d(𝔵, w).
int64_t shallowness(const ShallowParams& p, Weyl w, int64_t nu);
int64_t shallowness(const Stratum& s, Weyl w, const ExtElement& x);
int64_t stable_shallowness(const ShallowParams& p, Weyl w);
// Least ν with shallowness(p, w, ν') = d(𝔵, w) for all ν' >= ν.
int64_t shallowness_threshold(const ShallowParams& p, Weyl w);

struct ClaimCheck {
  int64_t lhs = 0;  // ν_F0(δ·h(u e_w, β u e_w)); kInf if h = 0
  int64_t d = 0;    // d(𝔵, w, x)
  int64_t d_stable = 0;
  bool holds = false;
};

// u = ū(x, y) for w = id and u(x, y) for w ≠ id, in the Witt model; e_w = e1 or e-1.
ClaimCheck claim_inequalities(const Stratum& s, Weyl w, const ExtElement& x, const ExtElement& y);
// y = -x·σ(x)/2.
ClaimCheck claim_inequalities(const Stratum& s, Weyl w, const ExtElement& x);

struct ConjugationCheck {
  Matrix product;
  Matrix expected;
  bool holds = false;
};

ConjugationCheck conjugation_identity(const ExtElement& x, const ExtElement& y,
                                      const ExtElement& a);

}  // namespace u21
