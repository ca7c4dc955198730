#pragma once

#include <string>
#include <vector>

#include "u21/lattice.hpp"

namespace u21 {

enum class TypeTag { A, B, C, D, depth_zero };

const char* to_string(TypeTag t);
TypeTag parse_type_tag(const std::string& s);

// Skew semisimple stratum [Λ, n, 0, β] on a 3-dimensional hermitian space.
// β is stored as a 3×3 matrix in the input basis; blocks lists the basis
// indices spanning each V_i, in the order V_1, V_2, (V_3).
struct Stratum {
  FieldPtr field;
  TypeTag type = TypeTag::D;
  HermitianSpace space;
  std::vector<std::vector<int>> blocks;
  Matrix beta;
  // Λ choice where several are admissible: type C unramified isotropic, depth zero.
  std::string lattice_key;
  // Depth zero only: genericity of the finite-group cuspidal representation σ.
  bool sigma_generic = true;

  const Field& f() const { return *field; }
  bool ramified() const { return field->ramified(); }
  // β_i as a matrix on V_i.
  Matrix component(int i) const { return beta.block(blocks[size_t(i)]); }
  // Scalar value of a 1-dimensional or scalar component.
  ExtElement scalar(int i) const { return component(i)(0, 0); }
};

Stratum make_type_d(FieldPtr f, const std::vector<BaseElement>& lambdas,
                    const std::vector<ExtElement>& betas);
// V_1 = <v1>, V_2 = <v2, v3> with β_2 scalar.
Stratum make_type_c(FieldPtr f, const std::vector<BaseElement>& lambdas, const ExtElement& beta1,
                    const ExtElement& beta2, const std::string& lattice_key = "");
// Witt basis (e1, e0, e-1) with V_1 = <e0>, V_2 = <e1, e-1>.
Stratum make_type_c_witt(FieldPtr f, const ExtElement& beta1, const ExtElement& beta2,
                         const std::string& lattice_key = "");
// beta2 is the 2×2 matrix of β_2 on (v2, v3).
Stratum make_type_b(FieldPtr f, const std::vector<BaseElement>& lambdas, const ExtElement& beta1,
                    const Matrix& beta2);
// beta2 on (e1, e-1).
Stratum make_type_b_witt(FieldPtr f, const ExtElement& beta1, const Matrix& beta2);
Stratum make_type_a(FieldPtr f, const std::vector<BaseElement>& lambdas, const Matrix& beta);
Stratum make_depth_zero(FieldPtr f, const std::string& lattice_key, bool sigma_generic);

// Each entry names the failed clause; empty means valid.
std::vector<std::string> validate(const Stratum& s);

struct Invariants {
  int64_t n = 0;
  std::vector<int64_t> q;  // q_i = -ν_{Λ_i}(β_i); 0 for a zero component
  int e = 2;               // period of Λ
};

// Throws UnsupportedConfiguration for strata outside the catalogue.
Invariants q_invariants(const Stratum& s);

struct AttachedLattice {
  LatticeSequence seq;
  Matrix basis;            // distinguished basis, as columns in input coordinates
  HermitianSpace space;    // Gram in the distinguished basis
  Matrix beta;             // β in the distinguished basis
  std::vector<std::vector<int>> blocks;
  bool witt = false;       // distinguished basis is (e1, e0, e-1)
};

AttachedLattice attach_lattice_sequence(const Stratum& s);

// (V_2, h) isotropic, for types B and C.
bool v2_isotropic(const Stratum& s);

// Monic polynomial over F (coefficients c0..c_{d-1}, 1) has a root in F.
// Roots known only to working precision count as roots.
bool has_root_in_F(const std::vector<ExtElement>& poly);

}  // namespace u21
