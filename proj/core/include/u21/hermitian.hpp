#pragma once

#include <optional>
#include <string>
#include <vector>

#include "u21/matrix.hpp"

namespace u21 {

enum class BasisKind { orthogonal, witt };
enum class NormClass { trivial, nontrivial };
enum class Side { upper, lower };
enum class Weyl { id, w };

// Gram matrix G with h(v, w) = Σ v_i σ(w_j) G_ij.
struct HermitianSpace {
  Matrix gram;
  BasisKind kind = BasisKind::orthogonal;

  int dim() const { return gram.rows(); }
  const Field& field() const { return *gram.field(); }

  static HermitianSpace orthogonal(const std::vector<BaseElement>& lambdas);
  // antidiag(1, 1, 1) on (e1, e0, e-1), or antidiag(1, 1) on (e1, e-1).
  static HermitianSpace witt(const Field& f, int dim = 3);

  HermitianSpace restrict_to(const std::vector<int>& idx) const;
  std::vector<std::string> violations() const;
};

ExtElement h_eval(const HermitianSpace& s, const Vec& v, const Vec& w);

// σ_h(X), defined by h(Xv, w) = h(v, σ_h(X)w): (G^T)^{-1} σ(X)^T G^T.
Matrix adjoint(const HermitianSpace& s, const Matrix& x);
bool is_skew(const HermitianSpace& s, const Matrix& x);
bool is_unitary(const HermitianSpace& s, const Matrix& g);

bool is_isotropic_binary(const ExtElement& l1, const ExtElement& l2);
NormClass det_class(const HermitianSpace& s);
// -det(G) is a norm; the Witt model antidiag(1,1,1) has this property.
bool discriminant_trivial(const HermitianSpace& s);

struct WittPair {
  Vec e1, em1;      // coordinates in the (v1, v3) basis
  ExtElement eps;   // ε·σ(ε) = -λ3/λ1
};

// space2 = diag(λ1, λ3); e1 = εv1/2 + v3/2, e-1 = (-εv1 + v3)/λ3.
WittPair witt_from_anisotropic_pair(const HermitianSpace& space2, bool ramified_mode);

// ⊕ p^{a_i} A_i ⊆ ⊕ p^{b_j} B_j, generators given as matrix columns.
bool lattice_included(const Matrix& A, const std::vector<int64_t>& a, const Matrix& B,
                      const std::vector<int64_t>& b);

// Columns (e1, e0, e-1) with Gram antidiag(1,1,1), in the coordinates of s.
Matrix witt_frame(const HermitianSpace& s);
std::optional<Vec> find_isotropic_vector(const HermitianSpace& s);

// Matrices in a Witt basis (e1, e0, e-1).
Matrix make_unipotent(const ExtElement& c, const ExtElement& d, Side side);
Matrix make_torus(const ExtElement& z, const ExtElement& z1);
Matrix weyl_matrix(const Field& f, Weyl w);

}  // namespace u21
