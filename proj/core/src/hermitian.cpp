#include "u21/hermitian.hpp"

namespace u21 {

HermitianSpace HermitianSpace::orthogonal(const std::vector<BaseElement>& lambdas) {
  std::vector<ExtElement> d;
  for (const auto& l : lambdas) d.emplace_back(l);
  return {Matrix::diag(d), BasisKind::orthogonal};
}

HermitianSpace HermitianSpace::witt(const Field& f, int dim) {
  Matrix g(f, dim, dim);
  for (int i = 0; i < dim; ++i) g(i, dim - 1 - i) = f.ext_one();
  return {g, BasisKind::witt};
}

HermitianSpace HermitianSpace::restrict_to(const std::vector<int>& idx) const {
  return {gram.block(idx), kind};
}

std::vector<std::string> HermitianSpace::violations() const {
  std::vector<std::string> out;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      if (gram(j, i) != gram(i, j).conj()) {
        out.push_back("gram is not conjugate-symmetric at (" + std::to_string(i + 1) + "," +
                      std::to_string(j + 1) + ")");
        return out;
      }
  if (gram.det().is_zero()) out.push_back("gram is degenerate");
  return out;
}

ExtElement h_eval(const HermitianSpace& s, const Vec& v, const Vec& w) {
  const Field& f = s.field();
  ExtElement acc = f.ext_zero();
  for (int i = 0; i < s.dim(); ++i) {
    if (v[size_t(i)].is_exact_zero()) continue;
    for (int j = 0; j < s.dim(); ++j) {
      const ExtElement& g = s.gram(i, j);
      if (g.is_exact_zero()) continue;
      acc = acc + v[size_t(i)] * w[size_t(j)].conj() * g;
    }
  }
  return acc;
}

Matrix adjoint(const HermitianSpace& s, const Matrix& x) {
  const Matrix gt = s.gram.transpose();
  return gt.inverse() * x.conj().transpose() * gt;
}

bool is_skew(const HermitianSpace& s, const Matrix& x) { return adjoint(s, x) == -x; }

bool is_unitary(const HermitianSpace& s, const Matrix& g) {
  return g.transpose() * s.gram * g.conj() == s.gram;
}

bool is_isotropic_binary(const ExtElement& l1, const ExtElement& l2) {
  if (!l1.in_base() || !l2.in_base()) throw ConstraintViolated("binary form constants must lie in F0");
  return is_norm_class(-(l1.a() * l2.a()));
}

NormClass det_class(const HermitianSpace& s) {
  ExtElement d = s.gram.det();
  if (!d.in_base()) throw ConstraintViolated("determinant of gram not in F0");
  return is_norm_class(d.a()) ? NormClass::trivial : NormClass::nontrivial;
}

bool discriminant_trivial(const HermitianSpace& s) {
  ExtElement d = s.gram.det();
  if (!d.in_base()) throw ConstraintViolated("determinant of gram not in F0");
  return is_norm_class(-d.a());
}

WittPair witt_from_anisotropic_pair(const HermitianSpace& space2, bool ramified_mode) {
  const Field& f = space2.field();
  if (space2.dim() != 2) throw ConstraintViolated("expected a binary space");
  if (ramified_mode != f.ramified()) throw ConstraintViolated("mode does not match the field");
  if (!space2.gram(0, 1).is_zero() || !space2.gram(1, 0).is_zero())
    throw ConstraintViolated("binary space must be given in an orthogonal basis");
  const BaseElement l1 = space2.gram(0, 0).a(), l3 = space2.gram(1, 1).a();
  const ExtElement eps = solve_norm_equation(-(l3 / l1));
  const ExtElement v1 = f.ext_one();
  WittPair r;
  r.eps = eps;
  r.e1 = {eps.half(), v1.half()};
  const ExtElement inv3 = ExtElement(l3.inv());
  r.em1 = {-(eps * inv3), inv3};
  return r;
}

bool lattice_included(const Matrix& A, const std::vector<int64_t>& a, const Matrix& B,
                      const std::vector<int64_t>& b) {
  const Matrix m = B.inverse() * A;
  for (int i = 0; i < m.cols(); ++i)
    for (int j = 0; j < m.rows(); ++j) {
      const ExtElement& c = m(j, i);
      if (c.is_zero()) continue;
      if (c.nu_F() + a[size_t(i)] < b[size_t(j)]) return false;
    }
  return true;
}

namespace {

bool is_diagonal(const Matrix& g) {
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (i != j && !g(i, j).is_zero()) return false;
  return true;
}

std::optional<Vec> isotropic_diagonal(const Field& f, const std::vector<BaseElement>& l) {
  const int n = int(l.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      BaseElement t = -(l[size_t(j)] / l[size_t(i)]);
      if (!is_norm_class(t)) continue;
      Vec v(size_t(n), f.ext_zero());
      v[size_t(i)] = solve_norm_equation(t);
      v[size_t(j)] = f.ext_one();
      return v;
    }
  if (n < 3) return std::nullopt;
  for (int64_t s = 0; s <= 2; ++s)
    for (int64_t a = 1; a < f.p(); ++a)
      for (int64_t b = 0; b < f.p(); ++b) {
        BaseElement A = f.from_int(a), B = f.from_int(b).shift(s);
        BaseElement rest = l[0] * A * A + l[1] * B * B;
        if (rest.is_zero()) continue;
        BaseElement t = -(rest / l[2]);
        if (!is_norm_class(t)) continue;
        return Vec{ExtElement(A), ExtElement(B), solve_norm_equation(t)};
      }
  return std::nullopt;
}

// Orthogonal basis (columns) of a nondegenerate space.
Matrix orthogonalize(const HermitianSpace& s) {
  const Field& f = s.field();
  const int n = s.dim();
  std::vector<Vec> rest;
  for (int i = 0; i < n; ++i) rest.push_back(unit_vector(f, n, i));
  std::vector<Vec> out;
  while (!rest.empty()) {
    // Candidates x_i, x_i + x_j, x_i + δx_j; after projecting away from the
    // chosen u, the vector with index `drop` becomes dependent on the others.
    std::optional<Vec> u;
    size_t drop = 0;
    for (size_t i = 0; i < rest.size() && !u; ++i)
      if (!h_eval(s, rest[i], rest[i]).is_zero()) {
        u = rest[i];
        drop = i;
      }
    for (size_t i = 0; i < rest.size() && !u; ++i)
      for (size_t j = i + 1; j < rest.size() && !u; ++j)
        for (const Vec& c : {add(rest[i], rest[j]), add(rest[i], scale(rest[j], f.delta()))})
          if (!u && !h_eval(s, c, c).is_zero()) {
            u = c;
            drop = j;
          }
    if (!u) throw ConstraintViolated("degenerate space");
    const ExtElement huu = h_eval(s, *u, *u);
    std::vector<Vec> next;
    for (size_t k = 0; k < rest.size(); ++k)
      if (k != drop) next.push_back(sub(rest[k], scale(*u, h_eval(s, rest[k], *u) / huu)));
    out.push_back(*u);
    rest = next;
  }
  return Matrix::from_columns(out);
}

}  // namespace

std::optional<Vec> find_isotropic_vector(const HermitianSpace& s) {
  const Field& f = s.field();
  if (is_diagonal(s.gram)) {
    std::vector<BaseElement> l;
    for (int i = 0; i < s.dim(); ++i) l.push_back(s.gram(i, i).a());
    return isotropic_diagonal(f, l);
  }
  const Matrix P = orthogonalize(s);
  const Matrix D = P.transpose() * s.gram * P.conj();
  std::vector<BaseElement> l;
  for (int i = 0; i < s.dim(); ++i) l.push_back(D(i, i).a());
  auto v = isotropic_diagonal(f, l);
  if (!v) return v;
  return P * *v;
}

Matrix witt_frame(const HermitianSpace& s) {
  const Field& f = s.field();
  if (s.dim() != 3) throw UnsupportedConfiguration("Witt frame needs a 3-dimensional space");
  if (s.gram == HermitianSpace::witt(f).gram) return Matrix::identity(f, 3);
  auto v = find_isotropic_vector(s);
  if (!v) throw NoSolution("space is anisotropic");
  // Partner vector with the smallest pairing valuation.
  int best = -1;
  int64_t best_val = kInf;
  for (int i = 0; i < 3; ++i) {
    ExtElement hv = h_eval(s, *v, unit_vector(f, 3, i));
    if (hv.is_zero()) continue;
    if (hv.nu_F() < best_val) {
      best_val = hv.nu_F();
      best = i;
    }
  }
  const Vec w = unit_vector(f, 3, best);
  const ExtElement hvw = h_eval(s, *v, w);
  const ExtElement x = -(h_eval(s, w, w) / (hvw + hvw));
  Vec u = add(w, scale(*v, x));
  const Vec em1 = scale(u, h_eval(s, u, *v).inv());
  auto row = [&](const Vec& a) {
    Vec r(3, f.ext_zero());
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) r[size_t(j)] = r[size_t(j)] + a[size_t(i)] * s.gram(i, j);
    return r;
  };
  Vec z = cross(row(*v), row(em1));
  for (auto& c : z) c = c.conj();
  const ExtElement hzz = h_eval(s, z, z);
  const ExtElement eps = solve_norm_equation(hzz.a());
  const Vec e0 = scale(z, eps.inv());
  return Matrix::from_columns({*v, e0, em1});
}

Matrix make_unipotent(const ExtElement& c, const ExtElement& d, Side side) {
  const Field& f = *c.field();
  if (!(c * c.conj() + d + d.conj()).is_zero())
    throw ConstraintViolated("c·σ(c) + d + σ(d) != 0");
  Matrix m = Matrix::identity(f, 3);
  if (side == Side::upper) {
    m(0, 1) = c;
    m(0, 2) = d;
    m(1, 2) = -c.conj();
  } else {
    m(1, 0) = c;
    m(2, 0) = d;
    m(2, 1) = -c.conj();
  }
  return m;
}

Matrix make_torus(const ExtElement& z, const ExtElement& z1) {
  if ((z1 * z1.conj()) != z1.field()->ext_one()) throw ConstraintViolated("z'·σ(z') != 1");
  return Matrix::diag({z, z1, z.conj().inv()});
}

Matrix weyl_matrix(const Field& f, Weyl w) {
  if (w == Weyl::id) return Matrix::identity(f, 3);
  Matrix m(f, 3, 3);
  m(0, 2) = f.ext_one();
  m(1, 1) = -f.ext_one();
  m(2, 0) = f.ext_one();
  return m;
}

}  // namespace u21
