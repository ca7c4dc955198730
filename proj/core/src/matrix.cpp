#include "u21/matrix.hpp"

namespace u21 {

Matrix::Matrix(const Field& f, int rows, int cols)
    : f_(&f), rows_(rows), cols_(cols), a_(size_t(rows * cols), f.ext_zero()) {}

Matrix Matrix::identity(const Field& f, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = f.ext_one();
  return m;
}

Matrix Matrix::diag(const std::vector<ExtElement>& d) {
  Matrix m(*d.at(0).field(), int(d.size()), int(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<ExtElement>>& rows) {
  Matrix m(*rows.at(0).at(0).field(), int(rows.size()), int(rows[0].size()));
  for (int i = 0; i < m.rows_; ++i)
    for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[size_t(i)].at(size_t(j));
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols) {
  Matrix m(*cols.at(0).at(0).field(), int(cols[0].size()), int(cols.size()));
  for (int j = 0; j < m.cols_; ++j)
    for (int i = 0; i < m.rows_; ++i) m(i, j) = cols[size_t(j)].at(size_t(i));
  return m;
}

Vec Matrix::column(int j) const {
  Vec v;
  for (int i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r = *this;
  for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.a_) x = -x;
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  Matrix r(*f_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      ExtElement s = f_->ext_zero();
      for (int k = 0; k < cols_; ++k) s = s + (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Matrix Matrix::operator*(const ExtElement& s) const {
  Matrix r = *this;
  for (auto& x : r.a_) x = x * s;
  return r;
}

Vec Matrix::operator*(const Vec& v) const {
  Vec r;
  for (int i = 0; i < rows_; ++i) {
    ExtElement s = f_->ext_zero();
    for (int k = 0; k < cols_; ++k) s = s + (*this)(i, k) * v[size_t(k)];
    r.push_back(s);
  }
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(*f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::conj() const {
  Matrix r = *this;
  for (auto& x : r.a_) x = x.conj();
  return r;
}

ExtElement Matrix::trace() const {
  ExtElement s = f_->ext_zero();
  for (int i = 0; i < rows_; ++i) s = s + (*this)(i, i);
  return s;
}

ExtElement Matrix::det() const {
  const Matrix& m = *this;
  switch (rows_) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      throw UnsupportedConfiguration("determinant only for dimension <= 3");
  }
}

Matrix Matrix::block(const std::vector<int>& idx) const {
  Matrix r(*f_, int(idx.size()), int(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) r(int(i), int(j)) = (*this)(idx[i], idx[j]);
  return r;
}

Matrix Matrix::inverse() const {
  const ExtElement d = det();
  if (d.is_zero()) throw DivisionByApparentZero("singular matrix");
  const ExtElement di = d.inv();
  Matrix r(*f_, rows_, cols_);
  if (rows_ == 1) {
    r(0, 0) = di;
    return r;
  }
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      std::vector<int> ri, ci;
      for (int k = 0; k < rows_; ++k) {
        if (k != j) ri.push_back(k);
        if (k != i) ci.push_back(k);
      }
      Matrix minor(*f_, rows_ - 1, cols_ - 1);
      for (size_t a = 0; a < ri.size(); ++a)
        for (size_t b = 0; b < ci.size(); ++b) minor(int(a), int(b)) = (*this)(ri[a], ci[b]);
      ExtElement c = minor.det();
      if ((i + j) % 2) c = -c;
      r(i, j) = c * di;
    }
  return r;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t k = 0; k < a_.size(); ++k)
    if (a_[k] != o.a_[k]) return false;
  return true;
}

Vec scale(const Vec& v, const ExtElement& s) {
  Vec r;
  for (const auto& x : v) r.push_back(x * s);
  return r;
}

Vec add(const Vec& v, const Vec& w) {
  Vec r;
  for (size_t i = 0; i < v.size(); ++i) r.push_back(v[i] + w[i]);
  return r;
}

Vec sub(const Vec& v, const Vec& w) {
  Vec r;
  for (size_t i = 0; i < v.size(); ++i) r.push_back(v[i] - w[i]);
  return r;
}

Vec unit_vector(const Field& f, int n, int i) {
  Vec v(size_t(n), f.ext_zero());
  v[size_t(i)] = f.ext_one();
  return v;
}

Vec cross(const Vec& x, const Vec& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

std::vector<ExtElement> char_poly(const Matrix& m) {
  const Field& f = *m.field();
  const int n = m.rows();
  if (n == 1) return {-m(0, 0), f.ext_one()};
  if (n == 2) return {m.det(), -m.trace(), f.ext_one()};
  if (n == 3) {
    ExtElement c1 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                    m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    return {-m.det(), c1, -m.trace(), f.ext_one()};
  }
  throw UnsupportedConfiguration("characteristic polynomial only for dimension <= 3");
}

}  // namespace u21
