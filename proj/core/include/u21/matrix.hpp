#pragma once

#include <vector>

#include "u21/padic.hpp"

namespace u21 {

using Vec = std::vector<ExtElement>;

// Small dense matrix over F, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const Field& f, int rows, int cols);

  static Matrix identity(const Field& f, int n);
  static Matrix diag(const std::vector<ExtElement>& d);
  static Matrix from_rows(const std::vector<std::vector<ExtElement>>& rows);
  static Matrix from_columns(const std::vector<Vec>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Field* field() const { return f_; }
  ExtElement& operator()(int i, int j) { return a_[size_t(i * cols_ + j)]; }
  const ExtElement& operator()(int i, int j) const { return a_[size_t(i * cols_ + j)]; }
  Vec column(int j) const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const ExtElement& s) const;
  Vec operator*(const Vec& v) const;

  Matrix transpose() const;
  Matrix conj() const;  // entrywise σ
  ExtElement trace() const;
  ExtElement det() const;
  Matrix inverse() const;
  Matrix block(const std::vector<int>& idx) const;
  bool is_zero() const;

  // Entrywise equality to working precision.
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  const Field* f_ = nullptr;
  int rows_ = 0, cols_ = 0;
  std::vector<ExtElement> a_;
};

Vec scale(const Vec& v, const ExtElement& s);
Vec add(const Vec& v, const Vec& w);
Vec sub(const Vec& v, const Vec& w);
Vec unit_vector(const Field& f, int n, int i);
Vec cross(const Vec& x, const Vec& y);

// Coefficients of det(xI - M) as {c0, c1, ..., 1}.
std::vector<ExtElement> char_poly(const Matrix& m);

}  // namespace u21
