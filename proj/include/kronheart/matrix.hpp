#pragma once

// Dense exact matrices over a FieldSpec and the elimination kernel the whole
// library runs on: rank, reduced row echelon form, deterministic null-space
// bases and linear solving. Zero-row and zero-column matrices are first-class.

#include "kronheart/field.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kronheart {

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

class Matrix {
 public:
  Matrix() : rows_(0), cols_(0), field_(FieldSpec::rationals()) {}

  Matrix(std::size_t rows, std::size_t cols, const FieldSpec& f)
      : rows_(rows), cols_(cols), field_(f), e_(rows * cols, Scalar(f, 0)) {}

  static Matrix identity(std::size_t n, const FieldSpec& f) {
    Matrix m(n, n, f);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(f, 1);
    return m;
  }

  static Matrix zero(std::size_t rows, std::size_t cols, const FieldSpec& f) {
    return Matrix(rows, cols, f);
  }

  // Row-major initializer over int64 entries.
  static Matrix from_ints(std::size_t rows, std::size_t cols, const FieldSpec& f,
                          std::initializer_list<std::int64_t> vals) {
    Matrix m(rows, cols, f);
    if (vals.size() != rows * cols) throw DimensionMismatch("from_ints: wrong entry count");
    std::size_t k = 0;
    for (auto v : vals) m.e_[k++] = Scalar(f, v);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const FieldSpec& field() const { return field_; }

  Scalar& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
      }
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.e_) x = -x;
    return r;
  }

  Matrix& operator+=(const Matrix& o) {
    require_shape(o);
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
  }

  Matrix& operator-=(const Matrix& o) {
    require_shape(o);
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_field(a.field_, b.field_);
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape");
    Matrix c(a.rows_, b.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b.at(k, j).is_zero()) continue;
          c.at(i, j) += aik * b.at(k, j);
        }
      }
    return c;
  }

  friend Matrix operator*(const Scalar& s, Matrix m) {
    for (auto& x : m.e_) x *= s;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.e_ == b.e_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix s(nr, nc, field_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) s.at(i, j) = at(r0 + i, c0 + j);
    return s;
  }

  Matrix column(std::size_t c) const { return submatrix(0, c, rows_, 1); }

  // Columns selected by index list, in the given order.
  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix s(rows_, idx.size(), field_);
    for (std::size_t j = 0; j < idx.size(); ++j)
      for (std::size_t i = 0; i < rows_; ++i) s.at(i, j) = at(i, idx[j]);
    return s;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix s(idx.size(), cols_, field_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) s.at(i, j) = at(idx[i], j);
    return s;
  }

  friend Matrix hstack(const Matrix& a, const Matrix& b) {
    require_same_field(a.field_, b.field_);
    if (a.rows_ != b.rows_) throw DimensionMismatch("hstack row count");
    Matrix c(a.rows_, a.cols_ + b.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) c.at(i, j) = a.at(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, a.cols_ + j) = b.at(i, j);
    }
    return c;
  }

  friend Matrix vstack(const Matrix& a, const Matrix& b) {
    require_same_field(a.field_, b.field_);
    if (a.cols_ != b.cols_) throw DimensionMismatch("vstack column count");
    Matrix c(a.rows_ + b.rows_, a.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) c.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) c.at(a.rows_ + i, j) = b.at(i, j);
    return c;
  }

  friend Matrix block_diag(const Matrix& a, const Matrix& b) {
    require_same_field(a.field_, b.field_);
    Matrix c(a.rows_ + b.rows_, a.cols_ + b.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) c.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) c.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
    return c;
  }

 private:
  void require_shape(const Matrix& o) const {
    require_same_field(field_, o.field_);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shape");
  }

  std::size_t rows_, cols_;
  FieldSpec field_;
  std::vector<Scalar> e_;
};

struct Rref {
  Matrix r;                        // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column per nonzero row
};

namespace matrix_detail {

// Rescale a rational row to primitive integer form (a unit operation; the
// final reduced echelon form is unique, so this only tames coefficient
// growth during forward elimination).
inline void primitivize_row(Matrix& m, std::size_t i, std::size_t from_col) {
  BigInt l = 1, g = 0;
  for (std::size_t j = from_col; j < m.cols(); ++j) {
    const Scalar& s = m.at(i, j);
    if (!s.is_zero()) l = boost::multiprecision::lcm(l, denominator(s.rational()));
  }
  for (std::size_t j = from_col; j < m.cols(); ++j) {
    const Scalar& s = m.at(i, j);
    if (s.is_zero()) continue;
    BigInt n = numerator(s.rational()) * (l / denominator(s.rational()));
    g = boost::multiprecision::gcd(g, n < 0 ? BigInt(-n) : n);
  }
  if (g == 0 || (l == 1 && g == 1)) return;
  Scalar f(m.field(), Rat(l) / Rat(g));
  for (std::size_t j = from_col; j < m.cols(); ++j) m.at(i, j) *= f;
}

}  // namespace matrix_detail

inline Rref rref(const Matrix& m) {
  Rref out{m, {}};
  Matrix& r = out.r;
  const bool rational = m.field().is_rationals();
  std::size_t row = 0;
  // forward pass to a row echelon form; over Q rows are kept integral and
  // primitive, with cross-multiplied eliminations instead of divisions
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && r.at(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = col; j < m.cols(); ++j) std::swap(r.at(piv, j), r.at(row, j));
    if (rational) matrix_detail::primitivize_row(r, row, col);
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      if (r.at(i, col).is_zero()) continue;
      if (rational) {
        Scalar num = r.at(i, col);
        Scalar den = r.at(row, col);
        r.at(i, col) = Scalar(m.field(), 0);
        for (std::size_t j = col + 1; j < m.cols(); ++j)
          r.at(i, j) = den * r.at(i, j) - num * r.at(row, j);
        matrix_detail::primitivize_row(r, i, col + 1);
      } else {
        Scalar f = r.at(i, col) / r.at(row, col);
        r.at(i, col) = Scalar(m.field(), 0);
        for (std::size_t j = col + 1; j < m.cols(); ++j) r.at(i, j) -= f * r.at(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  // backward pass: unit pivots, clear above
  for (std::size_t k = out.pivots.size(); k-- > 0;) {
    std::size_t prow = k, pcol = out.pivots[k];
    Scalar inv = r.at(prow, pcol).inverse();
    for (std::size_t j = pcol; j < m.cols(); ++j) r.at(prow, j) *= inv;
    for (std::size_t i = 0; i < prow; ++i) {
      Scalar f = r.at(i, pcol);
      if (f.is_zero()) continue;
      for (std::size_t j = pcol; j < m.cols(); ++j) r.at(i, j) -= f * r.at(prow, j);
    }
  }
  return out;
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

// Basis of the right null space, one column per free variable, in reduced
// echelon normal form: entry 1 at the free coordinate, pivot coordinates
// filled from the RREF. Deterministic.
inline Matrix kernel_basis(const Matrix& m) {
  Rref e = rref(m);
  const auto& piv = e.pivots;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(m.cols(), free_cols.size(), m.field());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    std::size_t fc = free_cols[j];
    k.at(fc, j) = Scalar(m.field(), 1);
    for (std::size_t i = 0; i < piv.size(); ++i) k.at(piv[i], j) = -e.r.at(i, fc);
  }
  return k;
}

// Particular solution of a*x = b with free variables set to zero, or nullopt
// when the system is inconsistent.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  require_same_field(a.field(), b.field());
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: row counts differ");
  Rref e = rref(hstack(a, b));
  // Inconsistent iff some pivot lands in the b-block.
  for (auto c : e.pivots)
    if (c >= a.cols()) return std::nullopt;
  Matrix x(a.cols(), b.cols(), a.field());
  for (std::size_t i = 0; i < e.pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x.at(e.pivots[i], j) = e.r.at(i, a.cols() + j);
  return x;
}

inline Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse: not square");
  auto x = solve(m, Matrix::identity(m.rows(), m.field()));
  if (!x || rank(m) != m.rows()) throw std::domain_error("inverse: singular matrix");
  return *x;
}

inline bool is_invertible(const Matrix& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

// Column span as RREF of the transpose: canonical representation of a
// subspace, usable for equality tests of spans.
inline Matrix column_space_normal_form(const Matrix& m) {
  Rref e = rref(m.transpose());
  return e.r.select_rows([&] {
           std::vector<std::size_t> idx(e.pivots.size());
           for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
           return idx;
         }())
      .transpose();
}

// Do the columns of sub span a subspace of the column span of big?
inline bool column_span_contains(const Matrix& big, const Matrix& sub) {
  return solve(big, sub).has_value();
}

// Intersection of two column spans, as a deterministic basis matrix.
inline Matrix column_span_intersection(const Matrix& a, const Matrix& b) {
  // Kernel of [a | -b]: pairs (x, y) with a x = b y.
  Matrix k = kernel_basis(hstack(a, -b));
  Matrix xs = k.submatrix(0, 0, a.cols(), k.cols());
  Matrix cand = a * xs;
  return column_space_normal_form(cand);
}

}  // namespace kronheart
