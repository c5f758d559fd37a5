#pragma once

#include "qflag/scalars.hpp"

#include <optional>
#include <vector>

namespace qflag {

using QVector = std::vector<QScalar>;

// Dense matrix over F, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  QScalar& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const QScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  bool is_zero() const;
  QMatrix transpose() const;
  QVector column(std::size_t j) const;
  QVector row(std::size_t i) const;
  void set_column(std::size_t j, const QVector& v);

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(const QScalar& s);
  friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
  friend QMatrix operator*(QMatrix a, const QScalar& s) { return a *= s; }
  friend QMatrix operator*(const QScalar& s, QMatrix a) { return a *= s; }
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QVector operator*(const QMatrix& a, const QVector& v);
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const QMatrix& a, const QMatrix& b) { return !(a == b); }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<QScalar> a_;
};

QMatrix kron(const QMatrix& a, const QMatrix& b);
// row vector times matrix
QVector row_times(const QVector& v, const QMatrix& m);
bool is_zero(const QVector& v);

struct Echelon {
  QMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

Echelon rref(QMatrix m);
std::size_t rank(const QMatrix& m);
// columns form a basis of {x : m x = 0}
QMatrix nullspace(const QMatrix& m);
// some x with m x = b, or nullopt if inconsistent
std::optional<QVector> solve(const QMatrix& m, const QVector& b);
// X with m X = b column by column, or nullopt
std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b);
QMatrix inverse(const QMatrix& m);

}  // namespace qflag
