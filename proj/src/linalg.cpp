#include "qflag/linalg.hpp"

namespace qflag {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool QMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QVector QMatrix::column(std::size_t j) const {
  QVector v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

QVector QMatrix::row(std::size_t i) const {
  return QVector(a_.begin() + static_cast<long>(i * c_), a_.begin() + static_cast<long>((i + 1) * c_));
}

void QMatrix::set_column(std::size_t j, const QVector& v) {
  for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k)
    if (!o.a_[k].is_zero()) a_[k] += o.a_[k];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k)
    if (!o.a_[k].is_zero()) a_[k] -= o.a_[k];
  return *this;
}

QMatrix& QMatrix::operator*=(const QScalar& s) {
  for (auto& x : a_)
    if (!x.is_zero()) x *= s;
  return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.c_ != b.r_) throw std::invalid_argument("matrix shape mismatch");
  QMatrix m(a.r_, b.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t k = 0; k < a.c_; ++k) {
      const QScalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.c_; ++j) {
        const QScalar& y = b(k, j);
        if (!y.is_zero()) m(i, j) += x * y;
      }
    }
  return m;
}

QVector operator*(const QMatrix& a, const QVector& v) {
  if (a.c_ != v.size()) throw std::invalid_argument("matrix shape mismatch");
  QVector r(a.r_);
  for (std::size_t k = 0; k < a.c_; ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t i = 0; i < a.r_; ++i)
      if (!a(i, k).is_zero()) r[i] += a(i, k) * v[k];
  }
  return r;
}

QVector row_times(const QVector& v, const QMatrix& m) {
  if (m.rows() != v.size()) throw std::invalid_argument("matrix shape mismatch");
  QVector r(m.cols());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(k, j).is_zero()) r[j] += v[k] * m(k, j);
  }
  return r;
}

bool is_zero(const QVector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

QMatrix kron(const QMatrix& a, const QMatrix& b) {
  QMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const QScalar& x = a(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (!b(k, l).is_zero()) m(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
    }
  return m;
}

Echelon rref(QMatrix m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    QScalar inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j)
      if (!m(row, j).is_zero()) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      QScalar f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

QMatrix nullspace(const QMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : e.pivots) is_piv[p] = true;
  std::size_t nfree = m.cols() - e.pivots.size();
  QMatrix n(m.cols(), nfree);
  std::size_t k = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    n(f, k) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) n(e.pivots[r], k) = -e.reduced(r, f);
    ++k;
  }
  return n;
}

std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b) {
  if (b.rows() != m.rows()) throw std::invalid_argument("matrix shape mismatch");
  QMatrix aug(m.rows(), m.cols() + b.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, m.cols() + j) = b(i, j);
  }
  Echelon e = rref(std::move(aug));
  QMatrix x(m.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, m.cols() + j);
  }
  return x;
}

std::optional<QVector> solve(const QMatrix& m, const QVector& b) {
  QMatrix bm(b.size(), 1);
  bm.set_column(0, b);
  auto x = solve(m, bm);
  if (!x) return std::nullopt;
  return x->column(0);
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw ArithmeticError("inverse of non-square matrix");
  auto x = solve(m, QMatrix::identity(m.rows()));
  if (!x || rank(m) != m.rows()) throw ArithmeticError("singular matrix");
  return *x;
}

}  // namespace qflag
