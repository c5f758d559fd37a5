#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qflag {

using BigInt = boost::multiprecision::cpp_int;

struct ArithmeticError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Laurent polynomial in t = q^{1/l0}.  Stored densely from exponent `low`;
// both ends of `c` are nonzero, and the zero polynomial has empty `c`.
struct Laurent {
  int low = 0;
  std::vector<BigInt> c;

  static Laurent monomial(int e, BigInt coef);
  bool zero() const { return c.empty(); }
  int high() const { return low + static_cast<int>(c.size()) - 1; }
  bool is_one() const { return low == 0 && c.size() == 1 && c[0] == 1; }
  BigInt coeff(int e) const;
  void trim();

  friend bool operator==(const Laurent& a, const Laurent& b) {
    return a.low == b.low && a.c == b.c;
  }
  friend bool operator<(const Laurent& a, const Laurent& b);
};

Laurent operator+(const Laurent& a, const Laurent& b);
Laurent operator-(const Laurent& a, const Laurent& b);
Laurent operator-(const Laurent& a);
Laurent operator*(const Laurent& a, const Laurent& b);

// Element of Q(q^{1/l0}).  Canonical: gcd(num, den) = 1, den has lowest
// exponent 0 with a positive constant term, integer content removed.
// l0 == 0 marks a rational constant that combines with any l0.
class QScalar {
 public:
  QScalar() : den_(Laurent::monomial(0, 1)) {}
  QScalar(long long n);  // NOLINT: implicit from integers is intended
  static QScalar rational(const BigInt& n, const BigInt& d);
  // (q^{1/l0})^e
  static QScalar t_power(int e, int l0);
  // q^{num/den}; throws if l0 does not clear the denominator
  static QScalar q_power(long long num, long long den, int l0);
  static QScalar from_parts(Laurent num, Laurent den, int l0);

  int l0() const { return l0_; }
  bool is_zero() const { return num_.zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }
  const Laurent& num() const { return num_; }
  const Laurent& den() const { return den_; }

  QScalar inverse() const;
  QScalar operator-() const;
  QScalar& operator+=(const QScalar& o);
  QScalar& operator-=(const QScalar& o);
  QScalar& operator*=(const QScalar& o);
  QScalar& operator/=(const QScalar& o);
  friend QScalar operator+(QScalar a, const QScalar& b) { return a += b; }
  friend QScalar operator-(QScalar a, const QScalar& b) { return a -= b; }
  friend QScalar operator*(QScalar a, const QScalar& b) { return a *= b; }
  friend QScalar operator/(QScalar a, const QScalar& b) { return a /= b; }
  friend bool operator==(const QScalar& a, const QScalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const QScalar& a, const QScalar& b) { return !(a == b); }
  // total order on representations; only for deterministic containers
  friend bool operator<(const QScalar& a, const QScalar& b);

  // substitute t -> t^{-1}
  QScalar bar() const;

  std::string str() const;
  static QScalar parse(const std::string& text, int l0);

 private:
  void canonicalize();
  static int join_l0(int a, int b);

  Laurent num_;
  Laurent den_;
  int l0_ = 0;
};

std::string render_laurent(const Laurent& p, int l0);

// [n]_{q^d}
QScalar quantum_integer(int n, int d, int l0);
// [n]_{q^d}!
QScalar quantum_factorial(int n, int d, int l0);
// q-binomial [n choose k]_{q^d}
QScalar quantum_binomial(int n, int k, int d, int l0);
// coefficient of x^n in exp_t(x) with t = q^d; `inverse` gives the
// coefficient of x^n in exp_t(x)^{-1} = exp_{t^{-1}}(-x)
QScalar exp_t_coefficient(int n, int d, bool inverse, int l0);

}  // namespace qflag
