#include "qflag/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace qflag {

namespace {

using Coeffs = std::vector<BigInt>;

void trim_vec(Coeffs& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

BigInt content(const Coeffs& v) {
  BigInt g = 0;
  for (const auto& x : v) {
    if (x == 0) continue;
    g = boost::multiprecision::gcd(g, x);
    if (g == 1) break;
  }
  return g;
}

void divide_content(Coeffs& v, const BigInt& g) {
  if (g == 1 || g == 0) return;
  for (auto& x : v) x /= g;
}

// a := lc(b) * a - lc(a) x^k b, repeated until deg a < deg b
Coeffs pseudo_rem(Coeffs a, const Coeffs& b) {
  const std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    BigInt la = a.back();
    const BigInt& lb = b.back();
    std::size_t k = a.size() - 1 - db;
    BigInt g = boost::multiprecision::gcd(la, lb);
    BigInt ma = lb / g, mb = la / g;
    for (auto& x : a) x *= ma;
    for (std::size_t j = 0; j <= db; ++j) a[k + j] -= mb * b[j];
    trim_vec(a);
    BigInt cg = content(a);
    divide_content(a, cg);
  }
  return a;
}

Coeffs poly_gcd(Coeffs a, Coeffs b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.size() <= 1) return {1};
  divide_content(a, content(a));
  divide_content(b, content(b));
  if (a == b) return a;
  while (!b.empty()) {
    if (b.size() == 1) return {1};
    Coeffs r = pseudo_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  divide_content(a, content(a));
  if (a.back() < 0)
    for (auto& x : a) x = -x;
  return a;
}

// exact quotient a / b; throws if b does not divide a over Z
Coeffs div_exact(const Coeffs& a, const Coeffs& b) {
  if (a.size() < b.size()) throw ArithmeticError("inexact polynomial division");
  Coeffs r = a;
  Coeffs q(a.size() - b.size() + 1);
  const BigInt& lb = b.back();
  for (std::size_t i = q.size(); i-- > 0;) {
    BigInt& top = r[i + b.size() - 1];
    if (top == 0) continue;
    BigInt rem;
    boost::multiprecision::divide_qr(top, lb, q[i], rem);
    if (rem != 0) throw ArithmeticError("inexact polynomial division");
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= q[i] * b[j];
  }
  for (const auto& x : r)
    if (x != 0) throw ArithmeticError("inexact polynomial division");
  trim_vec(q);
  return q;
}

}  // namespace

// ---------------------------------------------------------------- Laurent

Laurent Laurent::monomial(int e, BigInt coef) {
  Laurent p;
  if (coef != 0) {
    p.low = e;
    p.c.push_back(std::move(coef));
  }
  return p;
}

BigInt Laurent::coeff(int e) const {
  if (c.empty() || e < low || e > high()) return 0;
  return c[e - low];
}

void Laurent::trim() {
  trim_vec(c);
  std::size_t lead = 0;
  while (lead < c.size() && c[lead] == 0) ++lead;
  if (lead == c.size()) {
    c.clear();
    low = 0;
    return;
  }
  if (lead) {
    c.erase(c.begin(), c.begin() + static_cast<long>(lead));
    low += static_cast<int>(lead);
  }
}

bool operator<(const Laurent& a, const Laurent& b) {
  if (a.low != b.low) return a.low < b.low;
  if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
  return a.c < b.c;
}

Laurent operator+(const Laurent& a, const Laurent& b) {
  if (a.zero()) return b;
  if (b.zero()) return a;
  Laurent r;
  r.low = std::min(a.low, b.low);
  int hi = std::max(a.high(), b.high());
  r.c.assign(static_cast<std::size_t>(hi - r.low + 1), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[a.low - r.low + i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[b.low - r.low + i] += b.c[i];
  r.trim();
  return r;
}

Laurent operator-(const Laurent& a) {
  Laurent r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

Laurent operator*(const Laurent& a, const Laurent& b) {
  Laurent r;
  if (a.zero() || b.zero()) return r;
  r.low = a.low + b.low;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.trim();
  return r;
}

// ---------------------------------------------------------------- QScalar

QScalar::QScalar(long long n) : num_(Laurent::monomial(0, n)), den_(Laurent::monomial(0, 1)) {}

QScalar QScalar::rational(const BigInt& n, const BigInt& d) {
  if (d == 0) throw ArithmeticError("division by zero");
  return from_parts(Laurent::monomial(0, n), Laurent::monomial(0, d), 0);
}

QScalar QScalar::t_power(int e, int l0) {
  QScalar s;
  s.num_ = Laurent::monomial(e, 1);
  s.l0_ = l0;
  return s;
}

QScalar QScalar::q_power(long long num, long long den, int l0) {
  if (den == 0) throw ArithmeticError("zero exponent denominator");
  long long scaled = num * l0;
  if (scaled % den != 0)
    throw ArithmeticError("exponent not in (1/l0)Z for l0 = " + std::to_string(l0));
  return t_power(static_cast<int>(scaled / den), l0);
}

QScalar QScalar::from_parts(Laurent num, Laurent den, int l0) {
  if (den.zero()) throw ArithmeticError("division by zero");
  QScalar s;
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  s.l0_ = l0;
  s.canonicalize();
  return s;
}

int QScalar::join_l0(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw ArithmeticError("mixing scalars with l0 = " + std::to_string(a) + " and " +
                        std::to_string(b));
}

void QScalar::canonicalize() {
  if (num_.zero()) {
    den_ = Laurent::monomial(0, 1);
    return;
  }
  num_.low -= den_.low;
  den_.low = 0;
  if (den_.c.size() > 1) {
    int nlow = num_.low;
    Coeffs g = poly_gcd(num_.c, den_.c);
    if (g.size() > 1) {
      num_.c = div_exact(num_.c, g);
      den_.c = div_exact(den_.c, g);
    }
    num_.low = nlow;
  }
  BigInt cg = boost::multiprecision::gcd(content(num_.c), content(den_.c));
  divide_content(num_.c, cg);
  divide_content(den_.c, cg);
  if (den_.c.front() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

QScalar QScalar::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero");
  QScalar r;
  r.num_ = den_;
  r.den_ = num_;
  r.l0_ = l0_;
  r.canonicalize();
  return r;
}

QScalar QScalar::operator-() const {
  QScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

QScalar& QScalar::operator+=(const QScalar& o) {
  l0_ = join_l0(l0_, o.l0_);
  if (o.is_zero()) return *this;
  if (is_zero()) {
    num_ = o.num_;
    den_ = o.den_;
    return *this;
  }
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ + o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ = num_ + o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  canonicalize();
  return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) { return *this += -o; }

QScalar& QScalar::operator*=(const QScalar& o) {
  l0_ = join_l0(l0_, o.l0_);
  if (is_zero()) return *this;
  if (o.is_zero()) {
    *this = QScalar();
    l0_ = join_l0(l0_, o.l0_);
    return *this;
  }
  num_ = num_ * o.num_;
  if (den_.is_one() && o.den_.is_one()) return *this;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

QScalar& QScalar::operator/=(const QScalar& o) { return *this *= o.inverse(); }

bool operator<(const QScalar& a, const QScalar& b) {
  if (!(a.num_ == b.num_)) return a.num_ < b.num_;
  return a.den_ < b.den_;
}

QScalar QScalar::bar() const {
  auto flip = [](const Laurent& p) {
    Laurent r;
    if (p.zero()) return r;
    r.low = -p.high();
    r.c.assign(p.c.rbegin(), p.c.rend());
    return r;
  };
  return from_parts(flip(num_), flip(den_), l0_);
}

// ---------------------------------------------------------------- text

namespace {

std::string exponent_text(int e, int l0) {
  int l = l0 == 0 ? 1 : l0;
  int g = std::gcd(e < 0 ? -e : e, l);
  int n = e / g, d = l / g;
  if (d == 1) return std::to_string(n);
  return "(" + std::to_string(n) + "/" + std::to_string(d) + ")";
}

}  // namespace

std::string render_laurent(const Laurent& p, int l0) {
  if (p.zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = p.high(); e >= p.low; --e) {
    BigInt k = p.coeff(e);
    if (k == 0) continue;
    bool neg = k < 0;
    BigInt a = neg ? BigInt(-k) : k;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (e == 0) {
      os << a;
      continue;
    }
    if (a != 1) os << a << "*";
    os << "q";
    std::string ex = exponent_text(e, l0);
    if (ex != "1") os << "^" << ex;
  }
  return os.str();
}

std::string QScalar::str() const {
  if (den_.is_one()) return render_laurent(num_, l0_);
  // present the denominator centred around exponent 0 with a positive top term
  Laurent n = num_, d = den_;
  int shift = (d.high() + d.low) / 2;
  n.low -= shift;
  d.low -= shift;
  if (d.c.back() < 0) {
    n = -n;
    d = -d;
  }
  auto wrap = [&](const Laurent& p) {
    std::string s = render_laurent(p, l0_);
    int terms = 0;
    for (const auto& x : p.c) terms += x != 0;
    bool bare = terms == 1 && (p.c.size() == 1) && (p.low == 0 || p.coeff(p.low) == 1);
    return bare ? s : "(" + s + ")";
  };
  return wrap(n) + "/" + wrap(d);
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, int l0) : s_(s), l0_(l0) {}

  QScalar run() {
    QScalar v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("scalar parse error at " + std::to_string(pos_) + ": " + why + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  long long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  BigInt big_integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return BigInt(s_.substr(start, pos_ - start));
  }
  long long signed_integer() {
    bool neg = false;
    while (true) {
      if (eat('-')) neg = !neg;
      else if (!eat('+')) break;
    }
    long long v = integer();
    return neg ? -v : v;
  }

  QScalar expr() {
    QScalar v;
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    v = term();
    if (neg) v = -v;
    while (true) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else break;
    }
    return v;
  }

  QScalar term() {
    QScalar v = power();
    while (true) {
      if (eat('*')) v *= power();
      else if (eat('/')) {
        QScalar d = power();
        if (d.is_zero()) throw ArithmeticError("division by zero");
        v /= d;
      } else {
        char c = peek();
        if (c == 'q' || c == '(') v *= power();  // implicit product such as 2q
        else break;
      }
    }
    return v;
  }

  QScalar power() {
    char c = peek();
    if (c == 'q') {
      ++pos_;
      if (!eat('^')) return QScalar::t_power(l0_, l0_);
      long long num, den = 1;
      if (eat('(')) {
        num = signed_integer();
        if (eat('/')) den = integer();
        if (!eat(')')) fail("expected ')'");
      } else {
        num = signed_integer();
      }
      if (den == 0) fail("zero exponent denominator");
      try {
        return QScalar::q_power(num, den, l0_);
      } catch (const ArithmeticError&) {
        fail("fractional exponent incompatible with l0");
      }
    }
    QScalar base;
    if (c == '(') {
      ++pos_;
      base = expr();
      if (!eat(')')) fail("expected ')'");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      base = QScalar::rational(big_integer(), 1);
    } else {
      fail("expected operand");
    }
    if (eat('^')) {
      long long e;
      if (eat('(')) {
        e = signed_integer();
        if (!eat(')')) fail("expected ')'");
      } else {
        e = signed_integer();
      }
      QScalar r(1);
      QScalar b = e < 0 ? base.inverse() : base;
      for (long long i = 0; i < (e < 0 ? -e : e); ++i) r *= b;
      return r;
    }
    return base;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int l0_;
};

}  // namespace

QScalar QScalar::parse(const std::string& text, int l0) {
  if (l0 <= 0) throw ParseError("l0 must be positive");
  return Parser(text, l0).run();
}

// ---------------------------------------------------------------- quantum numbers

QScalar quantum_integer(int n, int d, int l0) {
  if (n < 0) throw std::invalid_argument("quantum_integer: negative n");
  if (n == 0) return QScalar(0);
  int step = 2 * d * l0;
  Laurent p;
  p.low = -d * l0 * (n - 1);
  p.c.assign(static_cast<std::size_t>(step * (n - 1) + 1), 0);
  for (int k = 0; k < n; ++k) p.c[static_cast<std::size_t>(k * step)] = 1;
  return QScalar::from_parts(p, Laurent::monomial(0, 1), l0);
}

QScalar quantum_factorial(int n, int d, int l0) {
  QScalar r = QScalar::t_power(0, l0);
  for (int k = 2; k <= n; ++k) r *= quantum_integer(k, d, l0);
  return r;
}

QScalar quantum_binomial(int n, int k, int d, int l0) {
  if (k < 0 || k > n) return QScalar(0);
  return quantum_factorial(n, d, l0) /
         (quantum_factorial(k, d, l0) * quantum_factorial(n - k, d, l0));
}

QScalar exp_t_coefficient(int n, int d, bool inverse, int l0) {
  // exp_t(x)^{-1} = exp_{t^{-1}}(-x)
  int dd = inverse ? -d : d;
  int ad = dd < 0 ? -dd : dd;
  QScalar c = QScalar::t_power(dd * l0 * (n * (n - 1) / 2), l0) / quantum_factorial(n, ad, l0);
  if (inverse && (n % 2)) c = -c;
  return c;
}

}  // namespace qflag
