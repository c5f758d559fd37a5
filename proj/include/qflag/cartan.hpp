#pragma once

#include "qflag/scalars.hpp"

#include <boost/rational.hpp>

#include <map>
#include <string>
#include <vector>

namespace qflag {

using Rational = boost::rational<long long>;

// Integral weight in the fundamental weight basis.
struct Weight {
  std::vector<int> c;

  Weight() = default;
  explicit Weight(std::vector<int> v) : c(std::move(v)) {}
  static Weight zero(int rank) { return Weight(std::vector<int>(static_cast<std::size_t>(rank), 0)); }
  int rank() const { return static_cast<int>(c.size()); }
  int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  bool dominant() const;
  bool is_zero() const;

  Weight& operator+=(const Weight& o);
  Weight& operator-=(const Weight& o);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator-(Weight a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  friend Weight operator*(int k, Weight a) {
    for (auto& x : a.c) x *= k;
    return a;
  }
  friend bool operator==(const Weight& a, const Weight& b) { return a.c == b.c; }
  friend bool operator!=(const Weight& a, const Weight& b) { return a.c != b.c; }
  friend bool operator<(const Weight& a, const Weight& b) { return a.c < b.c; }

  std::string str() const;  // "[a,b]"
  static Weight parse(const std::string& s);
};

// Element of Q^+ (or of Q when differences are taken) in the simple root basis.
struct RootSum {
  std::vector<int> c;

  RootSum() = default;
  explicit RootSum(std::vector<int> v) : c(std::move(v)) {}
  static RootSum zero(int rank) { return RootSum(std::vector<int>(static_cast<std::size_t>(rank), 0)); }
  static RootSum simple(int rank, int i);
  int rank() const { return static_cast<int>(c.size()); }
  int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  int height() const;
  bool nonneg() const;
  bool is_zero() const;
  // componentwise <=
  bool le(const RootSum& o) const;

  RootSum& operator+=(const RootSum& o);
  RootSum& operator-=(const RootSum& o);
  friend RootSum operator+(RootSum a, const RootSum& b) { return a += b; }
  friend RootSum operator-(RootSum a, const RootSum& b) { return a -= b; }
  friend RootSum operator*(int k, RootSum a) {
    for (auto& x : a.c) x *= k;
    return a;
  }
  friend bool operator==(const RootSum& a, const RootSum& b) { return a.c == b.c; }
  friend bool operator!=(const RootSum& a, const RootSum& b) { return a.c != b.c; }
  friend bool operator<(const RootSum& a, const RootSum& b) { return a.c < b.c; }

  std::string str() const;  // "<a,b>"
  static RootSum parse(const std::string& s);
};

// All gamma with 0 <= gamma <= box, ordered by height then lexicographically.
std::vector<RootSum> root_box(const RootSum& box);

using WeylWord = std::vector<int>;
std::string word_str(const WeylWord& w);

struct CharacterPoly {
  std::map<Weight, long long> terms;

  void add(const Weight& w, long long k);
  long long coeff(const Weight& w) const;
  long long dimension() const;
  CharacterPoly operator+(const CharacterPoly& o) const;
  CharacterPoly operator*(const CharacterPoly& o) const;
  friend bool operator==(const CharacterPoly& a, const CharacterPoly& b) { return a.terms == b.terms; }
  std::string str() const;
};

class CartanDatum {
 public:
  static CartanDatum preset(const std::string& name);
  static CartanDatum from_matrix(const std::vector<std::vector<int>>& a, std::string name = "custom");

  const std::string& name() const { return name_; }
  int rank() const { return n_; }
  int a(int i, int j) const { return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const std::vector<std::vector<int>>& matrix() const { return a_; }
  int d(int i) const { return d_[static_cast<std::size_t>(i)]; }
  int l0() const { return l0_; }

  Weight fundamental(int i) const;
  Weight rho() const;
  Weight alpha(int i) const;
  Weight weight_of(const RootSum& b) const;
  // coordinates of a weight in the simple root basis
  std::vector<Rational> root_coords(const Weight& w) const;
  // exact root-lattice element, throws if w is not in Q
  RootSum to_root_sum(const Weight& w) const;
  bool in_root_lattice(const Weight& w) const;

  Rational form(const Weight& x, const Weight& y) const;
  Rational form(const RootSum& x, const RootSum& y) const;
  Rational form(const Weight& x, const RootSum& y) const;
  // l0 * (x, y), always an integer
  int form_t(const Weight& x, const Weight& y) const;
  // q^{(x,y)}
  QScalar q_form(const Weight& x, const Weight& y) const;
  QScalar q_pow_t(int e) const { return QScalar::t_power(e, l0_); }
  // q_i^k = q^{k d_i}
  QScalar qi(int i, int k = 1) const { return QScalar::t_power(k * d(i) * l0_, l0_); }
  QScalar one() const { return QScalar::t_power(0, l0_); }

  Weight reflect(int i, const Weight& w) const;
  RootSum reflect(int i, const RootSum& b) const;
  // w = s_{i1} ... s_{in} acting on the left
  Weight act(const WeylWord& w, const Weight& x, bool shifted = false) const;

  const std::vector<WeylWord>& weyl_group() const { return group_; }
  WeylWord reduce(const WeylWord& w) const;
  int length(const WeylWord& w) const { return static_cast<int>(reduce(w).size()); }
  WeylWord longest() const { return group_.back(); }
  WeylWord inverse(const WeylWord& w) const;
  WeylWord multiply(const WeylWord& a, const WeylWord& b) const;
  // sign (-1)^{l(w)}
  int sign(const WeylWord& w) const { return length(w) % 2 ? -1 : 1; }

  // positive roots ordered by height then lexicographically
  const std::vector<RootSum>& positive_roots() const { return pos_roots_; }
  long long kostant(const RootSum& g) const;

  CharacterPoly weyl_character(const Weight& lambda) const;
  CharacterPoly verma_character(const Weight& lambda, const RootSum& depth) const;

  // x lies in W o y
  bool linked(const Weight& x, const Weight& y) const;

  friend bool operator==(const CartanDatum& a, const CartanDatum& b) { return a.a_ == b.a_; }
  std::string describe() const;

 private:
  void build();

  std::string name_;
  int n_ = 0;
  std::vector<std::vector<int>> a_;
  std::vector<int> d_;
  int l0_ = 1;
  std::vector<std::vector<Rational>> gram_;     // (varpi_i, varpi_k)
  std::vector<std::vector<Rational>> inv_a_;    // inverse Cartan matrix
  std::vector<WeylWord> group_;                 // canonical words, by length
  std::map<Weight, std::size_t> by_rho_;        // w rho -> index in group_
  std::vector<RootSum> pos_roots_;
};

}  // namespace qflag
