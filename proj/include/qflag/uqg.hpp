#pragma once

#include "qflag/cartan.hpp"
#include "qflag/linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qflag {

// Raised when a computation would need U^± beyond the configured height.
struct DegreeCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Sign { Plus, Minus };

// word in the generators e_i (or f_i); letters are 0-based indices
using Word = std::vector<int>;

struct GradedBasis {
  RootSum degree;
  std::vector<Word> words;  // basis of U^+_beta (same words index U^-_{-beta})
  // coordinates of every word of this degree in the basis
  std::map<Word, std::vector<std::pair<std::size_t, QScalar>>> word_index;

  std::size_t size() const { return words.size(); }
  std::size_t position(const Word& w) const;
};

// Normal monomial f-word * k_lambda * e-word with basis words.
struct Mono {
  Word f;
  Weight k;
  Word e;
  friend bool operator<(const Mono& a, const Mono& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.e != b.e) return a.e < b.e;
    return a.k < b.k;
  }
  friend bool operator==(const Mono& a, const Mono& b) { return a.f == b.f && a.k == b.k && a.e == b.e; }
};

class UElement {
 public:
  std::map<Mono, QScalar> terms;

  UElement() = default;
  static UElement monomial(Mono m, QScalar c);

  bool is_zero() const { return terms.empty(); }
  void add(const Mono& m, const QScalar& c);
  UElement& operator+=(const UElement& o);
  UElement& operator-=(const UElement& o);
  UElement& operator*=(const QScalar& s);
  friend UElement operator+(UElement a, const UElement& b) { return a += b; }
  friend UElement operator-(UElement a, const UElement& b) { return a -= b; }
  friend UElement operator-(UElement a) { return a *= QScalar(-1); }
  friend UElement operator*(const QScalar& s, UElement a) { return a *= s; }
  friend bool operator==(const UElement& a, const UElement& b) { return a.terms == b.terms; }
  friend bool operator!=(const UElement& a, const UElement& b) { return !(a == b); }
  friend bool operator<(const UElement& a, const UElement& b) { return a.terms < b.terms; }
};

// Element of U^{\otimes n}, stored on tuples of normal monomials.
struct HopfTensor {
  int arity = 2;
  std::map<std::vector<Mono>, QScalar> terms;

  void add(const std::vector<Mono>& m, const QScalar& c);
  HopfTensor& operator+=(const HopfTensor& o);
  friend bool operator==(const HopfTensor& a, const HopfTensor& b) {
    return a.arity == b.arity && a.terms == b.terms;
  }
};

int default_max_height();  // QFLAG_MAX_HEIGHT or 8

class UAlgebra {
 public:
  explicit UAlgebra(CartanDatum c, int max_height = default_max_height());

  const CartanDatum& cartan() const { return c_; }
  int max_height() const { return max_height_; }
  int rank() const { return c_.rank(); }

  RootSum degree(const Word& w) const;
  const GradedBasis& basis(const RootSum& beta) const;
  // basis words of U^+ for every degree in the box, ordered by degree
  std::vector<Word> words_in_box(const RootSum& box) const;
  // expansion of an arbitrary word in the basis of its degree
  const std::vector<std::pair<Word, QScalar>>& reduce(const Word& w) const;
  // Serre element for (i, j) as a combination of raw words
  std::vector<std::pair<Word, QScalar>> serre(int i, int j) const;

  // generators and constructors
  UElement one() const;
  UElement scalar(const QScalar& s) const;
  UElement e(int i) const;
  UElement f(int i) const;
  UElement k(const Weight& w) const;
  UElement ki(int i, int power = 1) const;
  UElement E(const Word& w) const;
  UElement F(const Word& w) const;
  UElement e_divided(int i, int n) const;
  UElement f_divided(int i, int n) const;

  UElement mul(const UElement& a, const UElement& b) const;
  UElement mul(std::initializer_list<UElement> xs) const;
  UElement pow(const UElement& a, int n) const;
  UElement commutator(const UElement& a, const UElement& b) const;
  // Lambda-weight of a homogeneous element; throws if inhomogeneous
  Weight weight(const UElement& u) const;

  HopfTensor coproduct(const UElement& u, int arity = 2) const;
  HopfTensor tensor_mul(const HopfTensor& a, const HopfTensor& b) const;
  UElement antipode(const UElement& u, bool inverse = false) const;
  QScalar counit(const UElement& u) const;
  QScalar chi(const Weight& lambda, const UElement& u, Sign side) const;

  UElement braid(int i, const UElement& u, bool inverse = false) const;
  // T_w = T_{i1} ... T_{in}; inverse gives T_w^{-1}
  UElement braid_word(const WeylWord& w, const UElement& u, bool inverse = false) const;

  std::string str(const UElement& u) const;
  std::string str(const Mono& m) const;
  UElement parse(const std::string& text) const;

 private:
  void check_height(const Word& w) const;
  UElement mono_mul(const Mono& a, const Mono& b) const;
  const UElement& straighten(const Word& e, const Word& f) const;
  // F-word times normal element, E-word on the right, k-shifts
  UElement braid_generator(int i, int gen, bool is_e, bool inverse) const;
  const UElement& braid_word_image(int i, const Word& w, bool is_e, bool inverse) const;
  const UElement& antipode_word(const Word& w, bool is_e, bool inverse) const;
  std::vector<std::pair<std::vector<int>, QScalar>> coproduct_word(const Word& w, bool is_e) const;

  CartanDatum c_;
  int max_height_;

  mutable std::mutex basis_mu_;
  mutable std::map<RootSum, std::unique_ptr<GradedBasis>> bases_;
  mutable std::mutex reduce_mu_;
  mutable std::map<Word, std::vector<std::pair<Word, QScalar>>> reduced_;
  mutable std::mutex straighten_mu_;
  mutable std::map<std::pair<Word, Word>, UElement> straight_;
  mutable std::mutex braid_mu_;
  mutable std::map<std::tuple<int, Word, bool, bool>, UElement> braid_words_;
  mutable std::map<std::tuple<int, int, bool, bool>, UElement> braid_gens_;
  mutable std::mutex antipode_mu_;
  mutable std::map<std::tuple<Word, bool, bool>, UElement> antipode_words_;
};

using UAlgebraPtr = std::shared_ptr<const UAlgebra>;

}  // namespace qflag
