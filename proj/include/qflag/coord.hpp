#pragma once

#include "qflag/wmod.hpp"

#include <map>
#include <mutex>
#include <optional>

namespace qflag {

// f_lambda(v): the functional u -> <v*_lambda, u v> on U
struct CoordElement {
  Weight grade;
  QVector vec;  // coordinates in the basis of V(grade)

  bool is_zero() const { return qflag::is_zero(vec); }
};

struct ExtremalElement {
  WeylWord w;
  Weight grade;
  CoordElement element;
};

struct OreWitness {
  bool found = false;
  Weight xi;  // grade of psi
  ExtremalElement t;
  CoordElement psi;
  std::vector<Weight> tried;
};

struct LocalizationStage {
  Weight nu;              // grade lambda + mu of the representative
  std::size_t dim = 0;    // dim A(nu) at the matching weight
  std::size_t rank = 0;   // rank of multiplication by c^w into the next stage
};

struct LocalizationSpace {
  WeylWord w;
  Weight lambda;
  RootSum gamma;
  std::vector<LocalizationStage> stages;
  bool stable = false;
  std::size_t dim = 0;
  int threshold = -1;  // first stage from which every recorded transition is bijective
};

struct ThetaReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::map<RootSum, std::size_t> dims;
};

struct SchubertData {
  QScalar epsilon;
  // Phi_w(phi) on U^+ degree bases: degree -> values on basis words
  std::map<RootSum, QVector> phi;
};

class CoordAlgebra {
 public:
  // with a window only the top part V(lambda)_{lambda - gamma}, gamma <= window, is built
  explicit CoordAlgebra(UAlgebraPtr U, std::optional<RootSum> window = std::nullopt);

  const UAlgebraPtr& algebra() const { return U_; }
  const CartanDatum& cartan() const { return U_->cartan(); }
  const std::optional<RootSum>& window() const { return window_; }
  const WeightModule& module(const Weight& grade) const;
  std::size_t dim(const Weight& grade) const { return module(grade).dim(); }

  CoordElement unit() const;
  CoordElement zero(const Weight& grade) const;
  CoordElement basis(const Weight& grade, std::size_t index) const;
  Weight weight(const CoordElement& a, std::size_t index) const { return module(a.grade).wt[index]; }
  // weight if a is homogeneous
  std::optional<Weight> weight_of(const CoordElement& a) const;

  CoordElement add(const CoordElement& a, const CoordElement& b) const;
  CoordElement scale(const QScalar& s, const CoordElement& a) const;
  CoordElement mult(const CoordElement& a, const CoordElement& b) const;
  // p_{lambda,mu}: columns indexed by a * dim(mu) + b
  const QMatrix& product_table(const Weight& lambda, const Weight& mu) const;
  CoordElement act(const UElement& u, const CoordElement& a) const;
  QScalar eval(const CoordElement& a, const UElement& u) const;

  ExtremalElement extremal(const WeylWord& w, const Weight& lambda) const;

  // left: t phi = psi s ; right: phi t = s psi ; s = c^w_lambda
  OreWitness ore_witness(const CoordElement& phi, const ExtremalElement& s, bool left, int max_height) const;
  bool check_witness(const CoordElement& phi, const ExtremalElement& s, const OreWitness& wit, bool left) const;

  // (S_w^{-1}A)(lambda) at weight w^{-1}(lambda - gamma) as a direct limit along c^w_rho
  LocalizationSpace localize(const WeylWord& w, const Weight& lambda, const RootSum& gamma, int max_steps) const;
  CharacterPoly localized_character(const Weight& lambda, const RootSum& depth, int max_steps) const;
  ThetaReport theta_check(const Weight& lambda, const RootSum& depth, int max_steps) const;

  // rank of sum_w A(lambda) c^w_mu inside A(lambda + mu)
  std::size_t covering_rank(const Weight& lambda, const Weight& mu) const;

  SchubertData schubert(const WeylWord& w, const CoordElement& phi, const RootSum& depth) const;
  QScalar epsilon(const WeylWord& w, const CoordElement& phi) const;
  // dim of A_w(lambda) = rank of Phi_w on A(lambda)
  std::size_t schubert_rank(const WeylWord& w, const Weight& lambda) const;

 private:
  struct Frame {
    std::map<Weight, std::vector<Word>> words;  // spanning e-words per weight
    std::map<Weight, QMatrix> gram;             // their values on the weight basis, inverted
  };
  // p_{lambda,mu}, filled one column at a time
  struct Table {
    QMatrix p;
    std::vector<char> done;
    std::map<Word, QMatrix> fun;  // functionals on V(lambda) (x) V(mu) along frame words
    std::vector<QMatrix> et, k;
  };
  const Frame& frame(const Weight& grade) const;
  Table& table(const Weight& lambda, const Weight& mu) const;
  const QMatrix& functional(Table& t, const Weight& mu, const Word& w) const;
  void fill(Table& t, const Weight& lambda, const Weight& mu, std::size_t a, std::size_t b) const;
  Weight stage_step(const WeylWord& w) const;

  UAlgebraPtr U_;
  std::optional<RootSum> window_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Weight, std::shared_ptr<WeightModule>> modules_;
  mutable std::map<Weight, std::shared_ptr<Frame>> frames_;
  mutable std::map<std::pair<Weight, Weight>, std::shared_ptr<Table>> tables_;
};

}  // namespace qflag
