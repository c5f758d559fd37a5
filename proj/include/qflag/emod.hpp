#pragma once

#include "qflag/coord.hpp"
#include "qflag/rmatrix.hpp"

namespace qflag {

// weight layer of V(mu), ordered from the lowest weight upwards
struct FiltrationLayer {
  int index = 0;  // 1-based
  Weight nu;
  std::size_t mult = 0;
  std::vector<std::size_t> basis;  // basis vectors of V(mu) of weight nu
};

// labeling nu_1 = w0 mu, ..., nu_n = mu by height above the lowest weight
std::vector<FiltrationLayer> filtration_layers(const CartanDatum& c, const Weight& mu);
// minimal lambda0 with lambda0 + nu dominant for all weights nu of V(mu)
Weight lambda_zero(const CartanDatum& c, const Weight& mu);

struct BimoduleReport {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> failures;
};

struct CommutationResult {
  bool ok = false;
  QScalar scalar;
};

// E^mu = V(mu) (x) A, graded piece E^mu(lambda) = V(mu) (x) A(lambda) with index v * dim A(lambda) + a
class EBimodule {
 public:
  EBimodule(const CoordAlgebra& A, const Pairing& P, Weight mu);

  const Weight& mu() const { return mu_; }
  const WeightModule& fiber() const { return A_.module(mu_); }
  const std::vector<FiltrationLayer>& layers() const { return layers_; }
  const Weight& lambda0() const { return lambda0_; }
  std::size_t dim(const Weight& lambda) const { return fiber().dim() * A_.dim(lambda); }

  // eta = R^v : A(lambda) (x) V(mu) -> V(mu) (x) A(lambda) and its inverse
  const QMatrix& eta(const Weight& lambda, bool inverse = false) const;

  QVector right(const QVector& e, const Weight& lambda, const CoordElement& psi) const;
  QVector left(const CoordElement& phi, const QVector& e, const Weight& lambda) const;
  // v (x) 1 and eta(1 (x) v)
  QVector embed(std::size_t v, bool through_eta) const;

  // (phi e) psi = phi (e psi) on basis triples, unit laws, the embedding diagram, flag stability
  BimoduleReport check(const std::vector<Weight>& grades) const;

  // phi vbar_k = q^{-(nu_k, xi)} vbar_k phi modulo the lower layers
  CommutationResult commutation_scalar(int k, const CoordElement& phi) const;

  // columns spanning Ebar_k(lambda): the isotypic parts V(lambda + nu_j), j <= k, of V(mu) (x) A(lambda)
  QMatrix isotypic_span(int k, const Weight& lambda) const;
  // tau(xi) for a layer of multiplicity one: c m = tau(xi) m c modulo Ebar_{k-1}, with m the
  // highest vector of the layer at lambda and c = c_xi ; nullopt for larger multiplicities
  std::optional<QScalar> tau(int k, const Weight& xi, const Weight& lambda) const;

  CharacterPoly layer_character(int k, const Weight& lambda) const;
  // sum of layer characters equals ch V(mu) * ch V(lambda)
  bool total_character_ok(const Weight& lambda) const;

 private:
  std::size_t layer_of(std::size_t v) const { return layer_index_[v]; }

  const CoordAlgebra& A_;
  const Pairing& P_;
  Weight mu_;
  std::vector<FiltrationLayer> layers_;
  std::vector<std::size_t> layer_index_;
  Weight lambda0_;
  mutable std::mutex mu_lock_;
  mutable std::map<std::pair<Weight, bool>, std::shared_ptr<QMatrix>> eta_;
};

struct KeyLayer {
  int k = 0;
  Weight nu;
  Weight target;  // lambda + nu_k - w0 mu for key2, lambda + nu_k for key3
  bool linked = false;
  WeylWord witness;  // w with w o reference = target
};

struct KeyLemmaReport {
  Weight lambda, mu;
  bool key2_pre = false, key3_pre = false;  // lambda + rho dominant ; lambda dominant
  bool key2_iff = false, key3_iff = false;  // linked exactly for k = 1 ; exactly for k = n
  std::vector<KeyLayer> key2, key3;
};

KeyLemmaReport key_lemma_characters(const CartanDatum& c, const Weight& lambda, const Weight& mu);

// w with w o x = y, if any
std::optional<WeylWord> linkage_witness(const CartanDatum& c, const Weight& x, const Weight& y);

}  // namespace qflag
