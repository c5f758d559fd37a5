#pragma once

#include "qflag/wmod.hpp"

#include <map>
#include <mutex>

namespace qflag {

struct PairingTable {
  RootSum degree;
  std::vector<Word> plus, minus;  // basis words of U^+_beta and U^-_{-beta}
  QMatrix matrix;                 // (x_a, y_b)
};

struct CanonicalElement {
  RootSum degree;
  std::vector<Word> plus, minus;
  QMatrix coeff;  // Xi_beta = sum coeff(a,b) x_a (x) y_b
  // x_p (x) y_p with sum_p x_p (x) y_p = q^{(beta,beta)} (1 (x) k_beta)(S (x) id)(Xi_beta)
  std::vector<std::pair<UElement, UElement>> inverse_side;
};

enum class RFlavor { R, RInverse, RCheck, Kappa };

struct ROperator {
  RFlavor flavor;
  std::size_t dim_left = 0, dim_right = 0;  // dims of V and V'
  QMatrix matrix;                           // on V (x) V' (V' (x) V for RCheck)
};

class Pairing {
 public:
  explicit Pairing(UAlgebraPtr U) : U_(std::move(U)) {}
  const UAlgebraPtr& algebra() const { return U_; }

  // (x, y) for x in U^{>=0}, y in U^{<=0}
  QScalar operator()(const UElement& x, const UElement& y) const;
  // pairing of raw words e_{x1}...e_{xn} and f_{y1}...f_{ym}
  QScalar words(const Word& x, const Word& y) const;
  const PairingTable& table(const RootSum& beta) const;
  const CanonicalElement& xi(const RootSum& beta) const;

  // degrees beta that can act nontrivially on the given module
  RootSum reach(const WeightModule& V) const;

  ROperator kappa(const WeightModule& V, const WeightModule& W, bool inverse = false) const;
  // the operator Xi on V (x) V'
  QMatrix xi_operator(const WeightModule& V, const WeightModule& W) const;
  ROperator r_operator(const WeightModule& V, const WeightModule& W, RFlavor flavor) const;

 private:
  UAlgebraPtr U_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Word, Word>, QScalar> word_memo_;
  mutable std::map<RootSum, PairingTable> tables_;
  mutable std::map<RootSum, CanonicalElement> xis_;
};

// tau: V (x) W -> W (x) V
QMatrix flip(std::size_t dv, std::size_t dw);

struct HexagonReport {
  bool ok = true;
  std::vector<std::string> mismatches;
};

// (R^v_{V,V''} (x) id)(id (x) R^v_{V',V''}) against R^v_{V (x) V', V''}
HexagonReport hexagon_check(const Pairing& P, const WeightModule& V, const WeightModule& V2, const WeightModule& V3);

}  // namespace qflag
