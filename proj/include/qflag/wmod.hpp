#pragma once

#include "qflag/uqg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qflag {

enum class Side { Left, Right };

// Weight module with exact generator matrices in column convention:
// column j of E[i] is the image of basis vector j.  For right modules the
// matrix of a product gh is M_h M_g.
struct WeightModule {
  UAlgebraPtr U;
  Side side = Side::Left;
  std::vector<Weight> wt;
  std::vector<std::string> labels;
  std::vector<QMatrix> E, F;
  // truncated modules: distance of each vector from the top and the window
  std::optional<RootSum> window;
  std::vector<RootSum> depth;
  std::optional<std::size_t> highest;  // v_lambda (or n_xi)

  std::size_t dim() const { return wt.size(); }
  bool truncated() const { return window.has_value(); }
  const CartanDatum& cartan() const { return U->cartan(); }

  QMatrix K(const Weight& mu) const;
  QMatrix word_matrix(const Word& w, bool is_e) const;
  // matrix of u acting on this module
  QMatrix act(const UElement& u) const;
  // matrix of the product x_1 x_2 ... in this module
  QMatrix product(std::initializer_list<QMatrix> factors) const;
  CharacterPoly character() const;
  std::vector<std::size_t> weight_space(const Weight& w) const;
  // columns whose images under relations of f-degree (left) or e-degree
  // (right) `extra` stay inside the truncation window
  std::vector<bool> valid_columns(const RootSum& extra) const;
};

WeightModule verma(UAlgebraPtr U, const Weight& lambda, const RootSum& depth, Side side = Side::Left);
WeightModule restricted_dual(const WeightModule& M);
// V(lambda); with a window smaller than lambda - w0 lambda only the weights
// lambda - gamma with gamma <= window are built (a top truncation)
WeightModule simple(UAlgebraPtr U, const Weight& lambda, const std::optional<RootSum>& window = std::nullopt);
WeightModule trivial(UAlgebraPtr U);
WeightModule tensor(const WeightModule& M, const WeightModule& N);

// Lusztig's T_i on a finite-dimensional left module; both triple-exponential
// expressions are computed and required to agree.
QMatrix braid_on_module(int i, const WeightModule& M, bool inverse = false);
// composition along the given letters, without reduction
QMatrix braid_along(const WeylWord& letters, const WeightModule& M, bool inverse = false);
// T_w along the canonical reduced word of w
QMatrix braid_word(const WeylWord& w, const WeightModule& M, bool inverse = false);
// tT_w on a right module, the transpose of T_w on its dual
QMatrix transpose_braid(const WeylWord& w, const WeightModule& M, bool inverse = false);
// exp_t(X) for nilpotent X with t = q^d
QMatrix exp_nilpotent(const QMatrix& X, int d, int l0);

struct RelationReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::size_t checked = 0;
};

// defining relations as matrix identities, restricted to the window
RelationReport check_relations(const WeightModule& M);

}  // namespace qflag
