#pragma once

#include "qflag/coord.hpp"
#include "qflag/rmatrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qflag {

// Graded operator on a window of A: blocks[xi] maps A(xi) to A(xi + grade).
struct DOperator {
  std::string expr;
  Weight grade;
  std::map<Weight, QMatrix> blocks;
};

struct Counterexample {
  std::string relation;
  std::string lhs_expr, rhs_expr;
  std::string input;  // grade and basis index of the input vector
  std::string lhs, rhs;
};

struct DReport {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<Counterexample> failures;
  void record(std::optional<Counterexample> c) {
    ++checked;
    if (c) {
      ok = false;
      failures.push_back(std::move(*c));
    }
  }
};

std::string render(const Counterexample& c);
std::string render_vector(const QVector& v);

// Realization of D_q on the dominant grades componentwise below `cutoff`.
class DWindow {
 public:
  DWindow(const CoordAlgebra& A, Weight cutoff);

  const CoordAlgebra& coord() const { return *A_; }
  const CartanDatum& cartan() const { return A_->cartan(); }
  const Weight& cutoff() const { return cutoff_; }
  const std::vector<Weight>& grades() const { return grades_; }
  bool contains(const Weight& g) const;

  DOperator identity() const;
  DOperator ell(const CoordElement& phi, std::string name = "phi") const;
  DOperator r(const CoordElement& psi, std::string name = "psi") const;
  DOperator partial(const UElement& u, std::string name = "") const;
  DOperator sigma(const Weight& lambda) const;

  DOperator compose(const DOperator& a, const DOperator& b) const;  // a after b
  DOperator add(const DOperator& a, const DOperator& b) const;
  DOperator scale(const QScalar& s, const DOperator& a) const;
  DOperator zero(const Weight& grade) const;

  // first column where a and b differ on their common domain
  std::optional<Counterexample> compare(const DOperator& a, const DOperator& b, const std::string& relation) const;

  // T_i on A(xi); `lusztig` multiplies the triple-exponential operator by (-1)^{<wt, alpha_i^v>}
  const QMatrix& braid(int i, const Weight& xi, bool inverse, bool lusztig) const;
  // Z_{s_i}(d) = T_i^{-1} d T_i
  DOperator conjugate(int i, const DOperator& d, bool lusztig) const;

 private:
  const CoordAlgebra* A_;
  Weight cutoff_;
  std::vector<Weight> grades_;
  mutable std::map<std::tuple<int, Weight, bool, bool>, QMatrix> braids_;
};

// basis elements of A(g) for every nonzero grade of the window
std::vector<CoordElement> window_basis(const DWindow& D);

// the commutation relations on generators e_i, f_i, k_{varpi_i} and basis elements
// `extra` elements join the basis in the l_phi checks; inject_fault rescales one coproduct term (negative control)
DReport relations_check(const DWindow& D, const std::vector<Weight>& sigma_probes, bool inject_fault = false,
                        const std::vector<CoordElement>& extra = {});
// r_psi and l_psi through the elements x_p (x) y_p
DReport lemma_rl_check(const DWindow& D, const Pairing& P, const CoordElement& psi);
// Z_{s_i} on sigma, on d_u for generators, on l_phi for basis phi, and on extremal phi
DReport z_w_check(const DWindow& D, int i, bool lusztig = true);

// ---------------------------------------------------------------- Theta_xi

enum class DToken { PartialE, PartialF, PartialK, Sigma, LeftPhi, RightPhi };

struct DLetter {
  DToken kind;
  int i = 0;     // generator index (PartialE/F, LeftPhi, RightPhi)
  Weight mu;     // PartialK, Sigma
  std::string str() const;
};

using DWord = std::vector<DLetter>;

// Theta_xi on U^+ truncated to a depth box, from the explicit operators M, N, P, Q
class ThetaRealization {
 public:
  ThetaRealization(UAlgebraPtr U, const Pairing& P, Weight xi, RootSum depth);
  std::size_t dim() const { return words_.size(); }
  const std::vector<RootSum>& depths() const { return depth_; }

  QMatrix M(int i) const;                 // u -> u e_i
  QMatrix N(const Weight& mu) const;      // u -> q^{(mu, deg u)} u
  QMatrix P_phi(int i) const;             // u -> sum <phi_i, u(0)> u(1)
  QMatrix Q_phi(int i) const;             // u -> sum <phi_i, u(1)> k^{-1} u(0)
  QMatrix formula(const DLetter& d) const;
  // right Verma action and coproduct-based operators
  QMatrix direct(const DLetter& d) const;
  QMatrix word(const DWord& w, bool use_formula) const;  // Theta is an anti-homomorphism
  // columns where a letter can be evaluated exactly
  std::vector<bool> valid(const DLetter& d) const;

 private:
  UAlgebraPtr U_;
  const Pairing* P_;
  Weight xi_;
  RootSum depth_box_;
  std::vector<Word> words_;
  std::vector<RootSum> depth_;
  std::map<Word, std::size_t> index_;
  WeightModule right_;
  QVector coords(const Word& w) const;  // expand an arbitrary word
};

struct ThetaBuildReport {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> failures;
};

// formula against direct action for generator letters on every probe
ThetaBuildReport theta_build(UAlgebraPtr U, const Pairing& P, const std::vector<Weight>& probes, const RootSum& depth);

struct FaithfulnessReport {
  std::size_t size = 0;
  std::size_t rank = 0;
  bool independent() const { return rank == size; }
};

// rank of {Theta(d)} over the probes, words evaluated exactly on the given depth
FaithfulnessReport theta_faithfulness_probe(UAlgebraPtr U, const Pairing& P, const std::vector<Weight>& probes,
                                            const RootSum& depth, const std::vector<DWord>& span);

// ---------------------------------------------------------------- center

struct CentralElement {
  UElement z;
  std::map<Weight, QScalar> hc;  // U^0 part: k_mu -> coefficient
};

// basis of central elements spanned by F_a k_mu E_b with deg a = deg b of height <= max_height/2 and mu in the box
std::vector<CentralElement> center_solve(UAlgebraPtr U, int max_height, int k_box);
bool is_central(const UAlgebra& U, const UElement& z);
// zeta_lambda(zeta(z)) = sum c_mu q^{(lambda, mu)}
QScalar zeta_at(const CartanDatum& c, const CentralElement& z, const Weight& lambda);
// w o e(lambda) = q^{(w lambda - lambda, rho)} e(w lambda) fixes zeta(z)
bool dot_invariant(const CartanDatum& c, const CentralElement& z);
// d_z against sigma o zeta(z) on the window
DReport center_operator_check(const DWindow& D, const CentralElement& z);

struct ZetaScanEntry {
  Weight a, b;
  bool equal = false;   // zeta_a = zeta_b on every element
  bool linked = false;  // a in W o b
};
std::vector<ZetaScanEntry> zeta_scan(const CartanDatum& c, const std::vector<CentralElement>& zs,
                                     const std::vector<Weight>& weights);

struct AnnihilatorReport {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> failures;
};
// z - zeta_{character}(z) kills T(lambda) and its restricted dual through the given depth
AnnihilatorReport annihilator_check(UAlgebraPtr U, const CentralElement& z, const Weight& lambda,
                                    const Weight& character, const RootSum& depth);

}  // namespace qflag
