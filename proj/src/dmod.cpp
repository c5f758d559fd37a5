#include "qflag/dmod.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qflag {

namespace {

UElement mono_element(const Mono& m) { return UElement::monomial(m, QScalar(1)); }

RootSum componentwise_max(const RootSum& a, const RootSum& b) {
  RootSum r = a;
  for (int i = 0; i < a.rank(); ++i) r.c[static_cast<std::size_t>(i)] = std::max(a[i], b[i]);
  return r;
}

RootSum word_degree(int rank, const Word& w) {
  RootSum r = RootSum::zero(rank);
  for (int i : w) ++r.c[static_cast<std::size_t>(i)];
  return r;
}

std::string grade_input(const Weight& xi, std::size_t j) {
  return "A(" + xi.str() + ") basis " + std::to_string(j);
}

}  // namespace

std::string render_vector(const QVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + ")";
}

std::string render(const Counterexample& c) {
  return c.relation + ": " + c.lhs_expr + " vs " + c.rhs_expr + " on " + c.input + ": " + c.lhs + " != " + c.rhs;
}

// ---------------------------------------------------------------- window

DWindow::DWindow(const CoordAlgebra& A, Weight cutoff) : A_(&A), cutoff_(std::move(cutoff)) {
  const int n = A.cartan().rank();
  if (cutoff_.rank() != n || !cutoff_.dominant()) throw std::invalid_argument("window cutoff must be dominant");
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  while (true) {
    grades_.emplace_back(cur);
    int p = 0;
    while (p < n && ++cur[static_cast<std::size_t>(p)] > cutoff_[p]) cur[static_cast<std::size_t>(p++)] = 0;
    if (p == n) break;
  }
  std::sort(grades_.begin(), grades_.end());
}

bool DWindow::contains(const Weight& g) const {
  for (int i = 0; i < g.rank(); ++i)
    if (g[i] < 0 || g[i] > cutoff_[i]) return false;
  return true;
}

DOperator DWindow::zero(const Weight& grade) const {
  DOperator d{"0", grade, {}};
  for (const auto& xi : grades_)
    if (contains(xi + grade)) d.blocks[xi] = QMatrix(A_->dim(xi + grade), A_->dim(xi));
  return d;
}

DOperator DWindow::identity() const {
  DOperator d{"id", Weight::zero(cartan().rank()), {}};
  for (const auto& xi : grades_) d.blocks[xi] = QMatrix::identity(A_->dim(xi));
  return d;
}

DOperator DWindow::ell(const CoordElement& phi, std::string name) const {
  DOperator d{"l[" + name + "]", phi.grade, {}};
  for (const auto& xi : grades_) {
    if (!contains(xi + phi.grade)) continue;
    const std::size_t dx = A_->dim(xi);
    QMatrix b(A_->dim(xi + phi.grade), dx);
    for (std::size_t j = 0; j < dx; ++j) b.set_column(j, A_->mult(phi, A_->basis(xi, j)).vec);
    d.blocks[xi] = std::move(b);
  }
  return d;
}

DOperator DWindow::r(const CoordElement& psi, std::string name) const {
  DOperator d{"r[" + name + "]", psi.grade, {}};
  for (const auto& xi : grades_) {
    if (!contains(xi + psi.grade)) continue;
    const std::size_t dx = A_->dim(xi);
    QMatrix b(A_->dim(xi + psi.grade), dx);
    for (std::size_t j = 0; j < dx; ++j) b.set_column(j, A_->mult(A_->basis(xi, j), psi).vec);
    d.blocks[xi] = std::move(b);
  }
  return d;
}

DOperator DWindow::partial(const UElement& u, std::string name) const {
  if (name.empty()) name = A_->algebra()->str(u);
  DOperator d{"d[" + name + "]", Weight::zero(cartan().rank()), {}};
  for (const auto& xi : grades_) d.blocks[xi] = A_->module(xi).act(u);
  return d;
}

DOperator DWindow::sigma(const Weight& lambda) const {
  DOperator d{"sigma" + lambda.str(), Weight::zero(cartan().rank()), {}};
  for (const auto& xi : grades_) d.blocks[xi] = QMatrix::identity(A_->dim(xi)) * cartan().q_form(lambda, xi);
  return d;
}

DOperator DWindow::compose(const DOperator& a, const DOperator& b) const {
  DOperator d{a.expr + " " + b.expr, a.grade + b.grade, {}};
  for (const auto& [xi, mb] : b.blocks) {
    auto it = a.blocks.find(xi + b.grade);
    if (it != a.blocks.end()) d.blocks[xi] = it->second * mb;
  }
  return d;
}

DOperator DWindow::add(const DOperator& a, const DOperator& b) const {
  if (a.grade != b.grade) throw std::invalid_argument("adding operators of different grades");
  DOperator d{a.expr + " + " + b.expr, a.grade, {}};
  for (const auto& [xi, ma] : a.blocks) {
    auto it = b.blocks.find(xi);
    if (it != b.blocks.end()) d.blocks[xi] = ma + it->second;
  }
  return d;
}

DOperator DWindow::scale(const QScalar& s, const DOperator& a) const {
  DOperator d{"(" + s.str() + ") " + a.expr, a.grade, {}};
  for (const auto& [xi, m] : a.blocks) d.blocks[xi] = m * s;
  return d;
}

std::optional<Counterexample> DWindow::compare(const DOperator& a, const DOperator& b,
                                               const std::string& relation) const {
  Counterexample ce{relation, a.expr, b.expr, "", "", ""};
  if (a.grade != b.grade) {
    ce.input = "grades " + a.grade.str() + " and " + b.grade.str();
    return ce;
  }
  bool any = false;
  for (const auto& [xi, ma] : a.blocks) {
    auto it = b.blocks.find(xi);
    if (it == b.blocks.end()) continue;
    any = true;
    const QMatrix& mb = it->second;
    for (std::size_t j = 0; j < ma.cols(); ++j) {
      QVector ca = ma.column(j), cb = mb.column(j);
      if (ca != cb) {
        ce.input = grade_input(xi, j);
        ce.lhs = render_vector(ca);
        ce.rhs = render_vector(cb);
        return ce;
      }
    }
  }
  if (!any) {
    ce.input = "empty common domain";
    return ce;
  }
  return std::nullopt;
}

const QMatrix& DWindow::braid(int i, const Weight& xi, bool inverse, bool lusztig) const {
  auto key = std::make_tuple(i, xi, inverse, lusztig);
  auto it = braids_.find(key);
  if (it != braids_.end()) return it->second;
  const WeightModule& V = A_->module(xi);
  QMatrix t = braid_on_module(i, V, false);
  if (lusztig)
    for (std::size_t j = 0; j < V.dim(); ++j)
      if (V.wt[j][i] % 2)
        for (std::size_t r = 0; r < V.dim(); ++r) t(r, j) = -t(r, j);
  if (inverse) t = qflag::inverse(t);
  return braids_.emplace(key, std::move(t)).first->second;
}

DOperator DWindow::conjugate(int i, const DOperator& d, bool lusztig) const {
  DOperator z{"Z" + std::to_string(i + 1) + "(" + d.expr + ")", d.grade, {}};
  for (const auto& [xi, m] : d.blocks) z.blocks[xi] = braid(i, xi + d.grade, true, lusztig) * m * braid(i, xi, false, lusztig);
  return z;
}

std::vector<CoordElement> window_basis(const DWindow& D) {
  std::vector<CoordElement> out;
  for (const auto& g : D.grades()) {
    if (g.is_zero()) continue;
    for (std::size_t j = 0; j < D.coord().dim(g); ++j) out.push_back(D.coord().basis(g, j));
  }
  return out;
}

namespace {

std::string element_name(const CoordElement& phi) {
  for (std::size_t j = 0; j < phi.vec.size(); ++j)
    if (phi.vec[j].is_one()) {
      bool unit = true;
      for (std::size_t k = 0; k < phi.vec.size(); ++k)
        if (k != j && !phi.vec[k].is_zero()) unit = false;
      if (unit) return "b" + phi.grade.str() + "_" + std::to_string(j);
    }
  return phi.grade.str() + render_vector(phi.vec);
}

std::vector<std::pair<std::string, UElement>> generators(const UAlgebra& U) {
  std::vector<std::pair<std::string, UElement>> g;
  const CartanDatum& c = U.cartan();
  for (int i = 0; i < c.rank(); ++i) {
    g.emplace_back("e" + std::to_string(i + 1), U.e(i));
    g.emplace_back("f" + std::to_string(i + 1), U.f(i));
    g.emplace_back("k" + c.fundamental(i).str(), U.k(c.fundamental(i)));
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------- relations

DReport relations_check(const DWindow& D, const std::vector<Weight>& sigma_probes, bool inject_fault,
                        const std::vector<CoordElement>& extra) {
  DReport rep;
  const CoordAlgebra& A = D.coord();
  const UAlgebra& U = *A.algebra();
  const CartanDatum& c = A.cartan();
  auto basis = window_basis(D);
  basis.insert(basis.end(), extra.begin(), extra.end());
  auto gens = generators(U);

  for (const auto& phi : basis)
    for (const auto& psi : basis) {
      if (!D.contains(phi.grade + psi.grade)) continue;
      DOperator lhs = D.compose(D.ell(phi, element_name(phi)), D.ell(psi, element_name(psi)));
      CoordElement prod = A.mult(phi, psi);
      rep.record(D.compare(lhs, D.ell(prod, element_name(phi) + "*" + element_name(psi)), "comm1"));
    }

  for (const auto& a : sigma_probes)
    for (const auto& b : sigma_probes) rep.record(D.compare(D.compose(D.sigma(a), D.sigma(b)), D.sigma(a + b), "comm2"));

  for (const auto& [na, a] : gens)
    for (const auto& [nb, b] : gens)
      rep.record(D.compare(D.compose(D.partial(a, na), D.partial(b, nb)), D.partial(U.mul(a, b), na + nb), "comm3"));

  for (const auto& lam : sigma_probes)
    for (const auto& phi : basis) {
      DOperator l = D.ell(phi, element_name(phi));
      rep.record(D.compare(D.compose(D.sigma(lam), l),
                           D.scale(c.q_form(lam, phi.grade), D.compose(l, D.sigma(lam))), "comm4"));
    }

  for (const auto& lam : sigma_probes)
    for (const auto& [nu, u] : gens) {
      DOperator p = D.partial(u, nu);
      rep.record(D.compare(D.compose(D.sigma(lam), p), D.compose(p, D.sigma(lam)), "comm5"));
    }

  for (const auto& [nu, u] : gens) {
    HopfTensor du = U.coproduct(u);
    for (const auto& phi : basis) {
      DOperator l = D.ell(phi, element_name(phi));
      DOperator six = D.zero(phi.grade), two = D.zero(phi.grade);
      bool first = true;
      for (const auto& [ms, coef] : du.terms) {
        QScalar s = coef;
        if (inject_fault && first) s = s * c.qi(0);
        first = false;
        UElement u0 = mono_element(ms[0]), u1 = mono_element(ms[1]);
        CoordElement a = A.act(u0, phi);
        six = D.add(six, D.scale(s, D.compose(D.ell(a, element_name(a)), D.partial(u1))));
        CoordElement b = A.act(U.antipode(u0, true), phi);
        two = D.add(two, D.scale(s, D.compose(D.partial(u1), D.ell(b, element_name(b)))));
      }
      six.expr = "sum l[u(0) " + element_name(phi) + "] d[u(1)], u=" + nu;
      two.expr = "sum d[u(1)] l[S^-1(u(0)) " + element_name(phi) + "], u=" + nu;
      rep.record(D.compare(D.compose(D.partial(u, nu), l), six, "comm6"));
      rep.record(D.compare(D.compose(l, D.partial(u, nu)), two, "tUD2"));
    }
  }
  return rep;
}

// ---------------------------------------------------------------- lemma rl

DReport lemma_rl_check(const DWindow& D, const Pairing& P, const CoordElement& psi) {
  DReport rep;
  const CoordAlgebra& A = D.coord();
  const UAlgebra& U = *A.algebra();
  const WeightModule& V = A.module(psi.grade);
  auto eta = A.weight_of(psi);
  if (!eta) throw std::invalid_argument("lemma_rl_check: element must be homogeneous");
  const RootSum box = P.reach(V);
  const std::string name = element_name(psi);
  const Weight& mu = psi.grade;

  // r_psi = sum l[x_p psi] d[y_p k_eta] sigma_{-mu}
  DOperator one = D.zero(mu), two = D.zero(mu);
  for (const auto& beta : root_box(box)) {
    for (const auto& [x, y] : P.xi(beta).inverse_side) {
      CoordElement a = A.act(x, psi);
      if (!a.is_zero())
        one = D.add(one, D.compose(D.compose(D.ell(a, "x" + name), D.partial(U.mul(y, U.k(*eta)))), D.sigma(-mu)));
      CoordElement b = A.act(y, psi);
      if (!b.is_zero())
        two = D.add(two, D.compose(D.compose(D.r(b, "y" + name), D.partial(U.mul(x, U.k(*eta)))), D.sigma(-mu)));
    }
  }
  one.expr = "sum l[x_p " + name + "] d[y_p k] sigma";
  two.expr = "sum r[y_p " + name + "] d[x_p k] sigma";
  rep.record(D.compare(D.r(psi, name), one, "rl1"));
  rep.record(D.compare(D.ell(psi, name), two, "rl2"));
  return rep;
}

// ---------------------------------------------------------------- Z_{s_i}

DReport z_w_check(const DWindow& D, int i, bool lusztig) {
  DReport rep;
  const CoordAlgebra& A = D.coord();
  const UAlgebra& U = *A.algebra();
  const CartanDatum& c = A.cartan();
  const int di = c.d(i);
  const Weight z0 = Weight::zero(c.rank());

  for (int j = 0; j < c.rank(); ++j) {
    DOperator s = D.sigma(c.fundamental(j));
    rep.record(D.compare(D.conjugate(i, s, lusztig), s, "Z(sigma)"));
  }
  for (const auto& [nu, u] : generators(U))
    rep.record(D.compare(D.conjugate(i, D.partial(u, nu), lusztig),
                         D.partial(U.braid(i, u, true), "T^-1(" + nu + ")"), "Z(d)"));

  // exp_{q_i^{-1}}(-(q_i - q_i^{-1}) f_i (x) e_i)
  const QScalar step = -(c.qi(i) - c.qi(i, -1));
  for (const auto& phi : window_basis(D)) {
    CoordElement tphi{phi.grade, D.braid(i, phi.grade, true, lusztig) * phi.vec};
    DOperator rhs = D.zero(phi.grade);
    CoordElement b = tphi;
    QScalar pw = c.one();
    for (int n = 0; !b.is_zero(); ++n) {
      QScalar coef = exp_t_coefficient(n, -di, false, c.l0()) * pw;
      rhs = D.add(rhs, D.scale(coef, D.compose(D.ell(b, "f^n T^-1 phi"), D.partial(U.pow(U.e(i), n)))));
      b = A.act(U.f(i), b);
      pw = pw * step;
    }
    rhs.expr = "sum l[f^n T^-1 " + element_name(phi) + "] d[e^n]";
    rep.record(D.compare(D.conjugate(i, D.ell(phi, element_name(phi)), lusztig), rhs, "Z(l)"));
  }

  // extremal phi in S_w with w(alpha_i) > 0
  for (const auto& w : c.weyl_group()) {
    WeylWord ws = c.multiply(w, {i});
    if (c.length(ws) < c.length(w)) continue;
    for (const auto& g : D.grades()) {
      if (g == z0) continue;
      CoordElement phi = A.extremal(w, g).element;
      CoordElement tphi{g, D.braid(i, g, true, lusztig) * phi.vec};
      rep.record(D.compare(D.conjugate(i, D.ell(phi, "c^" + word_str(w)), lusztig), D.ell(tphi, "T^-1 c^" + word_str(w)),
                           "Z(l extremal)"));
      QMatrix pair(phi.vec.size(), 2);
      pair.set_column(0, tphi.vec);
      pair.set_column(1, A.extremal(ws, g).element.vec);
      ++rep.checked;
      if (rank(pair) != 1) {
        rep.ok = false;
        rep.failures.push_back({"extremal image", "T^-1 c^" + word_str(w), "c^" + word_str(ws), "A(" + g.str() + ")",
                                render_vector(tphi.vec), render_vector(pair.column(1))});
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- Theta

std::string DLetter::str() const {
  switch (kind) {
    case DToken::PartialE: return "d[e" + std::to_string(i + 1) + "]";
    case DToken::PartialF: return "d[f" + std::to_string(i + 1) + "]";
    case DToken::PartialK: return "d[k" + mu.str() + "]";
    case DToken::Sigma: return "sigma" + mu.str();
    case DToken::LeftPhi: return "l[phi" + std::to_string(i + 1) + "]";
    case DToken::RightPhi: return "r[phi" + std::to_string(i + 1) + "]";
  }
  return "?";
}

ThetaRealization::ThetaRealization(UAlgebraPtr U, const Pairing& P, Weight xi, RootSum depth)
    : U_(std::move(U)), P_(&P), xi_(std::move(xi)), depth_box_(std::move(depth)) {
  for (const auto& g : root_box(depth_box_))
    for (const auto& w : U_->basis(g).words) {
      index_[w] = words_.size();
      words_.push_back(w);
      depth_.push_back(g);
    }
  right_ = verma(U_, xi_, depth_box_, Side::Right);
}

QVector ThetaRealization::coords(const Word& w) const {
  QVector v(dim());
  for (const auto& [b, s] : U_->reduce(w)) v[index_.at(b)] += s;
  return v;
}

std::vector<bool> ThetaRealization::valid(const DLetter& d) const {
  std::vector<bool> ok(dim(), true);
  if (d.kind == DToken::PartialE)
    for (std::size_t j = 0; j < dim(); ++j) ok[j] = (depth_[j] + RootSum::simple(U_->rank(), d.i)).le(depth_box_);
  return ok;
}

QMatrix ThetaRealization::M(int i) const {
  QMatrix m(dim(), dim());
  const RootSum a = RootSum::simple(U_->rank(), i);
  for (std::size_t j = 0; j < dim(); ++j) {
    if (!(depth_[j] + a).le(depth_box_)) continue;
    Word w = words_[j];
    w.push_back(i);
    m.set_column(j, coords(w));
  }
  return m;
}

QMatrix ThetaRealization::N(const Weight& mu) const {
  const CartanDatum& c = U_->cartan();
  QMatrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) m(j, j) = c.q_form(mu, c.weight_of(depth_[j]));
  return m;
}

QMatrix ThetaRealization::P_phi(int i) const {
  const CartanDatum& c = U_->cartan();
  const QScalar pair = P_->words({i}, {i});
  QMatrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const Word& w = words_[j];
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (w[p] != i) continue;
      int t = 0;
      for (std::size_t r = p + 1; r < w.size(); ++r) t -= c.form_t(c.alpha(i), c.alpha(w[r]));
      Word rest = w;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
      QVector v = coords(rest);
      QScalar s = pair * c.q_pow_t(t);
      for (std::size_t r = 0; r < dim(); ++r) m(r, j) += s * v[r];
    }
  }
  return m;
}

QMatrix ThetaRealization::Q_phi(int i) const {
  const CartanDatum& c = U_->cartan();
  const QScalar pair = P_->words({i}, {i});
  QMatrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const Word& w = words_[j];
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (w[r] != i) continue;
      int t = 0;
      for (std::size_t p = 0; p < r; ++p) t -= c.form_t(c.alpha(w[p]), c.alpha(i));
      Word rest = w;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(r));
      QVector v = coords(rest);
      QScalar s = pair * c.q_pow_t(t);
      for (std::size_t k = 0; k < dim(); ++k) m(k, j) += s * v[k];
    }
  }
  return m;
}

QMatrix ThetaRealization::formula(const DLetter& d) const {
  const CartanDatum& c = U_->cartan();
  switch (d.kind) {
    case DToken::PartialE: return M(d.i);
    case DToken::PartialK: return N(-d.mu) * c.q_form(d.mu, xi_);
    case DToken::Sigma: return QMatrix::identity(dim()) * c.q_form(d.mu, xi_);
    case DToken::LeftPhi: return P_phi(d.i);
    case DToken::RightPhi: return Q_phi(d.i) * c.q_form(c.alpha(d.i), xi_);
    case DToken::PartialF: {
      const Weight a = c.alpha(d.i);
      QMatrix first = P_phi(d.i) * N(a) * (c.q_form(a, a).inverse() * c.q_form(a, xi_).inverse());
      return first - Q_phi(d.i) * c.q_form(a, xi_);
    }
  }
  throw std::logic_error("unknown letter");
}

QMatrix ThetaRealization::direct(const DLetter& d) const {
  const CartanDatum& c = U_->cartan();
  switch (d.kind) {
    case DToken::PartialE: return right_.E[static_cast<std::size_t>(d.i)];
    case DToken::PartialF: return right_.F[static_cast<std::size_t>(d.i)];
    case DToken::PartialK: return right_.K(d.mu);
    case DToken::Sigma: return QMatrix::identity(dim()) * c.q_form(d.mu, xi_);
    case DToken::LeftPhi:
    case DToken::RightPhi: {
      // <phi psi, u> = sum <phi, u(0)> <psi, u(1)>, <psi phi, u> = sum <psi, u(0)> <phi, u(1)>
      const bool left = d.kind == DToken::LeftPhi;
      const QScalar pair = P_->words({d.i}, {d.i});
      QMatrix m(dim(), dim());
      for (std::size_t j = 0; j < dim(); ++j) {
        HopfTensor du = U_->coproduct(U_->E(words_[j]));
        for (const auto& [ms, coef] : du.terms) {
          const Mono& probe = left ? ms[0] : ms[1];
          const Mono& rest = left ? ms[1] : ms[0];
          if (!probe.f.empty() || probe.e != Word{d.i}) continue;
          QScalar s = coef * pair;
          if (!left) s *= c.q_form(xi_, rest.k);
          QVector v = coords(rest.e);
          for (std::size_t r = 0; r < dim(); ++r) m(r, j) += s * v[r];
        }
      }
      return m;
    }
  }
  throw std::logic_error("unknown letter");
}

QMatrix ThetaRealization::word(const DWord& w, bool use_formula) const {
  QMatrix acc = QMatrix::identity(dim());
  for (const auto& d : w) acc = (use_formula ? formula(d) : direct(d)) * acc;
  return acc;
}

namespace {

std::vector<DLetter> generator_letters(const CartanDatum& c) {
  std::vector<DLetter> out;
  for (int i = 0; i < c.rank(); ++i) {
    out.push_back({DToken::PartialE, i, {}});
    out.push_back({DToken::PartialF, i, {}});
    out.push_back({DToken::PartialK, 0, c.fundamental(i)});
    out.push_back({DToken::Sigma, 0, c.fundamental(i)});
    out.push_back({DToken::LeftPhi, i, {}});
    out.push_back({DToken::RightPhi, i, {}});
  }
  return out;
}

}  // namespace

ThetaBuildReport theta_build(UAlgebraPtr U, const Pairing& P, const std::vector<Weight>& probes, const RootSum& depth) {
  ThetaBuildReport rep;
  const CartanDatum& c = U->cartan();
  for (const auto& xi : probes) {
    ThetaRealization T(U, P, xi, depth);
    for (const auto& d : generator_letters(c)) {
      QMatrix a = T.formula(d), b = T.direct(d);
      auto ok = T.valid(d);
      for (std::size_t j = 0; j < T.dim(); ++j) {
        if (!ok[j]) continue;
        ++rep.checked;
        if (a.column(j) != b.column(j)) {
          rep.ok = false;
          rep.failures.push_back("xi=" + xi.str() + " " + d.str() + " column " + std::to_string(j) + ": formula " +
                                 render_vector(a.column(j)) + " direct " + render_vector(b.column(j)));
        }
      }
    }
  }
  return rep;
}

FaithfulnessReport theta_faithfulness_probe(UAlgebraPtr U, const Pairing& P, const std::vector<Weight>& probes,
                                            const RootSum& depth, const std::vector<DWord>& span) {
  FaithfulnessReport rep;
  rep.size = span.size();
  int raise = 0;
  for (const auto& w : span) {
    int e = 0;
    for (const auto& d : w) e += d.kind == DToken::PartialE;
    raise = std::max(raise, e);
  }
  RootSum box = depth;
  for (auto& x : box.c) x += raise;
  std::vector<QVector> rows(span.size());
  for (const auto& xi : probes) {
    ThetaRealization T(U, P, xi, box);
    for (std::size_t s = 0; s < span.size(); ++s) {
      QMatrix m = T.word(span[s], true);
      for (std::size_t j = 0; j < T.dim(); ++j) {
        if (!T.depths()[j].le(depth)) continue;
        for (std::size_t r = 0; r < T.dim(); ++r) rows[s].push_back(m(r, j));
      }
    }
  }
  if (rows.empty()) return rep;
  QMatrix big(rows.size(), rows[0].size());
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (std::size_t k = 0; k < rows[s].size(); ++k) big(s, k) = rows[s][k];
  rep.rank = rank(big);
  return rep;
}

// ---------------------------------------------------------------- center

bool is_central(const UAlgebra& U, const UElement& z) {
  for (int i = 0; i < U.rank(); ++i) {
    if (!U.commutator(z, U.e(i)).is_zero()) return false;
    if (!U.commutator(z, U.f(i)).is_zero()) return false;
    if (!U.commutator(z, U.k(U.cartan().fundamental(i))).is_zero()) return false;
  }
  return true;
}

std::vector<CentralElement> center_solve(UAlgebraPtr U, int max_height, int k_box) {
  const CartanDatum& c = U->cartan();
  const int n = c.rank();
  std::vector<Weight> ks;
  {
    std::vector<int> cur(static_cast<std::size_t>(n), -k_box);
    while (true) {
      ks.emplace_back(cur);
      int p = 0;
      while (p < n && ++cur[static_cast<std::size_t>(p)] > k_box) cur[static_cast<std::size_t>(p++)] = -k_box;
      if (p == n) break;
    }
  }
  RootSum half = RootSum::zero(n);
  for (auto& x : half.c) x = max_height / 2;
  std::vector<Mono> monos;
  for (const auto& beta : root_box(half)) {
    if (2 * beta.height() > max_height) continue;
    const auto& words = U->basis(beta).words;
    for (const auto& a : words)
      for (const auto& b : words)
        for (const auto& k : ks) monos.push_back(Mono{a, k, b});
  }
  // rows: coefficients of [m, g] for generators g
  std::map<std::pair<int, Mono>, std::size_t> row;
  std::vector<std::vector<std::pair<std::size_t, QScalar>>> cols(monos.size());
  for (std::size_t j = 0; j < monos.size(); ++j) {
    UElement m = UElement::monomial(monos[j], QScalar(1));
    for (int i = 0; i < n; ++i)
      for (int g = 0; g < 2; ++g) {
        UElement com = U->commutator(m, g ? U->f(i) : U->e(i));
        for (const auto& [t, s] : com.terms) {
          auto key = std::make_pair(2 * i + g, t);
          auto it = row.find(key);
          if (it == row.end()) it = row.emplace(key, row.size()).first;
          cols[j].emplace_back(it->second, s);
        }
      }
  }
  QMatrix sys(row.size(), monos.size());
  for (std::size_t j = 0; j < monos.size(); ++j)
    for (const auto& [r, s] : cols[j]) sys(r, j) += s;
  QMatrix ns = row.empty() ? QMatrix::identity(monos.size()) : nullspace(sys);
  // canonical basis: reduced echelon form of the solution space
  Echelon ech = rref(ns.transpose());
  std::vector<CentralElement> out;
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
    CentralElement z;
    for (std::size_t j = 0; j < monos.size(); ++j) {
      const QScalar& s = ech.reduced(r, j);
      if (s.is_zero()) continue;
      z.z.add(monos[j], s);
      if (monos[j].f.empty() && monos[j].e.empty()) z.hc[monos[j].k] += s;
    }
    out.push_back(std::move(z));
  }
  return out;
}

QScalar zeta_at(const CartanDatum& c, const CentralElement& z, const Weight& lambda) {
  QScalar s(0);
  for (const auto& [mu, coef] : z.hc) s += coef * c.q_form(lambda, mu);
  return s;
}

bool dot_invariant(const CartanDatum& c, const CentralElement& z) {
  const Weight rho = c.rho();
  for (const auto& w : c.weyl_group()) {
    std::map<Weight, QScalar> img;
    for (const auto& [mu, coef] : z.hc) {
      Weight wm = c.act(w, mu);
      img[wm] += coef * c.q_form(wm - mu, rho);
    }
    std::erase_if(img, [](const auto& kv) { return kv.second.is_zero(); });
    if (img != z.hc) return false;
  }
  return true;
}

DReport center_operator_check(const DWindow& D, const CentralElement& z) {
  DReport rep;
  DOperator rhs = D.zero(Weight::zero(D.cartan().rank()));
  for (const auto& [mu, coef] : z.hc) rhs = D.add(rhs, D.scale(coef, D.sigma(mu)));
  rhs.expr = "sigma(zeta(z))";
  rep.record(D.compare(D.partial(z.z, "z"), rhs, "d_z = sigma zeta(z)"));
  return rep;
}

std::vector<ZetaScanEntry> zeta_scan(const CartanDatum& c, const std::vector<CentralElement>& zs,
                                     const std::vector<Weight>& weights) {
  std::vector<ZetaScanEntry> out;
  for (const auto& a : weights)
    for (const auto& b : weights) {
      ZetaScanEntry e{a, b, true, c.linked(a, b)};
      for (const auto& z : zs)
        if (zeta_at(c, z, a) != zeta_at(c, z, b)) e.equal = false;
      out.push_back(std::move(e));
    }
  return out;
}

AnnihilatorReport annihilator_check(UAlgebraPtr U, const CentralElement& z, const Weight& lambda,
                                    const Weight& character, const RootSum& depth) {
  AnnihilatorReport rep;
  const CartanDatum& c = U->cartan();
  RootSum extra = RootSum::zero(c.rank());
  for (const auto& [m, s] : z.z.terms) {
    extra = componentwise_max(extra, word_degree(c.rank(), m.f));
    extra = componentwise_max(extra, word_degree(c.rank(), m.e));
  }
  const QScalar zl = zeta_at(c, z, character);
  const RootSum box = depth + extra;
  WeightModule left = verma(U, lambda, box, Side::Left);
  WeightModule dual = restricted_dual(verma(U, lambda, box, Side::Right));
  for (const auto* M : {&left, &dual}) {
    QMatrix a = M->act(z.z) - QMatrix::identity(M->dim()) * zl;
    auto ok = M->valid_columns(extra);
    for (std::size_t j = 0; j < M->dim(); ++j) {
      if (!ok[j]) continue;
      ++rep.checked;
      QVector col = a.column(j);
      if (!is_zero(col)) {
        rep.ok = false;
        rep.failures.push_back(std::string(M == &left ? "T(" : "T*(") + lambda.str() + ") " + M->labels[j] + ": " +
                               render_vector(col));
      }
    }
  }
  return rep;
}

}  // namespace qflag
