#include "qflag/rmatrix.hpp"

#include <algorithm>

namespace qflag {

namespace {

RootSum degree_of(int rank, const Word& w) {
  RootSum r = RootSum::zero(rank);
  for (int i : w) ++r.c[static_cast<std::size_t>(i)];
  return r;
}

}  // namespace

QScalar Pairing::words(const Word& x, const Word& y) const {
  const CartanDatum& c = U_->cartan();
  if (x.size() != y.size()) return QScalar(0);
  if (x.empty()) return c.one();
  if (!(degree_of(c.rank(), x) == degree_of(c.rank(), y))) return QScalar(0);
  {
    std::lock_guard lock(mu_);
    auto it = word_memo_.find({x, y});
    if (it != word_memo_.end()) return it->second;
  }
  // (e_i x', y) = (x' (x) e_i, Delta(y)): only one letter of y can pair with e_i
  const int i = x.front();
  Word rest(x.begin() + 1, x.end());
  QScalar eif = (c.qi(i, -1) - c.qi(i)).inverse();
  QScalar total(0);
  Weight before = Weight::zero(c.rank());
  for (std::size_t p = 0; p < y.size(); ++p) {
    if (y[p] == i) {
      Word without = y;
      without.erase(without.begin() + static_cast<long>(p));
      QScalar sub = words(rest, without);
      if (!sub.is_zero()) total += eif * c.q_form(before, c.alpha(i)) * sub;
    }
    before = before + c.alpha(y[p]);
  }
  std::lock_guard lock(mu_);
  word_memo_.emplace(std::make_pair(x, y), total);
  return total;
}

QScalar Pairing::operator()(const UElement& x, const UElement& y) const {
  const CartanDatum& c = U_->cartan();
  QScalar total(0);
  for (const auto& [mx, cx] : x.terms) {
    if (!mx.f.empty()) throw std::invalid_argument("pairing: left argument must lie in U^{>=0}");
    for (const auto& [my, cy] : y.terms) {
      if (!my.e.empty()) throw std::invalid_argument("pairing: right argument must lie in U^{<=0}");
      // (k_lambda E, F k_mu) = q^{-(lambda, mu - deg F)} (E, F)
      QScalar w = words(mx.e, my.f);
      if (w.is_zero()) continue;
      Weight shift = my.k - c.weight_of(degree_of(c.rank(), my.f));
      total += cx * cy * c.q_form(mx.k, shift).inverse() * w;
    }
  }
  return total;
}

const PairingTable& Pairing::table(const RootSum& beta) const {
  {
    std::lock_guard lock(mu_);
    auto it = tables_.find(beta);
    if (it != tables_.end()) return it->second;
  }
  PairingTable t;
  t.degree = beta;
  t.plus = U_->basis(beta).words;
  t.minus = t.plus;  // U^- uses the same word basis with f letters
  t.matrix = QMatrix(t.plus.size(), t.minus.size());
  for (std::size_t a = 0; a < t.plus.size(); ++a)
    for (std::size_t b = 0; b < t.minus.size(); ++b) t.matrix(a, b) = words(t.plus[a], t.minus[b]);
  std::lock_guard lock(mu_);
  return tables_.emplace(beta, std::move(t)).first->second;
}

const CanonicalElement& Pairing::xi(const RootSum& beta) const {
  {
    std::lock_guard lock(mu_);
    auto it = xis_.find(beta);
    if (it != xis_.end()) return it->second;
  }
  const PairingTable& t = table(beta);
  const CartanDatum& c = U_->cartan();
  CanonicalElement x;
  x.degree = beta;
  x.plus = t.plus;
  x.minus = t.minus;
  if (rank(t.matrix) != t.matrix.rows()) throw std::logic_error("pairing is degenerate in degree " + beta.str());
  x.coeff = inverse(t.matrix).transpose();
  Weight wb = c.weight_of(beta);
  QScalar qbb = c.q_form(wb, wb);
  for (std::size_t a = 0; a < x.plus.size(); ++a) {
    UElement sx = U_->antipode(U_->E(x.plus[a]));
    UElement y;
    for (std::size_t b = 0; b < x.minus.size(); ++b)
      if (!x.coeff(a, b).is_zero()) y += (qbb * x.coeff(a, b)) * U_->mul(U_->k(wb), U_->F(x.minus[b]));
    x.inverse_side.emplace_back(std::move(sx), std::move(y));
  }
  std::lock_guard lock(mu_);
  return xis_.emplace(beta, std::move(x)).first->second;
}

RootSum Pairing::reach(const WeightModule& V) const {
  const CartanDatum& c = U_->cartan();
  RootSum r = RootSum::zero(c.rank());
  for (const auto& a : V.wt)
    for (const auto& b : V.wt) {
      Weight d = a - b;
      if (!c.in_root_lattice(d)) continue;
      RootSum s = c.to_root_sum(d);
      if (!s.nonneg()) continue;
      for (int i = 0; i < c.rank(); ++i) r.c[static_cast<std::size_t>(i)] = std::max(r[i], s[i]);
    }
  return r;
}

ROperator Pairing::kappa(const WeightModule& V, const WeightModule& W, bool inv) const {
  const CartanDatum& c = U_->cartan();
  ROperator op{RFlavor::Kappa, V.dim(), W.dim(), QMatrix(V.dim() * W.dim(), V.dim() * W.dim())};
  for (std::size_t a = 0; a < V.dim(); ++a)
    for (std::size_t b = 0; b < W.dim(); ++b) {
      QScalar s = c.q_form(V.wt[a], W.wt[b]);
      op.matrix(a * W.dim() + b, a * W.dim() + b) = inv ? s.inverse() : s;
    }
  return op;
}

QMatrix Pairing::xi_operator(const WeightModule& V, const WeightModule& W) const {
  if (V.truncated() || W.truncated() || V.side != Side::Left || W.side != Side::Left)
    throw std::invalid_argument("R-operators need finite-dimensional left modules");
  const CartanDatum& c = U_->cartan();
  RootSum rv = reach(V), rw = reach(W), box = RootSum::zero(c.rank());
  for (int i = 0; i < c.rank(); ++i) box.c[static_cast<std::size_t>(i)] = std::min(rv[i], rw[i]);
  QMatrix total(V.dim() * W.dim(), V.dim() * W.dim());
  for (const auto& beta : root_box(box)) {
    if (beta.height() > U_->max_height())
      throw DegreeCapExceeded("R-operator needs degree " + beta.str() + " beyond height cap " +
                              std::to_string(U_->max_height()));
    const CanonicalElement& x = xi(beta);
    Weight wb = c.weight_of(beta);
    QScalar qbb = c.q_form(wb, wb);
    QMatrix kv = V.K(-wb), kw = W.K(wb);
    std::vector<QMatrix> ys;
    for (const auto& m : x.minus) ys.push_back(kw * W.word_matrix(m, false));
    for (std::size_t a = 0; a < x.plus.size(); ++a) {
      QMatrix xa = kv * V.word_matrix(x.plus[a], true);
      if (xa.is_zero()) continue;
      QMatrix right(W.dim(), W.dim());
      for (std::size_t b = 0; b < x.minus.size(); ++b)
        if (!x.coeff(a, b).is_zero()) right += x.coeff(a, b) * ys[b];
      total += qbb * kron(xa, right);
    }
  }
  return total;
}

QMatrix flip(std::size_t dv, std::size_t dw) {
  QMatrix t(dv * dw, dv * dw);
  for (std::size_t a = 0; a < dv; ++a)
    for (std::size_t b = 0; b < dw; ++b) t(b * dv + a, a * dw + b) = QScalar(1);
  return t;
}

ROperator Pairing::r_operator(const WeightModule& V, const WeightModule& W, RFlavor flavor) const {
  ROperator op{flavor, V.dim(), W.dim(), {}};
  switch (flavor) {
    case RFlavor::Kappa:
      return kappa(V, W);
    case RFlavor::R:
      op.matrix = kappa(V, W, true).matrix * xi_operator(V, W);
      return op;
    case RFlavor::RCheck:
      op.matrix = flip(V.dim(), W.dim()) * kappa(V, W, true).matrix * xi_operator(V, W);
      return op;
    case RFlavor::RInverse: {
      const CartanDatum& c = U_->cartan();
      RootSum rv = reach(V), rw = reach(W), box = RootSum::zero(c.rank());
      for (int i = 0; i < c.rank(); ++i) box.c[static_cast<std::size_t>(i)] = std::min(rv[i], rw[i]);
      QMatrix s(V.dim() * W.dim(), V.dim() * W.dim());
      for (const auto& beta : root_box(box))
        for (const auto& [xp, yp] : xi(beta).inverse_side) {
          QMatrix a = V.act(xp);
          if (a.is_zero()) continue;
          s += kron(a, W.act(yp));
        }
      op.matrix = s * kappa(V, W).matrix;
      QMatrix fwd = kappa(V, W, true).matrix * xi_operator(V, W);
      if (op.matrix * fwd != QMatrix::identity(op.matrix.rows()))
        throw std::logic_error("inverse R formula does not invert R");
      return op;
    }
  }
  return op;
}

HexagonReport hexagon_check(const Pairing& P, const WeightModule& V, const WeightModule& V2, const WeightModule& V3) {
  HexagonReport rep;
  QMatrix r23 = P.r_operator(V2, V3, RFlavor::RCheck).matrix;  // V' V'' -> V'' V'
  QMatrix r13 = P.r_operator(V, V3, RFlavor::RCheck).matrix;   // V V'' -> V'' V
  QMatrix first = kron(QMatrix::identity(V.dim()), r23);       // V V' V'' -> V V'' V'
  QMatrix second = kron(r13, QMatrix::identity(V2.dim()));     // V V'' V' -> V'' V V'
  QMatrix lhs = second * first;
  QMatrix rhs = P.r_operator(tensor(V, V2), V3, RFlavor::RCheck).matrix;
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t col = 0; col < lhs.cols(); ++col)
      if (lhs(r, col) != rhs(r, col)) {
        rep.ok = false;
        rep.mismatches.push_back("(" + std::to_string(r) + "," + std::to_string(col) + "): " + lhs(r, col).str() +
                                 " vs " + rhs(r, col).str());
      }
  return rep;
}

}  // namespace qflag
