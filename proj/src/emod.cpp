#include "qflag/emod.hpp"

#include <algorithm>

namespace qflag {

std::vector<FiltrationLayer> filtration_layers(const CartanDatum& c, const Weight& mu) {
  const Weight low = c.act(c.longest(), mu);
  std::vector<FiltrationLayer> out;
  for (const auto& [nu, m] : c.weyl_character(mu).terms) out.push_back({0, nu, static_cast<std::size_t>(m), {}});
  std::sort(out.begin(), out.end(), [&](const FiltrationLayer& a, const FiltrationLayer& b) {
    int ha = c.to_root_sum(a.nu - low).height(), hb = c.to_root_sum(b.nu - low).height();
    return ha != hb ? ha < hb : a.nu < b.nu;
  });
  for (std::size_t k = 0; k < out.size(); ++k) out[k].index = static_cast<int>(k + 1);
  return out;
}

Weight lambda_zero(const CartanDatum& c, const Weight& mu) {
  std::vector<int> l(static_cast<std::size_t>(c.rank()), 0);
  for (const auto& [nu, m] : c.weyl_character(mu).terms)
    for (int i = 0; i < c.rank(); ++i) l[static_cast<std::size_t>(i)] = std::max(l[static_cast<std::size_t>(i)], -nu[i]);
  return Weight(l);
}

EBimodule::EBimodule(const CoordAlgebra& A, const Pairing& P, Weight mu)
    : A_(A), P_(P), mu_(std::move(mu)) {
  const CartanDatum& c = A_.cartan();
  if (!mu_.dominant()) throw std::invalid_argument("E^mu needs a dominant mu");
  layers_ = filtration_layers(c, mu_);
  lambda0_ = lambda_zero(c, mu_);
  const WeightModule& V = fiber();
  layer_index_.assign(V.dim(), 0);
  for (auto& L : layers_) {
    L.basis = V.weight_space(L.nu);
    if (L.basis.size() != L.mult) throw std::logic_error("layer multiplicity disagrees with V(mu)");
    for (auto v : L.basis) layer_index_[v] = static_cast<std::size_t>(L.index);
  }
}

const QMatrix& EBimodule::eta(const Weight& lambda, bool inverse) const {
  std::lock_guard lock(mu_lock_);
  auto key = std::make_pair(lambda, inverse);
  auto it = eta_.find(key);
  if (it != eta_.end()) return *it->second;
  const WeightModule& X = A_.module(lambda);
  const WeightModule& V = fiber();
  QMatrix m = inverse ? P_.r_operator(X, V, RFlavor::RInverse).matrix * flip(V.dim(), X.dim())
                      : P_.r_operator(X, V, RFlavor::RCheck).matrix;
  return *eta_.emplace(key, std::make_shared<QMatrix>(std::move(m))).first->second;
}

QVector EBimodule::right(const QVector& e, const Weight& lambda, const CoordElement& psi) const {
  const std::size_t dv = fiber().dim(), da = A_.dim(lambda);
  const Weight out = lambda + psi.grade;
  const std::size_t db = A_.dim(out);
  QVector r(dv * db);
  for (std::size_t a = 0; a < da; ++a) {
    bool any = false;
    for (std::size_t v = 0; v < dv && !any; ++v) any = !e[v * da + a].is_zero();
    if (!any) continue;
    QVector img = A_.mult(A_.basis(lambda, a), psi).vec;
    for (std::size_t v = 0; v < dv; ++v) {
      const QScalar& x = e[v * da + a];
      if (x.is_zero()) continue;
      for (std::size_t b = 0; b < db; ++b)
        if (!img[b].is_zero()) r[v * db + b] += x * img[b];
    }
  }
  return r;
}

QVector EBimodule::left(const CoordElement& phi, const QVector& e, const Weight& lambda) const {
  const std::size_t dv = fiber().dim(), da = A_.dim(lambda);
  const Weight out = phi.grade + lambda;
  const std::size_t db = A_.dim(out);
  // A (x) V(mu) picture: psi (x) v -> phi psi (x) v
  QVector y = eta(lambda, true) * e;
  QVector z(db * dv);
  for (std::size_t a = 0; a < da; ++a) {
    bool any = false;
    for (std::size_t v = 0; v < dv && !any; ++v) any = !y[a * dv + v].is_zero();
    if (!any) continue;
    QVector img = A_.mult(phi, A_.basis(lambda, a)).vec;
    for (std::size_t b = 0; b < db; ++b) {
      if (img[b].is_zero()) continue;
      for (std::size_t v = 0; v < dv; ++v)
        if (!y[a * dv + v].is_zero()) z[b * dv + v] += img[b] * y[a * dv + v];
    }
  }
  return eta(out) * z;
}

QVector EBimodule::embed(std::size_t v, bool through_eta) const {
  const std::size_t dv = fiber().dim();
  QVector x(dv);
  x.at(v) = QScalar(1);
  // A(0) is one-dimensional, so both pictures share the index v
  if (through_eta) return eta(Weight::zero(A_.cartan().rank())) * x;
  return x;
}

BimoduleReport EBimodule::check(const std::vector<Weight>& grades) const {
  BimoduleReport rep;
  const WeightModule& V = fiber();
  const std::size_t dv = V.dim();
  auto fail = [&](std::string s) {
    rep.ok = false;
    rep.failures.push_back(std::move(s));
  };
  // the two embeddings of V(mu) agree
  for (std::size_t v = 0; v < dv; ++v) {
    ++rep.checked;
    if (embed(v, true) != embed(v, false)) fail("embedding diagram fails at basis vector " + std::to_string(v));
  }
  // V^k is stable under the lowering operators and the k's are diagonal
  for (std::size_t i = 0; i < V.F.size(); ++i)
    for (std::size_t r = 0; r < dv; ++r)
      for (std::size_t s = 0; s < dv; ++s)
        if (!V.F[i](r, s).is_zero() && layer_of(r) > layer_of(s))
          fail("f_" + std::to_string(i + 1) + " leaves the flag at basis vector " + std::to_string(s));
  const CoordElement one = A_.unit();
  for (const auto& lam : grades) {
    const std::size_t n = dim(lam);
    for (std::size_t j = 0; j < n; ++j) {
      QVector e(n);
      e[j] = QScalar(1);
      ++rep.checked;
      if (left(one, e, lam) != e || right(e, lam, one) != e) fail("unit law fails on E(" + lam.str() + ") basis " + std::to_string(j));
      const std::size_t layer = layer_of(j / A_.dim(lam));
      for (const auto& xi : grades) {
        for (std::size_t p = 0; p < A_.dim(xi); ++p) {
          CoordElement phi = A_.basis(xi, p);
          QVector pe = left(phi, e, lam);
          const std::size_t dout = A_.dim(xi + lam);
          // left action respects E^k = V^k (x) A
          for (std::size_t t = 0; t < pe.size(); ++t)
            if (!pe[t].is_zero() && layer_of(t / dout) > layer) {
              fail("left action leaves E^k: phi in A(" + xi.str() + ") basis " + std::to_string(p) + ", e basis " +
                   std::to_string(j));
              break;
            }
          for (const auto& zeta : grades)
            for (std::size_t s = 0; s < A_.dim(zeta); ++s) {
              CoordElement psi = A_.basis(zeta, s);
              ++rep.checked;
              QVector lhs = right(pe, xi + lam, psi);
              QVector rhs = left(phi, right(e, lam, psi), lam + zeta);
              if (lhs != rhs)
                fail("(phi e) psi != phi (e psi) for phi " + std::to_string(p) + " in A(" + xi.str() + "), e " +
                     std::to_string(j) + " in E(" + lam.str() + "), psi " + std::to_string(s) + " in A(" + zeta.str() + ")");
            }
        }
      }
    }
  }
  return rep;
}

CommutationResult EBimodule::commutation_scalar(int k, const CoordElement& phi) const {
  const CartanDatum& c = A_.cartan();
  const FiltrationLayer& L = layers_.at(static_cast<std::size_t>(k - 1));
  auto xi = A_.weight_of(phi);
  if (!xi || phi.is_zero()) throw std::invalid_argument("commutation_scalar: phi must be homogeneous and nonzero");
  CommutationResult out;
  out.scalar = c.q_form(L.nu, *xi).inverse();
  out.ok = true;
  const std::size_t da = A_.dim(phi.grade);
  for (std::size_t v : L.basis) {
    // phi (v (x) 1) - s v (x) phi lies below layer k
    QVector lhs = left(phi, embed(v, false), Weight::zero(c.rank()));
    for (std::size_t a = 0; a < da; ++a) lhs[v * da + a] -= out.scalar * phi.vec[a];
    for (std::size_t t = 0; t < lhs.size(); ++t)
      if (!lhs[t].is_zero() && layer_of(t / da) >= static_cast<std::size_t>(k)) out.ok = false;
  }
  return out;
}

QMatrix EBimodule::isotypic_span(int k, const Weight& lambda) const {
  if (!(lambda - lambda0_).dominant()) throw std::invalid_argument("isotypic_span: " + lambda.str() + " is outside lambda0 + dominant cone");
  WeightModule T = tensor(fiber(), A_.module(lambda));
  const std::size_t n = T.dim();
  std::vector<QVector> cols;
  auto independent = [&](const QVector& x) {
    QMatrix m(n, cols.size() + 1);
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
    for (std::size_t r = 0; r < n; ++r) m(r, cols.size()) = x[r];
    return rank(m) == cols.size() + 1;
  };
  std::vector<QVector> frontier;
  for (int j = 1; j <= k; ++j) {
    auto idx = T.weight_space(lambda + layers_[static_cast<std::size_t>(j - 1)].nu);
    if (idx.empty()) continue;
    // highest weight vectors: common kernel of the e's on this weight space
    QMatrix stack(T.E.size() * n, idx.size());
    for (std::size_t i = 0; i < T.E.size(); ++i)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) stack(i * n + r, c) = T.E[i](r, idx[c]);
    QMatrix ker = nullspace(stack);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      QVector v(n);
      for (std::size_t t = 0; t < idx.size(); ++t) v[idx[t]] = ker(t, c);
      if (independent(v)) {
        cols.push_back(v);
        frontier.push_back(v);
      }
    }
  }
  while (!frontier.empty()) {
    std::vector<QVector> next;
    for (const auto& v : frontier)
      for (const auto& F : T.F) {
        QVector y = F * v;
        if (!is_zero(y) && independent(y)) {
          cols.push_back(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  QMatrix out(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) out.set_column(c, cols[c]);
  return out;
}

std::optional<QScalar> EBimodule::tau(int k, const Weight& xi, const Weight& lambda) const {
  const FiltrationLayer& L = layers_.at(static_cast<std::size_t>(k - 1));
  if (L.mult != 1) return std::nullopt;
  WeightModule T = tensor(fiber(), A_.module(lambda));
  const std::size_t n = T.dim();
  auto idx = T.weight_space(lambda + L.nu);
  QMatrix stack(T.E.size() * n, idx.size());
  for (std::size_t i = 0; i < T.E.size(); ++i)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) stack(i * n + r, c) = T.E[i](r, idx[c]);
  QMatrix ker = nullspace(stack);
  if (ker.cols() != 1) throw std::logic_error("tau: highest vectors of the layer do not form a line");
  QVector m(n);
  for (std::size_t t = 0; t < idx.size(); ++t) m[idx[t]] = ker(t, 0);
  CoordElement c = A_.extremal({}, xi).element;
  QVector lhs = left(c, m, lambda), rhs = right(m, lambda, c);
  QMatrix below = k > 1 ? isotypic_span(k - 1, lambda + xi) : QMatrix(lhs.size(), 0);
  QMatrix sys(lhs.size(), 1 + below.cols());
  sys.set_column(0, rhs);
  for (std::size_t j = 0; j < below.cols(); ++j) sys.set_column(j + 1, below.column(j));
  auto sol = solve(sys, lhs);
  if (!sol) throw std::logic_error("tau: c m and m c differ outside the lower layers");
  return (*sol)[0];
}

CharacterPoly EBimodule::layer_character(int k, const Weight& lambda) const {
  const CartanDatum& c = A_.cartan();
  Weight d = lambda - lambda0_;
  if (!d.dominant()) throw std::invalid_argument("layer_character: " + lambda.str() + " is outside lambda0 + dominant cone");
  const FiltrationLayer& L = layers_.at(static_cast<std::size_t>(k - 1));
  CharacterPoly ch;
  for (const auto& [w, m] : c.weyl_character(lambda + L.nu).terms) ch.add(w, m * static_cast<long long>(L.mult));
  return ch;
}

bool EBimodule::total_character_ok(const Weight& lambda) const {
  const CartanDatum& c = A_.cartan();
  CharacterPoly sum;
  for (const auto& L : layers_) sum = sum + layer_character(L.index, lambda);
  return sum == c.weyl_character(mu_) * c.weyl_character(lambda);
}

std::optional<WeylWord> linkage_witness(const CartanDatum& c, const Weight& x, const Weight& y) {
  for (const auto& w : c.weyl_group())
    if (c.act(w, x, true) == y) return w;
  return std::nullopt;
}

KeyLemmaReport key_lemma_characters(const CartanDatum& c, const Weight& lambda, const Weight& mu) {
  KeyLemmaReport rep;
  rep.lambda = lambda;
  rep.mu = mu;
  rep.key2_pre = (lambda + c.rho()).dominant();
  rep.key3_pre = lambda.dominant();
  auto layers = filtration_layers(c, mu);
  const int n = static_cast<int>(layers.size());
  const Weight low = c.act(c.longest(), mu);
  rep.key2_iff = rep.key3_iff = true;
  for (const auto& L : layers) {
    KeyLayer a{L.index, L.nu, lambda + L.nu - low, false, {}};
    if (auto w = linkage_witness(c, lambda, a.target)) {
      a.linked = true;
      a.witness = *w;
    }
    if (a.linked != (L.index == 1)) rep.key2_iff = false;
    rep.key2.push_back(a);
    KeyLayer b{L.index, L.nu, lambda + L.nu, false, {}};
    if (auto w = linkage_witness(c, lambda + mu, b.target)) {
      b.linked = true;
      b.witness = *w;
    }
    if (b.linked != (L.index == n)) rep.key3_iff = false;
    rep.key3.push_back(b);
  }
  return rep;
}

}  // namespace qflag
