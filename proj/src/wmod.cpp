#include "qflag/wmod.hpp"

#include <algorithm>
#include <map>

namespace qflag {

// ---------------------------------------------------------------- module basics

QMatrix WeightModule::K(const Weight& mu) const {
  QMatrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) m(j, j) = cartan().q_form(mu, wt[j]);
  return m;
}

QMatrix WeightModule::product(std::initializer_list<QMatrix> factors) const {
  QMatrix r = QMatrix::identity(dim());
  for (const auto& f : factors) r = side == Side::Left ? r * f : f * r;
  return r;
}

QMatrix WeightModule::word_matrix(const Word& w, bool is_e) const {
  QMatrix r = QMatrix::identity(dim());
  for (int i : w) {
    const QMatrix& g = is_e ? E[static_cast<std::size_t>(i)] : F[static_cast<std::size_t>(i)];
    r = side == Side::Left ? r * g : g * r;
  }
  return r;
}

QMatrix WeightModule::act(const UElement& u) const {
  QMatrix r(dim(), dim());
  std::map<Word, QMatrix> fcache, ecache;
  for (const auto& [m, c] : u.terms) {
    auto fit = fcache.find(m.f);
    if (fit == fcache.end()) fit = fcache.emplace(m.f, word_matrix(m.f, false)).first;
    auto eit = ecache.find(m.e);
    if (eit == ecache.end()) eit = ecache.emplace(m.e, word_matrix(m.e, true)).first;
    r += c * product({fit->second, K(m.k), eit->second});
  }
  return r;
}

CharacterPoly WeightModule::character() const {
  CharacterPoly ch;
  for (const auto& w : wt) ch.add(w, 1);
  return ch;
}

std::vector<std::size_t> WeightModule::weight_space(const Weight& w) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < dim(); ++j)
    if (wt[j] == w) out.push_back(j);
  return out;
}

std::vector<bool> WeightModule::valid_columns(const RootSum& extra) const {
  std::vector<bool> ok(dim(), true);
  if (!window) return ok;
  for (std::size_t j = 0; j < dim(); ++j) ok[j] = (depth[j] + extra).le(*window);
  return ok;
}

// ---------------------------------------------------------------- Verma modules

namespace {

std::string word_label(const Word& w, char letter) {
  std::string s;
  for (int i : w) s += std::string(1, letter) + std::to_string(i + 1);
  return s;
}

}  // namespace

WeightModule verma(UAlgebraPtr U, const Weight& lambda, const RootSum& window, Side side) {
  const CartanDatum& c = U->cartan();
  if (lambda.rank() != c.rank() || window.rank() != c.rank() || !window.nonneg())
    throw std::invalid_argument("verma: bad weight or depth");
  WeightModule M;
  M.U = U;
  M.side = side;
  M.window = window;
  std::map<Word, std::size_t> index;
  std::vector<Word> words;
  for (const auto& g : root_box(window))
    for (const auto& w : U->basis(g).words) {
      index[w] = words.size();
      words.push_back(w);
      M.depth.push_back(g);
      M.wt.push_back(lambda - c.weight_of(g));
      M.labels.push_back(side == Side::Left ? word_label(w, 'f') + "v" : "v" + word_label(w, 'e'));
    }
  M.highest = 0;
  const std::size_t n = words.size();
  for (int i = 0; i < c.rank(); ++i) {
    QMatrix Em(n, n), Fm(n, n);
    for (std::size_t col = 0; col < n; ++col) {
      const Word& w = words[col];
      if (side == Side::Left) {
        // e_i F v: normal form, then chi^+_lambda on the U^{>=0} tail
        for (const auto& [m, coef] : U->mul(U->e(i), U->F(w)).terms)
          if (m.e.empty()) Em(index.at(m.f), col) += coef * c.q_form(lambda, m.k);
        RootSum down = M.depth[col] + RootSum::simple(c.rank(), i);
        if (down.le(window))
          for (const auto& [m, coef] : U->mul(U->f(i), U->F(w)).terms) Fm(index.at(m.f), col) += coef;
      } else {
        // v E f_i: normal form, then chi^-_lambda on the U^{<=0} head
        for (const auto& [m, coef] : U->mul(U->E(w), U->f(i)).terms)
          if (m.f.empty()) Fm(index.at(m.e), col) += coef * c.q_form(lambda, m.k);
        RootSum down = M.depth[col] + RootSum::simple(c.rank(), i);
        if (down.le(window))
          for (const auto& [m, coef] : U->mul(U->E(w), U->e(i)).terms) Em(index.at(m.e), col) += coef;
      }
    }
    M.E.push_back(std::move(Em));
    M.F.push_back(std::move(Fm));
  }
  return M;
}

WeightModule restricted_dual(const WeightModule& M) {
  WeightModule D;
  D.U = M.U;
  D.side = M.side == Side::Left ? Side::Right : Side::Left;
  D.wt = M.wt;
  D.window = M.window;
  D.depth = M.depth;
  D.highest = M.highest;
  for (const auto& l : M.labels) D.labels.push_back("(" + l + ")*");
  for (const auto& m : M.E) D.E.push_back(m.transpose());
  for (const auto& m : M.F) D.F.push_back(m.transpose());
  return D;
}

WeightModule trivial(UAlgebraPtr U) {
  WeightModule M;
  const int r = U->rank();
  M.U = std::move(U);
  M.wt.push_back(Weight::zero(r));
  M.labels.push_back("1");
  M.highest = 0;
  for (int i = 0; i < r; ++i) {
    M.E.emplace_back(1, 1);
    M.F.emplace_back(1, 1);
  }
  return M;
}

WeightModule simple(UAlgebraPtr U, const Weight& lambda, const std::optional<RootSum>& window) {
  const CartanDatum& c = U->cartan();
  if (!lambda.dominant()) throw std::invalid_argument("simple: weight " + lambda.str() + " is not dominant");
  RootSum D = c.to_root_sum(lambda - c.act(c.longest(), lambda));
  bool truncated = false;
  if (window && !D.le(*window)) {
    truncated = true;
    for (int i = 0; i < c.rank(); ++i) D.c[static_cast<std::size_t>(i)] = std::min(D[i], (*window)[i]);
  }
  WeightModule T = verma(U, lambda, D, Side::Left);
  CharacterPoly ch = c.weyl_character(lambda);

  // per depth: Verma indices, chosen basis, projection onto quotient coordinates
  std::map<RootSum, std::vector<std::size_t>> layer;
  for (std::size_t j = 0; j < T.dim(); ++j) layer[T.depth[j]].push_back(j);
  std::map<RootSum, std::vector<std::size_t>> chosen;
  std::map<RootSum, QMatrix> proj;
  // words of the Verma basis, recovered from labels order
  std::vector<Word> words;
  for (const auto& g : root_box(D))
    for (const auto& w : U->basis(g).words) words.push_back(w);

  for (const auto& [g, idx] : layer) {
    const std::size_t n = idx.size();
    QMatrix G(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      // omega(f_{j1} ... f_{jn}) = e_{jn} ... e_{j1}
      const Word& fa = words[idx[a]];
      QMatrix op = QMatrix::identity(T.dim());
      for (int j : fa) op = T.E[static_cast<std::size_t>(j)] * op;
      for (std::size_t b = 0; b < n; ++b) G(a, b) = op(*T.highest, idx[b]);
    }
    Echelon ech = rref(G);
    long long expect = ch.coeff(lambda - c.weight_of(g));
    if (static_cast<long long>(ech.pivots.size()) != expect)
      throw std::logic_error("simple: contravariant form rank " + std::to_string(ech.pivots.size()) +
                             " differs from Weyl multiplicity " + std::to_string(expect) + " at depth " + g.str());
    if (ech.pivots.empty()) continue;
    std::vector<std::size_t> B = ech.pivots;
    QMatrix GBB(B.size(), B.size()), GB(B.size(), n);
    for (std::size_t a = 0; a < B.size(); ++a) {
      for (std::size_t b = 0; b < B.size(); ++b) GBB(a, b) = G(B[a], B[b]);
      for (std::size_t b = 0; b < n; ++b) GB(a, b) = G(B[a], b);
    }
    std::vector<std::size_t> chosen_idx;
    for (auto b : B) chosen_idx.push_back(idx[b]);
    chosen[g] = chosen_idx;
    proj[g] = inverse(GBB) * GB;
  }

  WeightModule V;
  V.U = U;
  V.side = Side::Left;
  std::map<std::size_t, std::size_t> pos;  // Verma index -> V index
  for (const auto& [g, idx] : chosen)
    for (auto j : idx) {
      pos[j] = V.wt.size();
      V.wt.push_back(T.wt[j]);
      V.labels.push_back(T.labels[j]);
      if (truncated) V.depth.push_back(g);
    }
  if (truncated) V.window = D;
  V.highest = 0;
  const std::size_t n = V.dim();
  for (int i = 0; i < c.rank(); ++i) {
    QMatrix Em(n, n), Fm(n, n);
    for (const auto& [g, idx] : chosen)
      for (auto j : idx) {
        std::size_t col = pos.at(j);
        for (int pass = 0; pass < 2; ++pass) {
          const QMatrix& A = pass == 0 ? T.E[static_cast<std::size_t>(i)] : T.F[static_cast<std::size_t>(i)];
          RootSum tg = pass == 0 ? g - RootSum::simple(c.rank(), i) : g + RootSum::simple(c.rank(), i);
          auto pit = proj.find(tg);
          if (pit == proj.end()) continue;
          const auto& tidx = layer.at(tg);
          QVector y(tidx.size());
          for (std::size_t r = 0; r < tidx.size(); ++r) y[r] = A(tidx[r], j);
          QVector coords = pit->second * y;
          const auto& tch = chosen.at(tg);
          for (std::size_t r = 0; r < tch.size(); ++r)
            if (!coords[r].is_zero()) (pass == 0 ? Em : Fm)(pos.at(tch[r]), col) = coords[r];
        }
      }
    V.E.push_back(std::move(Em));
    V.F.push_back(std::move(Fm));
  }
  if (!truncated && !(V.character() == ch)) throw std::logic_error("simple: character mismatch");
  return V;
}

WeightModule tensor(const WeightModule& M, const WeightModule& N) {
  if (M.side != N.side) throw std::invalid_argument("tensor: side mismatch");
  if (M.truncated() || N.truncated()) throw std::invalid_argument("tensor: truncated factors are not supported");
  const CartanDatum& c = M.cartan();
  WeightModule T;
  T.U = M.U;
  T.side = M.side;
  for (std::size_t a = 0; a < M.dim(); ++a)
    for (std::size_t b = 0; b < N.dim(); ++b) {
      T.wt.push_back(M.wt[a] + N.wt[b]);
      T.labels.push_back(M.labels[a] + "(x)" + N.labels[b]);
    }
  if (M.highest && N.highest) T.highest = *M.highest * N.dim() + *N.highest;
  QMatrix IM = QMatrix::identity(M.dim()), IN = QMatrix::identity(N.dim());
  for (int i = 0; i < c.rank(); ++i) {
    Weight ai = c.alpha(i);
    // Delta(e) = e (x) 1 + k_i (x) e ; Delta(f) = f (x) k_i^{-1} + 1 (x) f
    T.E.push_back(kron(M.E[static_cast<std::size_t>(i)], IN) + kron(M.K(ai), N.E[static_cast<std::size_t>(i)]));
    T.F.push_back(kron(M.F[static_cast<std::size_t>(i)], N.K(-ai)) + kron(IM, N.F[static_cast<std::size_t>(i)]));
  }
  return T;
}

// ---------------------------------------------------------------- braid operators

QMatrix exp_nilpotent(const QMatrix& X, int d, int l0) {
  QMatrix r = QMatrix::identity(X.rows());
  QMatrix p = QMatrix::identity(X.rows());
  for (int n = 1;; ++n) {
    p = p * X;
    if (p.is_zero()) break;
    if (n > static_cast<int>(X.rows()) + 1) throw std::logic_error("exp: operator is not nilpotent");
    r += exp_t_coefficient(n, d, false, l0) * p;
  }
  return r;
}

QMatrix braid_on_module(int i, const WeightModule& M, bool inverse) {
  if (M.truncated()) throw std::invalid_argument("braid operators need a finite-dimensional module");
  if (M.side != Side::Left) throw std::invalid_argument("braid_on_module needs a left module; use transpose_braid");
  const CartanDatum& c = M.cartan();
  const int di = c.d(i), l0 = c.l0();
  const QMatrix& Ei = M.E[static_cast<std::size_t>(i)];
  const QMatrix& Fi = M.F[static_cast<std::size_t>(i)];
  QMatrix Kp = M.K(c.alpha(i)), Km = M.K(-c.alpha(i));
  QMatrix H(M.dim(), M.dim());
  for (std::size_t j = 0; j < M.dim(); ++j) {
    int m = M.wt[j][i];
    H(j, j) = c.qi(i, m * (m + 1) / 2);
  }
  QScalar qi = c.qi(i), qim = c.qi(i, -1);
  QMatrix t1 = exp_nilpotent(qi * (Kp * Fi), -di, l0) * exp_nilpotent(QScalar(-1) * Ei, -di, l0) *
               exp_nilpotent(qim * (Km * Fi), -di, l0) * H;
  QMatrix t2 = exp_nilpotent((-qi) * (Km * Ei), -di, l0) * exp_nilpotent(Fi, -di, l0) *
               exp_nilpotent((-qim) * (Kp * Ei), -di, l0) * H;
  if (t1 != t2) throw std::logic_error("the two expressions for T_i disagree");
  return inverse ? qflag::inverse(t1) : t1;
}

QMatrix braid_along(const WeylWord& letters, const WeightModule& M, bool inverse) {
  QMatrix r = QMatrix::identity(M.dim());
  for (int i : letters) r = r * braid_on_module(i, M, false);
  return inverse ? qflag::inverse(r) : r;
}

QMatrix braid_word(const WeylWord& w, const WeightModule& M, bool inverse) {
  return braid_along(M.cartan().reduce(w), M, inverse);
}

QMatrix transpose_braid(const WeylWord& w, const WeightModule& M, bool inverse) {
  if (M.side != Side::Right) throw std::invalid_argument("transpose_braid needs a right module");
  return braid_word(w, restricted_dual(M), inverse).transpose();
}

// ---------------------------------------------------------------- relations

RelationReport check_relations(const WeightModule& M) {
  RelationReport rep;
  const CartanDatum& c = M.cartan();
  const int n = c.rank();
  const bool left = M.side == Side::Left;
  auto deep = [&](const Word& w) {
    RootSum r = RootSum::zero(n);
    for (int i : w) ++r.c[static_cast<std::size_t>(i)];
    return r;
  };
  auto compare = [&](const QMatrix& lhs, const QMatrix& rhs, const RootSum& extra, const std::string& what) {
    auto ok = M.valid_columns(extra);
    for (std::size_t j = 0; j < M.dim(); ++j) {
      if (!ok[j]) continue;
      ++rep.checked;
      for (std::size_t r = 0; r < M.dim(); ++r)
        if (lhs(r, j) != rhs(r, j)) {
          rep.ok = false;
          rep.failures.push_back(what + " fails on " + M.labels[j]);
          return;
        }
    }
  };
  // deepening generator: f on left modules, e on right modules
  auto deepening = [&](const Word& fw, const Word& ew) { return left ? deep(fw) : deep(ew); };
  std::vector<Weight> probes;
  for (int i = 0; i < n; ++i) probes.push_back(c.fundamental(i));
  for (const auto& mu : probes) {
    QMatrix Kmu = M.K(mu), Kinv = M.K(-mu);
    for (int i = 0; i < n; ++i) {
      QScalar s = c.q_form(mu, c.alpha(i));
      compare(M.product({Kmu, M.E[static_cast<std::size_t>(i)], Kinv}), s * M.E[static_cast<std::size_t>(i)],
              deepening({}, {i}), "k e k^-1 = q^(mu,alpha) e");
      compare(M.product({Kmu, M.F[static_cast<std::size_t>(i)], Kinv}), s.inverse() * M.F[static_cast<std::size_t>(i)],
              deepening({i}, {}), "k f k^-1 = q^-(mu,alpha) f");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      QMatrix lhs = M.product({M.E[static_cast<std::size_t>(i)], M.F[static_cast<std::size_t>(j)]}) -
                    M.product({M.F[static_cast<std::size_t>(j)], M.E[static_cast<std::size_t>(i)]});
      QMatrix rhs(M.dim(), M.dim());
      if (i == j)
        rhs = (c.qi(i) - c.qi(i, -1)).inverse() * (M.K(c.alpha(i)) - M.K(-c.alpha(i)));
      compare(lhs, rhs, deepening({j}, {i}), "[e" + std::to_string(i + 1) + ",f" + std::to_string(j + 1) + "]");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      QMatrix se(M.dim(), M.dim()), sf(M.dim(), M.dim());
      Word any;
      for (const auto& [w, coef] : M.U->serre(i, j)) {
        se += coef * M.word_matrix(w, true);
        sf += coef * M.word_matrix(w, false);
        any = w;
      }
      QMatrix zero(M.dim(), M.dim());
      compare(se, zero, deepening({}, any), "Serre(e)");
      compare(sf, zero, deepening(any, {}), "Serre(f)");
    }
  return rep;
}

}  // namespace qflag
