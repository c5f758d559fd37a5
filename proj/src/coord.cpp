#include "qflag/coord.hpp"

#include <algorithm>

namespace qflag {

namespace {

// incremental row basis for greedy independence tests
class RowSpan {
 public:
  explicit RowSpan(std::size_t n) : n_(n) {}
  std::size_t size() const { return rows_.size(); }
  // reduces r against the basis; returns true and keeps it if independent
  bool add(QVector r) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const QScalar& c = r[piv_[k]];
      if (c.is_zero()) continue;
      QScalar f = c;
      for (std::size_t j = 0; j < n_; ++j)
        if (!rows_[k][j].is_zero()) r[j] -= f * rows_[k][j];
    }
    for (std::size_t j = 0; j < n_; ++j)
      if (!r[j].is_zero()) {
        QScalar inv = r[j].inverse();
        for (auto& x : r)
          if (!x.is_zero()) x *= inv;
        // keep earlier rows reduced in the new pivot
        for (auto& row : rows_) {
          QScalar g = row[j];
          if (g.is_zero()) continue;
          for (std::size_t t = 0; t < n_; ++t)
            if (!r[t].is_zero()) row[t] -= g * r[t];
        }
        rows_.push_back(std::move(r));
        piv_.push_back(j);
        return true;
      }
    return false;
  }

 private:
  std::size_t n_;
  std::vector<QVector> rows_;
  std::vector<std::size_t> piv_;
};

RootSum clip_sum(const RootSum& a, const RootSum& b) { return a + b; }

}  // namespace

CoordAlgebra::CoordAlgebra(UAlgebraPtr U, std::optional<RootSum> window) : U_(std::move(U)), window_(std::move(window)) {}

const WeightModule& CoordAlgebra::module(const Weight& grade) const {
  {
    std::lock_guard lock(mu_);
    auto it = modules_.find(grade);
    if (it != modules_.end()) return *it->second;
  }
  auto m = std::make_shared<WeightModule>(simple(U_, grade, window_));
  std::lock_guard lock(mu_);
  return *modules_.emplace(grade, std::move(m)).first->second;
}

const CoordAlgebra::Frame& CoordAlgebra::frame(const Weight& grade) const {
  {
    std::lock_guard lock(mu_);
    auto it = frames_.find(grade);
    if (it != frames_.end()) return *it->second;
  }
  const WeightModule& V = module(grade);
  const CartanDatum& c = cartan();
  auto fr = std::make_shared<Frame>();
  // weights by distance from the top
  std::map<Weight, std::vector<std::size_t>> spaces;
  for (std::size_t j = 0; j < V.dim(); ++j) spaces[V.wt[j]].push_back(j);
  std::vector<Weight> order;
  for (const auto& [w, idx] : spaces) order.push_back(w);
  std::sort(order.begin(), order.end(), [&](const Weight& a, const Weight& b) {
    int ha = c.to_root_sum(grade - a).height(), hb = c.to_root_sum(grade - b).height();
    return ha != hb ? ha < hb : a < b;
  });
  std::map<Word, QVector> rows;
  const std::size_t h = *V.highest;
  for (const auto& zeta : order) {
    const auto& idx = spaces.at(zeta);
    RowSpan span(idx.size());
    std::vector<Word> chosen;
    std::vector<QVector> restricted;
    auto offer = [&](const Word& w, const QVector& full) {
      QVector r(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) r[k] = full[idx[k]];
      if (span.add(r)) {
        chosen.push_back(w);
        restricted.push_back(r);
        rows[w] = full;
      }
    };
    if (zeta == grade) {
      QVector top(V.dim());
      top[h] = QScalar(1);
      offer({}, top);
    } else {
      for (int i = 0; i < c.rank() && chosen.size() < idx.size(); ++i) {
        auto up = fr->words.find(zeta + c.alpha(i));
        if (up == fr->words.end()) continue;
        for (const auto& w : up->second) {
          if (chosen.size() == idx.size()) break;
          Word nw = w;
          nw.push_back(i);
          offer(nw, row_times(rows.at(w), V.E[static_cast<std::size_t>(i)]));
        }
      }
    }
    if (chosen.size() != idx.size())
      throw std::logic_error("dual weight space at " + zeta.str() + " is not generated by the highest functional");
    QMatrix G(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t k = 0; k < idx.size(); ++k) G(r, k) = restricted[r][k];
    fr->words[zeta] = std::move(chosen);
    fr->gram[zeta] = inverse(G);
  }
  std::lock_guard lock(mu_);
  return *frames_.emplace(grade, std::move(fr)).first->second;
}

CoordElement CoordAlgebra::unit() const {
  Weight z = Weight::zero(cartan().rank());
  return basis(z, 0);
}

CoordElement CoordAlgebra::zero(const Weight& grade) const { return {grade, QVector(dim(grade))}; }

CoordElement CoordAlgebra::basis(const Weight& grade, std::size_t index) const {
  CoordElement e = zero(grade);
  e.vec.at(index) = QScalar(1);
  return e;
}

std::optional<Weight> CoordAlgebra::weight_of(const CoordElement& a) const {
  std::optional<Weight> w;
  for (std::size_t j = 0; j < a.vec.size(); ++j) {
    if (a.vec[j].is_zero()) continue;
    Weight x = weight(a, j);
    if (w && !(*w == x)) return std::nullopt;
    w = x;
  }
  return w;
}

CoordElement CoordAlgebra::add(const CoordElement& a, const CoordElement& b) const {
  if (!(a.grade == b.grade)) throw std::invalid_argument("add: grades differ");
  CoordElement r = a;
  for (std::size_t j = 0; j < r.vec.size(); ++j) r.vec[j] += b.vec[j];
  return r;
}

CoordElement CoordAlgebra::scale(const QScalar& s, const CoordElement& a) const {
  CoordElement r = a;
  for (auto& x : r.vec) x *= s;
  return r;
}

CoordAlgebra::Table& CoordAlgebra::table(const Weight& lambda, const Weight& mu) const {
  std::lock_guard lock(mu_);
  auto it = tables_.find({lambda, mu});
  if (it != tables_.end()) return *it->second;
  const CartanDatum& c = cartan();
  const WeightModule& A = module(lambda);
  const WeightModule& B = module(mu);
  const WeightModule& N = module(lambda + mu);
  auto t = std::make_shared<Table>();
  t->p = QMatrix(N.dim(), A.dim() * B.dim());
  t->done.assign(A.dim() * B.dim(), 0);
  QMatrix top(A.dim(), B.dim());
  top(*A.highest, *B.highest) = QScalar(1);
  t->fun[{}] = top;
  for (int i = 0; i < c.rank(); ++i) {
    t->et.push_back(A.E[static_cast<std::size_t>(i)].transpose());
    t->k.push_back(A.K(c.alpha(i)));
  }
  return *tables_.emplace(std::make_pair(lambda, mu), std::move(t)).first->second;
}

const QMatrix& CoordAlgebra::functional(Table& t, const Weight& mu, const Word& w) const {
  auto it = t.fun.find(w);
  if (it != t.fun.end()) return it->second;
  const QMatrix& R = functional(t, mu, Word(w.begin(), w.end() - 1));
  const auto i = static_cast<std::size_t>(w.back());
  // x -> R(e_i x) with e_i acting as E (x) 1 + K_i (x) E
  QMatrix next = t.et[i] * R + t.k[i] * R * module(mu).E[i];
  return t.fun.emplace(w, std::move(next)).first->second;
}

void CoordAlgebra::fill(Table& t, const Weight& lambda, const Weight& mu, std::size_t a, std::size_t b) const {
  std::lock_guard lock(mu_);
  const WeightModule& A = module(lambda);
  const WeightModule& B = module(mu);
  const std::size_t col = a * B.dim() + b;
  if (t.done[col]) return;
  t.done[col] = 1;
  const Weight nu = lambda + mu;
  const WeightModule& N = module(nu);
  const Frame& fr = frame(nu);
  const Weight zeta = A.wt[a] + B.wt[b];
  auto idx = N.weight_space(zeta);
  if (idx.empty()) return;
  const auto& words = fr.words.at(zeta);
  QVector rhs(words.size());
  for (std::size_t r = 0; r < words.size(); ++r) rhs[r] = functional(t, mu, words[r])(a, b);
  QVector coords = fr.gram.at(zeta) * rhs;
  for (std::size_t k = 0; k < coords.size(); ++k) t.p(idx[k], col) = coords[k];
}

const QMatrix& CoordAlgebra::product_table(const Weight& lambda, const Weight& mu) const {
  std::lock_guard lock(mu_);
  Table& t = table(lambda, mu);
  const std::size_t db = dim(mu);
  for (std::size_t a = 0; a < dim(lambda); ++a)
    for (std::size_t b = 0; b < db; ++b) fill(t, lambda, mu, a, b);
  return t.p;
}

CoordElement CoordAlgebra::mult(const CoordElement& a, const CoordElement& b) const {
  Table& t = table(a.grade, b.grade);
  const QMatrix& p = t.p;
  const WeightModule& A = module(a.grade);
  const WeightModule& B = module(b.grade);
  CoordElement r = zero(a.grade + b.grade);
  const std::size_t db = b.vec.size();
  for (std::size_t i = 0; i < a.vec.size(); ++i) {
    if (a.vec[i].is_zero()) continue;
    for (std::size_t j = 0; j < db; ++j) {
      if (b.vec[j].is_zero()) continue;
      if (window_) {
        RootSum da = A.depth.empty() ? RootSum::zero(cartan().rank()) : A.depth[i];
        RootSum dbb = B.depth.empty() ? RootSum::zero(cartan().rank()) : B.depth[j];
        // full modules have no depth list: measure from the top
        if (A.depth.empty()) da = cartan().to_root_sum(a.grade - A.wt[i]);
        if (B.depth.empty()) dbb = cartan().to_root_sum(b.grade - B.wt[j]);
        if (!clip_sum(da, dbb).le(*window_)) throw std::out_of_range("product leaves the truncation window");
      }
      fill(t, a.grade, b.grade, i, j);
      QScalar s = a.vec[i] * b.vec[j];
      for (std::size_t k = 0; k < r.vec.size(); ++k)
        if (!p(k, i * db + j).is_zero()) r.vec[k] += s * p(k, i * db + j);
    }
  }
  return r;
}

CoordElement CoordAlgebra::act(const UElement& u, const CoordElement& a) const {
  return {a.grade, module(a.grade).act(u) * a.vec};
}

QScalar CoordAlgebra::eval(const CoordElement& a, const UElement& u) const {
  const WeightModule& V = module(a.grade);
  return (V.act(u) * a.vec)[*V.highest];
}

ExtremalElement CoordAlgebra::extremal(const WeylWord& w, const Weight& lambda) const {
  const CartanDatum& c = cartan();
  if (!lambda.dominant()) throw std::invalid_argument("extremal: grade must be dominant");
  const WeightModule& V = module(lambda);
  WeylWord red = c.reduce(c.inverse(w));
  QVector v(V.dim());
  v[*V.highest] = QScalar(1);
  Weight cur = lambda;
  for (auto it = red.rbegin(); it != red.rend(); ++it) {
    const int j = *it;
    const int n = cur[j];
    for (int k = 0; k < n; ++k) v = V.F[static_cast<std::size_t>(j)] * v;
    QScalar fact = c.one();
    for (int k = 1; k <= n; ++k) fact *= (c.qi(j, k) - c.qi(j, -k)) / (c.qi(j) - c.qi(j, -1));
    for (auto& x : v) x /= fact;
    cur = c.reflect(j, cur);
  }
  Weight target = c.act(c.inverse(w), lambda);
  if (!(cur == target)) throw std::logic_error("extremal: weight bookkeeping failed");
  if (V.weight_space(target).size() != 1)
    throw std::logic_error("extremal weight space of " + lambda.str() + " at " + target.str() + " is not a line");
  if (is_zero(v)) throw std::out_of_range("extremal vector lies outside the truncation window");
  return {w, lambda, {lambda, v}};
}

OreWitness CoordAlgebra::ore_witness(const CoordElement& phi, const ExtremalElement& s, bool left,
                                     int max_height) const {
  const CartanDatum& c = cartan();
  auto zphi = weight_of(phi);
  if (!zphi || phi.is_zero()) throw std::invalid_argument("ore_witness: phi must be homogeneous and nonzero");
  OreWitness out;
  const Weight& eta = phi.grade;
  const Weight& lam = s.grade;
  WeylWord winv = c.inverse(s.w);
  // candidate grades xi by total size, then lexicographically
  std::vector<Weight> cands;
  std::vector<int> cur(static_cast<std::size_t>(c.rank()), 0);
  std::function<void(int, int)> gen = [&](int i, int left_over) {
    if (i == c.rank()) {
      cands.emplace_back(cur);
      return;
    }
    for (int k = 0; k <= left_over; ++k) {
      cur[static_cast<std::size_t>(i)] = k;
      gen(i + 1, left_over - k);
    }
  };
  for (int hgt = 0; hgt <= max_height; ++hgt) {
    std::vector<Weight> layer;
    cands.clear();
    gen(0, hgt);
    for (auto& x : cands) {
      int sum = 0;
      for (int i = 0; i < c.rank(); ++i) sum += x[i];
      if (sum == hgt) layer.push_back(x);
    }
    std::sort(layer.begin(), layer.end());
    for (const auto& xi : layer) {
      Weight mu = xi + lam - eta;
      if (!mu.dominant()) continue;
      out.tried.push_back(xi);
      ExtremalElement t = extremal(s.w, mu);
      CoordElement target = left ? mult(t.element, phi) : mult(phi, t.element);
      Weight zpsi = c.act(winv, mu) + *zphi - c.act(winv, lam);
      const WeightModule& X = module(xi);
      auto idx = X.weight_space(zpsi);
      if (idx.empty()) continue;
      const std::size_t nt = target.vec.size();
      QMatrix sys(nt, idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) {
        CoordElement b = basis(xi, idx[k]);
        CoordElement col = left ? mult(b, s.element) : mult(s.element, b);
        for (std::size_t r = 0; r < nt; ++r) sys(r, k) = col.vec[r];
      }
      auto sol = solve(sys, target.vec);
      if (!sol) continue;
      CoordElement psi = zero(xi);
      for (std::size_t k = 0; k < idx.size(); ++k) psi.vec[idx[k]] = (*sol)[k];
      out.found = true;
      out.xi = xi;
      out.t = t;
      out.psi = psi;
      return out;
    }
  }
  return out;
}

bool CoordAlgebra::check_witness(const CoordElement& phi, const ExtremalElement& s, const OreWitness& wit,
                                 bool left) const {
  if (!wit.found) return false;
  CoordElement lhs = left ? mult(wit.t.element, phi) : mult(phi, wit.t.element);
  CoordElement rhs = left ? mult(wit.psi, s.element) : mult(s.element, wit.psi);
  return lhs.grade == rhs.grade && lhs.vec == rhs.vec;
}

Weight CoordAlgebra::stage_step(const WeylWord&) const { return cartan().rho(); }

LocalizationSpace CoordAlgebra::localize(const WeylWord& w, const Weight& lambda, const RootSum& gamma,
                                         int max_steps) const {
  const CartanDatum& c = cartan();
  if (window_ && !c.reduce(w).empty()) throw std::invalid_argument("localize: a top-truncated algebra only serves w = 1");
  if (window_ && !gamma.le(*window_)) throw std::out_of_range("localize: depth exceeds the truncation window");
  LocalizationSpace L{w, lambda, gamma, {}, false, 0};
  const Weight step = stage_step(w);
  WeylWord winv = c.inverse(w);
  Weight nu = lambda;
  while (!nu.dominant()) nu = nu + step;
  ExtremalElement cstep = extremal(w, step);
  // a certified level: U^-_{-gamma} embeds into V(nu) once every <nu, alpha_i^vee> >= ht(gamma)
  auto certified = [&](const Weight& x) {
    for (int i = 0; i < c.rank(); ++i)
      if (x[i] < gamma.height()) return false;
    return true;
  };
  int threshold = -1;
  for (int k = 0; k <= max_steps; ++k) {
    Weight zeta = c.act(winv, nu - c.weight_of(gamma));
    auto idx = module(nu).weight_space(zeta);
    LocalizationStage st{nu, idx.size(), 0};
    Weight next = nu + step;
    Weight znext = c.act(winv, next - c.weight_of(gamma));
    auto nidx = module(next).weight_space(znext);
    QMatrix tr(nidx.size(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      CoordElement img = mult(basis(nu, idx[j]), cstep.element);
      for (std::size_t r = 0; r < nidx.size(); ++r) tr(r, j) = img.vec[nidx[r]];
    }
    st.rank = rank(tr);
    L.stages.push_back(st);
    bool bij = st.rank == idx.size() && idx.size() == nidx.size();
    if (!bij) threshold = -1;
    else if (threshold < 0) threshold = k;
    if (bij && certified(nu)) {
      L.stable = true;
      L.dim = idx.size();
      L.threshold = threshold;
      break;
    }
    nu = next;
  }
  return L;
}

CharacterPoly CoordAlgebra::localized_character(const Weight& lambda, const RootSum& depth, int max_steps) const {
  const CartanDatum& c = cartan();
  CharacterPoly ch;
  for (const auto& g : root_box(depth)) {
    LocalizationSpace L = localize({}, lambda, g, max_steps);
    if (!L.stable) throw std::runtime_error("localization at depth " + g.str() + " did not stabilize");
    if (L.dim) ch.add(lambda - c.weight_of(g), static_cast<long long>(L.dim));
  }
  return ch;
}

ThetaReport CoordAlgebra::theta_check(const Weight& lambda, const RootSum& depth, int max_steps) const {
  const CartanDatum& c = cartan();
  ThetaReport rep;
  for (const auto& g : root_box(depth)) {
    LocalizationSpace L = localize({}, lambda, g, max_steps);
    if (!L.stable || L.stages.size() < 1) {
      rep.ok = false;
      rep.failures.push_back("no stable stage at depth " + g.str());
      continue;
    }
    const auto& words = U_->basis(g).words;
    rep.dims[g] = L.dim;
    // evaluation of the last stage against U^+_gamma, and of the stage after it
    auto evaluation = [&](const Weight& nu) {
      const WeightModule& V = module(nu);
      auto idx = V.weight_space(nu - c.weight_of(g));
      QMatrix ev(words.size(), idx.size());
      for (std::size_t r = 0; r < words.size(); ++r) {
        QVector top(V.dim());
        top[*V.highest] = QScalar(1);
        QVector row = row_times(top, V.word_matrix(words[r], true));
        for (std::size_t j = 0; j < idx.size(); ++j) ev(r, j) = row[idx[j]];
      }
      return std::make_pair(ev, idx);
    };
    Weight nu = L.stages.back().nu;
    Weight next = nu + c.rho();
    auto [ev0, idx0] = evaluation(nu);
    auto [ev1, idx1] = evaluation(next);
    if (rank(ev0) != words.size() || idx0.size() != words.size()) {
      rep.ok = false;
      rep.failures.push_back("evaluation on U^+ at depth " + g.str() + " is not bijective");
    }
    // the functional of phi c_rho on U^+ equals that of phi
    ExtremalElement cr = extremal({}, c.rho());
    QMatrix tr(idx1.size(), idx0.size());
    for (std::size_t j = 0; j < idx0.size(); ++j) {
      CoordElement img = mult(basis(nu, idx0[j]), cr.element);
      for (std::size_t r = 0; r < idx1.size(); ++r) tr(r, j) = img.vec[idx1[r]];
    }
    if (ev1 * tr != ev0) {
      rep.ok = false;
      rep.failures.push_back("evaluation changes along the direct limit at depth " + g.str());
    }
  }
  return rep;
}

std::size_t CoordAlgebra::covering_rank(const Weight& lambda, const Weight& mu) const {
  const CartanDatum& c = cartan();
  const std::size_t n = dim(lambda + mu), d = dim(lambda);
  std::vector<QVector> cols;
  for (const auto& w : c.weyl_group()) {
    ExtremalElement e = extremal(w, mu);
    for (std::size_t j = 0; j < d; ++j) cols.push_back(mult(basis(lambda, j), e.element).vec);
  }
  QMatrix m(n, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t r = 0; r < n; ++r) m(r, k) = cols[k][r];
  return rank(m);
}

namespace {

QVector transposed_extremal(const WeightModule& V, const WeylWord& w) {
  if (V.truncated()) throw std::invalid_argument("Schubert data needs full modules");
  QMatrix T = transpose_braid(w, restricted_dual(V));
  return T.column(*V.highest);
}

}  // namespace

QScalar CoordAlgebra::epsilon(const WeylWord& w, const CoordElement& phi) const {
  QVector d = transposed_extremal(module(phi.grade), w);
  QScalar s(0);
  for (std::size_t j = 0; j < d.size(); ++j) s += d[j] * phi.vec[j];
  return s;
}

SchubertData CoordAlgebra::schubert(const WeylWord& w, const CoordElement& phi, const RootSum& depth) const {
  const WeightModule& V = module(phi.grade);
  QVector d = transposed_extremal(V, w);
  SchubertData out{epsilon(w, phi), {}};
  for (const auto& g : root_box(depth)) {
    const auto& words = U_->basis(g).words;
    QVector vals(words.size());
    for (std::size_t r = 0; r < words.size(); ++r) {
      QVector img = V.word_matrix(words[r], true) * phi.vec;
      QScalar s(0);
      for (std::size_t j = 0; j < d.size(); ++j) s += d[j] * img[j];
      vals[r] = s;
    }
    out.phi[g] = vals;
  }
  return out;
}

std::size_t CoordAlgebra::schubert_rank(const WeylWord& w, const Weight& lambda) const {
  const WeightModule& V = module(lambda);
  const CartanDatum& c = cartan();
  QVector d = transposed_extremal(V, w);
  // span of the functionals v -> <tT_w v*, x v> for x in U^+
  RowSpan span(V.dim());
  std::vector<QVector> frontier{d};
  span.add(d);
  while (!frontier.empty()) {
    std::vector<QVector> next;
    for (const auto& r : frontier)
      for (int i = 0; i < c.rank(); ++i) {
        QVector s = row_times(r, V.E[static_cast<std::size_t>(i)]);
        if (is_zero(s)) continue;
        if (span.add(s)) next.push_back(s);
      }
    frontier = std::move(next);
  }
  return span.size();
}

}  // namespace qflag
