#include "qflag/uqg.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>

namespace qflag {

// ---------------------------------------------------------------- containers

std::size_t GradedBasis::position(const Word& w) const {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it == words.end() || *it != w) throw std::invalid_argument("word is not a basis word");
  return static_cast<std::size_t>(it - words.begin());
}

UElement UElement::monomial(Mono m, QScalar c) {
  UElement u;
  u.add(m, c);
  return u;
}

void UElement::add(const Mono& m, const QScalar& c) {
  if (c.is_zero()) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

UElement& UElement::operator+=(const UElement& o) {
  for (const auto& [m, c] : o.terms) add(m, c);
  return *this;
}

UElement& UElement::operator-=(const UElement& o) {
  for (const auto& [m, c] : o.terms) add(m, -c);
  return *this;
}

UElement& UElement::operator*=(const QScalar& s) {
  if (s.is_zero()) {
    terms.clear();
    return *this;
  }
  for (auto& [m, c] : terms) c *= s;
  return *this;
}

void HopfTensor::add(const std::vector<Mono>& m, const QScalar& c) {
  if (c.is_zero()) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

HopfTensor& HopfTensor::operator+=(const HopfTensor& o) {
  for (const auto& [m, c] : o.terms) add(m, c);
  return *this;
}

int default_max_height() {
  if (const char* env = std::getenv("QFLAG_MAX_HEIGHT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 64) return static_cast<int>(v);
  }
  return 8;
}

// ---------------------------------------------------------------- graded bases

UAlgebra::UAlgebra(CartanDatum c, int max_height) : c_(std::move(c)), max_height_(max_height) {
  if (max_height_ < 1) throw std::invalid_argument("degree cap must be positive");
}

RootSum UAlgebra::degree(const Word& w) const {
  RootSum d = RootSum::zero(rank());
  for (int i : w) {
    if (i < 0 || i >= rank()) throw std::invalid_argument("generator index out of range");
    ++d.c[static_cast<std::size_t>(i)];
  }
  return d;
}

void UAlgebra::check_height(const Word& w) const {
  if (static_cast<int>(w.size()) > max_height_)
    throw DegreeCapExceeded("degree height " + std::to_string(w.size()) + " exceeds cap " +
                            std::to_string(max_height_));
}

std::vector<std::pair<Word, QScalar>> UAlgebra::serre(int i, int j) const {
  std::vector<std::pair<Word, QScalar>> out;
  int m = 1 - c_.a(i, j);
  for (int n = 0; n <= m; ++n) {
    Word w(static_cast<std::size_t>(m - n), i);
    w.push_back(j);
    w.insert(w.end(), static_cast<std::size_t>(n), i);
    QScalar coef = quantum_binomial(m, n, c_.d(i), c_.l0());
    out.emplace_back(w, n % 2 ? -coef : coef);
  }
  return out;
}

const GradedBasis& UAlgebra::basis(const RootSum& beta) const {
  if (beta.rank() != rank() || !beta.nonneg()) throw std::invalid_argument("degree must lie in Q^+");
  if (beta.height() > max_height_)
    throw DegreeCapExceeded("degree " + beta.str() + " exceeds height cap " + std::to_string(max_height_));
  {
    std::lock_guard<std::mutex> lock(basis_mu_);
    auto it = bases_.find(beta);
    if (it != bases_.end()) return *it->second;
  }
  auto gb = std::make_unique<GradedBasis>();
  gb->degree = beta;
  Word letters;
  for (int i = 0; i < rank(); ++i) letters.insert(letters.end(), static_cast<std::size_t>(beta[i]), i);
  std::vector<Word> all;
  do all.push_back(letters);
  while (std::next_permutation(letters.begin(), letters.end()));
  // columns in descending lexicographic order: pivots fall on lex-largest words
  std::map<Word, std::size_t> col;
  for (std::size_t k = 0; k < all.size(); ++k) col[all[all.size() - 1 - k]] = k;

  std::vector<std::map<std::size_t, QScalar>> rows;
  auto push_relation = [&](const std::vector<std::pair<Word, QScalar>>& rel) {
    std::map<std::size_t, QScalar> r;
    for (const auto& [w, c] : rel) {
      auto& x = r[col.at(w)];
      x += c;
    }
    rows.push_back(std::move(r));
  };
  for (int i = 0; i < rank(); ++i) {
    if (beta[i] == 0) continue;
    RootSum lower = beta - RootSum::simple(rank(), i);
    const GradedBasis& lb = basis(lower);
    for (const auto& [w, coords] : lb.word_index) {
      if (coords.size() == 1 && lb.words[coords[0].first] == w) continue;
      std::vector<std::pair<Word, QScalar>> rel{{w, QScalar(1)}};
      for (const auto& [pos, c] : coords) rel.emplace_back(lb.words[pos], -c);
      auto left = rel, right = rel;
      for (auto& [x, c] : left) x.insert(x.begin(), i);
      for (auto& [x, c] : right) x.push_back(i);
      push_relation(left);
      push_relation(right);
    }
  }
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) {
      if (i == j) continue;
      RootSum d = RootSum::simple(rank(), j) + (1 - c_.a(i, j)) * RootSum::simple(rank(), i);
      if (d == beta) push_relation(serre(i, j));
    }

  QMatrix m(rows.size(), all.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [k, c] : rows[r]) m(r, k) = c;
  Echelon ech = rref(m);
  std::vector<int> pivot_row(all.size(), -1);
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) pivot_row[ech.pivots[r]] = static_cast<int>(r);
  for (const auto& w : all)
    if (pivot_row[col.at(w)] < 0) gb->words.push_back(w);  // `all` is ascending
  long long expect = c_.kostant(beta);
  if (static_cast<long long>(gb->words.size()) != expect)
    throw std::logic_error("basis of degree " + beta.str() + " has size " + std::to_string(gb->words.size()) +
                           ", expected " + std::to_string(expect));
  for (const auto& w : all) {
    std::size_t k = col.at(w);
    std::vector<std::pair<std::size_t, QScalar>> coords;
    if (pivot_row[k] < 0) {
      coords.emplace_back(gb->position(w), QScalar(1));
    } else {
      std::size_t r = static_cast<std::size_t>(pivot_row[k]);
      for (std::size_t b = 0; b < gb->words.size(); ++b) {
        const QScalar& x = ech.reduced(r, col.at(gb->words[b]));
        if (!x.is_zero()) coords.emplace_back(b, -x);
      }
    }
    gb->word_index.emplace(w, std::move(coords));
  }
  std::lock_guard<std::mutex> lock(basis_mu_);
  auto [it, inserted] = bases_.emplace(beta, std::move(gb));
  return *it->second;
}

std::vector<Word> UAlgebra::words_in_box(const RootSum& box) const {
  std::vector<Word> out;
  for (const auto& g : root_box(box))
    for (const auto& w : basis(g).words) out.push_back(w);
  return out;
}

const std::vector<std::pair<Word, QScalar>>& UAlgebra::reduce(const Word& w) const {
  {
    std::lock_guard<std::mutex> lock(reduce_mu_);
    auto it = reduced_.find(w);
    if (it != reduced_.end()) return it->second;
  }
  check_height(w);
  const GradedBasis& gb = basis(degree(w));
  std::vector<std::pair<Word, QScalar>> out;
  for (const auto& [pos, c] : gb.word_index.at(w)) out.emplace_back(gb.words[pos], c);
  std::lock_guard<std::mutex> lock(reduce_mu_);
  return reduced_.emplace(w, std::move(out)).first->second;
}

// ---------------------------------------------------------------- elements

UElement UAlgebra::one() const { return UElement::monomial(Mono{{}, Weight::zero(rank()), {}}, QScalar(1)); }

UElement UAlgebra::scalar(const QScalar& s) const { return UElement::monomial(Mono{{}, Weight::zero(rank()), {}}, s); }

UElement UAlgebra::e(int i) const { return E({i}); }
UElement UAlgebra::f(int i) const { return F({i}); }

UElement UAlgebra::k(const Weight& w) const {
  if (w.rank() != rank()) throw std::invalid_argument("weight rank mismatch");
  return UElement::monomial(Mono{{}, w, {}}, QScalar(1));
}

UElement UAlgebra::ki(int i, int power) const { return k(power * c_.alpha(i)); }

UElement UAlgebra::E(const Word& w) const {
  UElement u;
  for (const auto& [b, c] : reduce(w)) u.add(Mono{{}, Weight::zero(rank()), b}, c);
  return u;
}

UElement UAlgebra::F(const Word& w) const {
  UElement u;
  for (const auto& [b, c] : reduce(w)) u.add(Mono{b, Weight::zero(rank()), {}}, c);
  return u;
}

UElement UAlgebra::e_divided(int i, int n) const {
  return quantum_factorial(n, c_.d(i), c_.l0()).inverse() * E(Word(static_cast<std::size_t>(n), i));
}

UElement UAlgebra::f_divided(int i, int n) const {
  return quantum_factorial(n, c_.d(i), c_.l0()).inverse() * F(Word(static_cast<std::size_t>(n), i));
}

namespace {

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

}  // namespace

const UElement& UAlgebra::straighten(const Word& e, const Word& f) const {
  auto key = std::make_pair(e, f);
  {
    std::lock_guard<std::mutex> lock(straighten_mu_);
    auto it = straight_.find(key);
    if (it != straight_.end()) return it->second;
  }
  UElement r;
  const Weight zero = Weight::zero(rank());
  if (e.empty() || f.empty()) {
    for (const auto& [bf, cf] : reduce(f))
      for (const auto& [be, ce] : reduce(e)) r.add(Mono{bf, zero, be}, cf * ce);
  } else if (e.size() == 1) {
    // e_i f_j F'' = f_j (e_i F'') + delta_ij (k_i - k_i^{-1})/(q_i - q_i^{-1}) F''
    int i = e[0], j = f[0];
    Word rest(f.begin() + 1, f.end());
    const UElement& inner = straighten(e, rest);
    for (const auto& [m, c] : inner.terms)
      for (const auto& [bf, cf] : reduce(concat({j}, m.f))) r.add(Mono{bf, m.k, m.e}, c * cf);
    if (i == j) {
      QScalar inv = (c_.qi(i) - c_.qi(i, -1)).inverse();
      Weight ai = c_.alpha(i);
      int t = c_.form_t(ai, c_.weight_of(degree(rest)));
      QScalar up = c_.q_pow_t(-t) * inv, down = -(c_.q_pow_t(t) * inv);
      for (const auto& [bf, cf] : reduce(rest)) {
        r.add(Mono{bf, ai, {}}, cf * up);
        r.add(Mono{bf, -ai, {}}, cf * down);
      }
    }
  } else {
    Word head{e[0]};
    Word rest(e.begin() + 1, e.end());
    const UElement& inner = straighten(rest, f);
    for (const auto& [m, c] : inner.terms) {
      const UElement& s = straighten(head, m.f);
      for (const auto& [m2, c2] : s.terms) {
        QScalar shift = c_.q_pow_t(-c_.form_t(m.k, c_.weight_of(degree(m2.e))));
        Weight kk = m2.k + m.k;
        for (const auto& [be, ce] : reduce(concat(m2.e, m.e))) r.add(Mono{m2.f, kk, be}, c * c2 * ce * shift);
      }
    }
  }
  std::lock_guard<std::mutex> lock(straighten_mu_);
  return straight_.emplace(key, std::move(r)).first->second;
}

UElement UAlgebra::mono_mul(const Mono& a, const Mono& b) const {
  UElement r;
  const UElement& mid = straighten(a.e, b.f);
  for (const auto& [m, c] : mid.terms) {
    // k_a F' = q^{-(a.k, deg F')} F' k_a and E' k_b = q^{-(b.k, deg E')} k_b E'
    int t = c_.form_t(a.k, c_.weight_of(degree(m.f))) + c_.form_t(b.k, c_.weight_of(degree(m.e)));
    QScalar coef = c * c_.q_pow_t(-t);
    Weight kk = a.k + m.k + b.k;
    const auto& fs = reduce(concat(a.f, m.f));
    const auto& es = reduce(concat(m.e, b.e));
    for (const auto& [bf, cf] : fs)
      for (const auto& [be, ce] : es) r.add(Mono{bf, kk, be}, coef * cf * ce);
  }
  return r;
}

UElement UAlgebra::mul(const UElement& a, const UElement& b) const {
  UElement r;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      UElement p = mono_mul(ma, mb);
      p *= ca * cb;
      r += p;
    }
  return r;
}

UElement UAlgebra::mul(std::initializer_list<UElement> xs) const {
  UElement r = one();
  for (const auto& x : xs) r = mul(r, x);
  return r;
}

UElement UAlgebra::pow(const UElement& a, int n) const {
  if (n < 0) throw std::invalid_argument("negative power");
  UElement r = one();
  for (int i = 0; i < n; ++i) r = mul(r, a);
  return r;
}

UElement UAlgebra::commutator(const UElement& a, const UElement& b) const { return mul(a, b) - mul(b, a); }

Weight UAlgebra::weight(const UElement& u) const {
  if (u.is_zero()) return Weight::zero(rank());
  std::optional<Weight> w;
  for (const auto& [m, c] : u.terms) {
    Weight x = c_.weight_of(degree(m.e)) - c_.weight_of(degree(m.f));
    if (w && *w != x) throw std::invalid_argument("element is not weight-homogeneous");
    w = x;
  }
  return *w;
}

// ---------------------------------------------------------------- Hopf structure

std::vector<std::pair<std::vector<int>, QScalar>> UAlgebra::coproduct_word(const Word& w, bool is_e) const {
  // each entry: membership mask (1 = letter goes to the second factor for e-words,
  // to the first factor for f-words) and the q-power from reordering k's
  std::vector<std::pair<std::vector<int>, QScalar>> out;
  const std::size_t n = w.size();
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    std::vector<int> s(n);
    for (std::size_t p = 0; p < n; ++p) s[p] = static_cast<int>((mask >> p) & 1u);
    int t = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = p + 1; r < n; ++r) {
        int fp = c_.form_t(c_.alpha(w[p]), c_.alpha(w[r]));
        if (is_e && !s[p] && s[r]) t -= fp;
        if (!is_e && s[p] && !s[r]) t += fp;
      }
    out.emplace_back(std::move(s), c_.q_pow_t(t));
  }
  return out;
}

HopfTensor UAlgebra::coproduct(const UElement& u, int arity) const {
  if (arity < 1) throw std::invalid_argument("coproduct arity must be >= 1");
  HopfTensor h;
  h.arity = 1;
  for (const auto& [m, c] : u.terms) h.add({m}, c);
  while (h.arity < arity) {
    HopfTensor next;
    next.arity = h.arity + 1;
    for (const auto& [ms, c] : h.terms) {
      const Mono& m = ms[0];
      auto fsplit = coproduct_word(m.f, false);
      auto esplit = coproduct_word(m.e, true);
      for (const auto& [fs, fc] : fsplit) {
        Word f1, f2;
        RootSum g = RootSum::zero(rank());
        for (std::size_t p = 0; p < m.f.size(); ++p) {
          if (fs[p]) {
            f1.push_back(m.f[p]);
            ++g.c[static_cast<std::size_t>(m.f[p])];
          } else {
            f2.push_back(m.f[p]);
          }
        }
        for (const auto& [es, ec] : esplit) {
          Word e1, e2;
          RootSum d = RootSum::zero(rank());
          for (std::size_t p = 0; p < m.e.size(); ++p) {
            if (es[p]) {
              e2.push_back(m.e[p]);
              ++d.c[static_cast<std::size_t>(m.e[p])];
            } else {
              e1.push_back(m.e[p]);
            }
          }
          Weight k1 = m.k + c_.weight_of(d), k2 = m.k - c_.weight_of(g);
          QScalar coef = c * fc * ec;
          for (const auto& [bf1, cf1] : reduce(f1))
            for (const auto& [be1, ce1] : reduce(e1))
              for (const auto& [bf2, cf2] : reduce(f2))
                for (const auto& [be2, ce2] : reduce(e2)) {
                  std::vector<Mono> t{Mono{bf1, k1, be1}, Mono{bf2, k2, be2}};
                  t.insert(t.end(), ms.begin() + 1, ms.end());
                  next.add(t, coef * cf1 * ce1 * cf2 * ce2);
                }
        }
      }
    }
    h = std::move(next);
  }
  return h;
}

HopfTensor UAlgebra::tensor_mul(const HopfTensor& a, const HopfTensor& b) const {
  if (a.arity != b.arity) throw std::invalid_argument("tensor arity mismatch");
  HopfTensor r;
  r.arity = a.arity;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      HopfTensor acc;
      acc.arity = a.arity;
      acc.add({}, ca * cb);
      for (int s = 0; s < a.arity; ++s) {
        UElement p = mono_mul(ma[static_cast<std::size_t>(s)], mb[static_cast<std::size_t>(s)]);
        HopfTensor next;
        next.arity = a.arity;
        for (const auto& [pre, pc] : acc.terms)
          for (const auto& [m, c] : p.terms) {
            auto t = pre;
            t.push_back(m);
            next.add(t, pc * c);
          }
        acc = std::move(next);
      }
      r += acc;
    }
  return r;
}

const UElement& UAlgebra::antipode_word(const Word& w, bool is_e, bool inverse) const {
  auto key = std::make_tuple(w, is_e, inverse);
  {
    std::lock_guard<std::mutex> lock(antipode_mu_);
    auto it = antipode_words_.find(key);
    if (it != antipode_words_.end()) return it->second;
  }
  // anti-automorphism: images of letters multiplied in reverse order
  UElement r = one();
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    int i = *it;
    UElement g;
    if (is_e)
      g = inverse ? -mul(e(i), ki(i, -1)) : -mul(ki(i, -1), e(i));
    else
      g = inverse ? -mul(ki(i), f(i)) : -mul(f(i), ki(i));
    r = mul(r, g);
  }
  std::lock_guard<std::mutex> lock(antipode_mu_);
  return antipode_words_.emplace(key, std::move(r)).first->second;
}

UElement UAlgebra::antipode(const UElement& u, bool inverse) const {
  UElement r;
  for (const auto& [m, c] : u.terms) {
    UElement t = mul(mul(antipode_word(m.e, true, inverse), k(-m.k)), antipode_word(m.f, false, inverse));
    r += c * t;
  }
  return r;
}

QScalar UAlgebra::counit(const UElement& u) const {
  QScalar s(0);
  for (const auto& [m, c] : u.terms)
    if (m.f.empty() && m.e.empty()) s += c;
  return s;
}

QScalar UAlgebra::chi(const Weight& lambda, const UElement& u, Sign side) const {
  QScalar s(0);
  for (const auto& [m, c] : u.terms) {
    const Word& outside = side == Sign::Plus ? m.f : m.e;
    if (!outside.empty())
      throw std::invalid_argument(side == Sign::Plus ? "chi^+ needs an element of U^{>=0}"
                                                     : "chi^- needs an element of U^{<=0}");
    const Word& killed = side == Sign::Plus ? m.e : m.f;
    if (killed.empty()) s += c * c_.q_form(lambda, m.k);
  }
  return s;
}

// ---------------------------------------------------------------- braid automorphisms

UElement UAlgebra::braid_generator(int i, int j, bool is_e, bool inverse) const {
  {
    std::lock_guard<std::mutex> lock(braid_mu_);
    auto it = braid_gens_.find({i, j, is_e, inverse});
    if (it != braid_gens_.end()) return it->second;
  }
  UElement r;
  if (j == i) {
    if (!inverse)
      r = is_e ? -mul(f(i), ki(i)) : -mul(ki(i, -1), e(i));
    else
      r = is_e ? -mul(ki(i, -1), f(i)) : -mul(e(i), ki(i));
  } else if (!inverse) {
    int m = -c_.a(i, j);
    for (int kk = 0; kk <= m; ++kk) {
      QScalar sgn(kk % 2 ? -1 : 1);
      if (is_e)
        r += (sgn * c_.qi(i, -kk)) * mul({e_divided(i, m - kk), e(j), e_divided(i, kk)});
      else
        r += (sgn * c_.qi(i, kk)) * mul({f_divided(i, kk), f(j), f_divided(i, m - kk)});
    }
  } else {
    // solve T_i(x) = generator over the homogeneous piece of degree s_i(alpha_j)
    RootSum deg = RootSum::simple(rank(), j) + (-c_.a(i, j)) * RootSum::simple(rank(), i);
    const GradedBasis& gb = basis(deg);
    std::vector<UElement> images;
    std::map<Mono, std::size_t> rows;
    for (const auto& w : gb.words) {
      images.push_back(braid(i, is_e ? E(w) : F(w), false));
      for (const auto& [m, c] : images.back().terms) rows.emplace(m, rows.size());
    }
    UElement target = is_e ? e(j) : f(j);
    for (const auto& [m, c] : target.terms) rows.emplace(m, rows.size());
    QMatrix a(rows.size(), images.size());
    QVector b(rows.size());
    for (std::size_t col = 0; col < images.size(); ++col)
      for (const auto& [m, c] : images[col].terms) a(rows.at(m), col) = c;
    for (const auto& [m, c] : target.terms) b[rows.at(m)] = c;
    auto x = solve(a, b);
    if (!x) throw std::logic_error("inverse braid image not found in the expected degree");
    for (std::size_t col = 0; col < images.size(); ++col)
      if (!(*x)[col].is_zero()) r += (*x)[col] * (is_e ? E(gb.words[col]) : F(gb.words[col]));
  }
  std::lock_guard<std::mutex> lock(braid_mu_);
  braid_gens_.emplace(std::make_tuple(i, j, is_e, inverse), r);
  return r;
}

const UElement& UAlgebra::braid_word_image(int i, const Word& w, bool is_e, bool inverse) const {
  auto key = std::make_tuple(i, w, is_e, inverse);
  {
    std::lock_guard<std::mutex> lock(braid_mu_);
    auto it = braid_words_.find(key);
    if (it != braid_words_.end()) return it->second;
  }
  UElement r = one();
  for (int j : w) r = mul(r, braid_generator(i, j, is_e, inverse));
  std::lock_guard<std::mutex> lock(braid_mu_);
  return braid_words_.emplace(key, std::move(r)).first->second;
}

UElement UAlgebra::braid(int i, const UElement& u, bool inverse) const {
  if (i < 0 || i >= rank()) throw std::invalid_argument("braid index out of range");
  UElement r;
  for (const auto& [m, c] : u.terms) {
    UElement t = mul(mul(braid_word_image(i, m.f, false, inverse), k(c_.reflect(i, m.k))),
                     braid_word_image(i, m.e, true, inverse));
    r += c * t;
  }
  return r;
}

UElement UAlgebra::braid_word(const WeylWord& w, const UElement& u, bool inverse) const {
  UElement r = u;
  if (!inverse) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) r = braid(*it, r, false);
  } else {
    for (int i : w) r = braid(i, r, true);
  }
  return r;
}

// ---------------------------------------------------------------- text

std::string UAlgebra::str(const Mono& m) const {
  std::vector<std::string> parts;
  for (int i : m.f) parts.push_back("f[" + std::to_string(i + 1) + "]");
  if (!m.k.is_zero()) {
    std::string s = "k[";
    for (int i = 0; i < rank(); ++i) s += (i ? "," : "") + std::to_string(m.k[i]);
    parts.push_back(s + "]");
  }
  for (int i : m.e) parts.push_back("e[" + std::to_string(i + 1) + "]");
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "*" : "") + parts[k];
  return s.empty() ? "1" : s;
}

std::string UAlgebra::str(const UElement& u) const {
  if (u.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : u.terms) {
    std::string mono = str(m);
    std::string coef = c.str();
    bool simple_neg = !coef.empty() && coef[0] == '-' && c.is_laurent() && c.num().c.size() == 1;
    std::string body;
    if (simple_neg) coef = coef.substr(1);
    bool plain = c.is_laurent() && c.num().c.size() == 1;
    if (mono == "1")
      body = plain ? coef : "(" + coef + ")";
    else if (coef == "1")
      body = mono;
    else
      body = (plain ? coef : "(" + coef + ")") + "*" + mono;
    if (first)
      out += (simple_neg ? "-" : "") + body;
    else
      out += (simple_neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

namespace {

class UParser {
 public:
  UParser(const UAlgebra& u, const std::string& s) : u_(u), s_(s) {}

  UElement run() {
    UElement v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("element parse error at " + std::to_string(pos_) + ": " + why + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  long long integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    long long v = std::stoll(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  std::optional<QScalar> as_scalar(const UElement& x) {
    if (x.is_zero()) return QScalar(0);
    if (x.terms.size() != 1) return std::nullopt;
    const auto& [m, c] = *x.terms.begin();
    if (!m.f.empty() || !m.e.empty() || !m.k.is_zero()) return std::nullopt;
    return c;
  }

  UElement expr() {
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    UElement v = term();
    if (neg) v = -v;
    while (true) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else break;
    }
    return v;
  }

  UElement term() {
    UElement v = power();
    while (true) {
      if (eat('*')) {
        v = u_.mul(v, power());
      } else if (eat('/')) {
        auto d = as_scalar(power());
        if (!d) fail("division by a non-scalar");
        if (d->is_zero()) throw ArithmeticError("division by zero");
        v *= d->inverse();
      } else {
        char c = peek();
        if (c == '(' || c == 'e' || c == 'f' || c == 'k' || c == 'q') v = u_.mul(v, power());
        else break;
      }
    }
    return v;
  }

  UElement power() {
    char c = peek();
    if (c == 'q') {
      // delegate q-powers to the scalar grammar
      std::size_t start = pos_++;
      if (eat('^')) {
        if (eat('(')) {
          while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
          if (!eat(')')) fail("expected ')'");
        } else {
          integer();
        }
      }
      return u_.scalar(QScalar::parse(s_.substr(start, pos_ - start), u_.cartan().l0()));
    }
    UElement base = primary();
    if (eat('^')) {
      long long n;
      if (eat('(')) {
        n = integer();
        if (!eat(')')) fail("expected ')'");
      } else {
        n = integer();
      }
      if (n < 0) {
        if (auto sc = as_scalar(base)) return u_.scalar(pow_scalar(sc->inverse(), -n));
        if (base.terms.size() == 1 && base.terms.begin()->first.f.empty() && base.terms.begin()->first.e.empty()) {
          const auto& [m, cc] = *base.terms.begin();
          return pow_scalar(cc.inverse(), -n) * u_.k(static_cast<int>(n) * m.k);
        }
        fail("negative power of a non-invertible element");
      }
      return u_.pow(base, static_cast<int>(n));
    }
    return base;
  }

  QScalar pow_scalar(const QScalar& s, long long n) {
    QScalar r(1);
    for (long long i = 0; i < n; ++i) r *= s;
    return r;
  }

  UElement primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      UElement v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == 'e' || c == 'f') {
      ++pos_;
      if (!eat('[')) fail("expected '['");
      long long i = integer();
      if (!eat(']')) fail("expected ']'");
      if (i < 1 || i > u_.rank()) fail("generator index out of range");
      return c == 'e' ? u_.e(static_cast<int>(i - 1)) : u_.f(static_cast<int>(i - 1));
    }
    if (c == 'k') {
      ++pos_;
      if (!eat('[')) fail("expected '['");
      std::vector<int> w;
      do w.push_back(static_cast<int>(integer()));
      while (eat(','));
      if (!eat(']')) fail("expected ']'");
      if (static_cast<int>(w.size()) != u_.rank()) fail("weight has wrong rank");
      return u_.k(Weight(w));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return u_.scalar(QScalar::rational(BigInt(s_.substr(start, pos_ - start)), 1));
    }
    fail("expected operand");
  }

  const UAlgebra& u_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

UElement UAlgebra::parse(const std::string& text) const { return UParser(*this, text).run(); }

}  // namespace qflag
