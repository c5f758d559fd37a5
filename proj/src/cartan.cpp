#include "qflag/cartan.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qflag {

namespace {

std::vector<int> parse_int_list(const std::string& s, char open, char close) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (!t.empty() && t.front() == open) {
    if (t.back() != close) throw ParseError("unbalanced brackets in '" + s + "'");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<int> out;
  if (t.empty()) throw ParseError("empty coordinate list");
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + item + "' in '" + s + "'");
    }
    if (used != item.size()) throw ParseError("bad integer '" + item + "' in '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::string join(const std::vector<int>& v, char open, char close) {
  std::string s(1, open);
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + close;
}

std::vector<std::vector<Rational>> rational_inverse(const std::vector<std::vector<int>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && m[p][col] == Rational(0)) ++p;
    if (p == n) throw std::invalid_argument("singular Cartan matrix");
    std::swap(m[p], m[col]);
    Rational inv = Rational(1) / m[col][col];
    for (auto& x : m[col]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m[i][col] == Rational(0)) continue;
      Rational f = m[i][col];
      for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] -= f * m[col][j];
    }
  }
  std::vector<std::vector<Rational>> r(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = m[i][n + j];
  return r;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && m[p][col] == Rational(0)) ++p;
    if (p == n) return 0;
    if (p != col) {
      std::swap(m[p], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      Rational f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
    }
  }
  return det;
}

}  // namespace

// ---------------------------------------------------------------- Weight

bool Weight::dominant() const {
  return std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
}

bool Weight::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

Weight& Weight::operator+=(const Weight& o) {
  if (o.c.size() != c.size()) throw std::invalid_argument("weight rank mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

Weight& Weight::operator-=(const Weight& o) {
  if (o.c.size() != c.size()) throw std::invalid_argument("weight rank mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

std::string Weight::str() const { return join(c, '[', ']'); }
Weight Weight::parse(const std::string& s) { return Weight(parse_int_list(s, '[', ']')); }

// ---------------------------------------------------------------- RootSum

RootSum RootSum::simple(int rank, int i) {
  RootSum r = zero(rank);
  r.c[static_cast<std::size_t>(i)] = 1;
  return r;
}

int RootSum::height() const { return std::accumulate(c.begin(), c.end(), 0); }

bool RootSum::nonneg() const {
  return std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
}

bool RootSum::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

bool RootSum::le(const RootSum& o) const {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] > o.c[i]) return false;
  return true;
}

RootSum& RootSum::operator+=(const RootSum& o) {
  if (o.c.size() != c.size()) throw std::invalid_argument("root rank mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

RootSum& RootSum::operator-=(const RootSum& o) {
  if (o.c.size() != c.size()) throw std::invalid_argument("root rank mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

std::string RootSum::str() const { return join(c, '<', '>'); }

RootSum RootSum::parse(const std::string& s) {
  RootSum r(parse_int_list(s, '<', '>'));
  if (!r.nonneg()) throw ParseError("root sum must have nonnegative coordinates: '" + s + "'");
  return r;
}

std::vector<RootSum> root_box(const RootSum& box) {
  std::vector<RootSum> out;
  RootSum cur = RootSum::zero(box.rank());
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < cur.c.size() && cur.c[i] == box.c[i]) cur.c[i++] = 0;
    if (i == cur.c.size()) break;
    ++cur.c[i];
  }
  std::stable_sort(out.begin(), out.end(), [](const RootSum& a, const RootSum& b) {
    if (a.height() != b.height()) return a.height() < b.height();
    return a.c < b.c;
  });
  return out;
}

std::string word_str(const WeylWord& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "*s" : "s") + std::to_string(w[k] + 1);
  return s;
}

// ---------------------------------------------------------------- characters

void CharacterPoly::add(const Weight& w, long long k) {
  if (k == 0) return;
  auto& v = terms[w];
  v += k;
  if (v == 0) terms.erase(w);
}

long long CharacterPoly::coeff(const Weight& w) const {
  auto it = terms.find(w);
  return it == terms.end() ? 0 : it->second;
}

long long CharacterPoly::dimension() const {
  long long s = 0;
  for (const auto& [w, k] : terms) s += k;
  return s;
}

CharacterPoly CharacterPoly::operator+(const CharacterPoly& o) const {
  CharacterPoly r = *this;
  for (const auto& [w, k] : o.terms) r.add(w, k);
  return r;
}

CharacterPoly CharacterPoly::operator*(const CharacterPoly& o) const {
  CharacterPoly r;
  for (const auto& [w1, k1] : terms)
    for (const auto& [w2, k2] : o.terms) r.add(w1 + w2, k1 * k2);
  return r;
}

std::string CharacterPoly::str() const {
  if (terms.empty()) return "0";
  std::string s;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (!s.empty()) s += " + ";
    if (it->second != 1) s += std::to_string(it->second) + "*";
    s += "e" + it->first.str();
  }
  return s;
}

// ---------------------------------------------------------------- CartanDatum

CartanDatum CartanDatum::preset(const std::string& name) {
  if (name == "A1") return from_matrix({{2}}, name);
  if (name == "A2") return from_matrix({{2, -1}, {-1, 2}}, name);
  if (name == "B2") return from_matrix({{2, -1}, {-2, 2}}, name);
  if (name == "C2") return from_matrix({{2, -2}, {-1, 2}}, name);
  if (name == "G2") return from_matrix({{2, -1}, {-3, 2}}, name);
  throw std::invalid_argument("unknown Cartan type '" + name + "' (expected A1, A2, B2, C2, G2)");
}

CartanDatum CartanDatum::from_matrix(const std::vector<std::vector<int>>& a, std::string name) {
  CartanDatum c;
  c.name_ = std::move(name);
  c.n_ = static_cast<int>(a.size());
  if (c.n_ == 0 || c.n_ > 4) throw std::invalid_argument("Cartan matrix rank must be 1..4");
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != c.n_) throw std::invalid_argument("Cartan matrix must be square");
  c.a_ = a;
  c.build();
  return c;
}

void CartanDatum::build() {
  const int n = n_;
  for (int i = 0; i < n; ++i) {
    if (a(i, i) != 2) throw std::invalid_argument("Cartan matrix needs a_ii = 2");
    for (int j = 0; j < n; ++j)
      if (i != j && (a(i, j) > 0 || ((a(i, j) == 0) != (a(j, i) == 0))))
        throw std::invalid_argument("Cartan matrix off-diagonal entries invalid");
  }
  // minimal symmetrizer: propagate ratios d_j / d_i = a_ij / a_ji
  std::vector<Rational> d(static_cast<std::size_t>(n), Rational(0));
  for (int start = 0; start < n; ++start) {
    if (d[static_cast<std::size_t>(start)] != Rational(0)) continue;
    d[static_cast<std::size_t>(start)] = 1;
    std::deque<int> todo{start};
    while (!todo.empty()) {
      int i = todo.front();
      todo.pop_front();
      for (int j = 0; j < n; ++j) {
        if (i == j || a(i, j) == 0) continue;
        Rational dj = d[static_cast<std::size_t>(i)] * Rational(a(i, j), a(j, i));
        if (d[static_cast<std::size_t>(j)] == Rational(0)) {
          d[static_cast<std::size_t>(j)] = dj;
          todo.push_back(j);
        } else if (d[static_cast<std::size_t>(j)] != dj) {
          throw std::invalid_argument("Cartan matrix is not symmetrizable");
        }
      }
    }
  }
  long long den = 1;
  for (auto& x : d) den = std::lcm(den, x.denominator());
  long long g = 0;
  for (auto& x : d) g = std::gcd(g, (x * den).numerator());
  d_.clear();
  for (auto& x : d) d_.push_back(static_cast<int>((x * den).numerator() / g));
  // positive definiteness of the symmetrized matrix
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<Rational>> m(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d_[static_cast<std::size_t>(i)] * a(i, j);
    if (determinant(m) <= Rational(0)) throw std::invalid_argument("Cartan matrix is not of finite type");
  }
  inv_a_ = rational_inverse(a_);
  // (varpi_i, varpi_k) = (A^T)^{-1}_{ik} d_k = (A^{-1})_{ki} d_k
  gram_.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  long long l0 = 1;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Rational v = inv_a_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * d_[static_cast<std::size_t>(k)];
      gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = v;
      l0 = std::lcm(l0, v.denominator());
    }
  l0_ = static_cast<int>(l0);

  // Weyl group by breadth-first search on the orbit of rho
  group_.clear();
  by_rho_.clear();
  Weight r = rho();
  group_.push_back({});
  by_rho_[r] = 0;
  std::vector<std::size_t> level{0};
  while (!level.empty()) {
    std::map<Weight, WeylWord> next;
    for (std::size_t idx : level) {
      Weight wr = act(group_[idx], r);
      for (int i = 0; i < n; ++i) {
        Weight nr = reflect(i, wr);
        if (by_rho_.count(nr)) continue;
        WeylWord cand{i};
        cand.insert(cand.end(), group_[idx].begin(), group_[idx].end());
        auto it = next.find(nr);
        if (it == next.end() || cand < it->second) next[nr] = cand;
      }
    }
    std::vector<std::pair<WeylWord, Weight>> fresh;
    for (auto& [w, word] : next) fresh.emplace_back(word, w);
    std::sort(fresh.begin(), fresh.end());
    level.clear();
    for (auto& [word, w] : fresh) {
      by_rho_[w] = group_.size();
      level.push_back(group_.size());
      group_.push_back(word);
    }
  }

  // positive roots from the W-orbits of simple roots
  std::map<RootSum, bool> seen;
  std::deque<RootSum> todo;
  for (int i = 0; i < n; ++i) {
    todo.push_back(RootSum::simple(n, i));
    seen[todo.back()] = true;
  }
  while (!todo.empty()) {
    RootSum b = todo.front();
    todo.pop_front();
    for (int i = 0; i < n; ++i) {
      RootSum s = reflect(i, b);
      if (!seen.count(s)) {
        seen[s] = true;
        todo.push_back(s);
      }
    }
  }
  pos_roots_.clear();
  for (auto& [b, _] : seen)
    if (b.nonneg()) pos_roots_.push_back(b);
  std::sort(pos_roots_.begin(), pos_roots_.end(), [](const RootSum& x, const RootSum& y) {
    if (x.height() != y.height()) return x.height() < y.height();
    return x.c < y.c;
  });
  if (group_.back().size() != pos_roots_.size())
    throw std::logic_error("longest element length differs from number of positive roots");
}

Weight CartanDatum::fundamental(int i) const {
  Weight w = Weight::zero(n_);
  w.c[static_cast<std::size_t>(i)] = 1;
  return w;
}

Weight CartanDatum::rho() const { return Weight(std::vector<int>(static_cast<std::size_t>(n_), 1)); }

Weight CartanDatum::alpha(int j) const {
  Weight w = Weight::zero(n_);
  for (int i = 0; i < n_; ++i) w.c[static_cast<std::size_t>(i)] = a(i, j);
  return w;
}

Weight CartanDatum::weight_of(const RootSum& b) const {
  Weight w = Weight::zero(n_);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) w.c[static_cast<std::size_t>(i)] += a(i, j) * b[j];
  return w;
}

std::vector<Rational> CartanDatum::root_coords(const Weight& w) const {
  std::vector<Rational> x(static_cast<std::size_t>(n_), Rational(0));
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(j)] += inv_a_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * w[i];
  return x;
}

bool CartanDatum::in_root_lattice(const Weight& w) const {
  for (auto& x : root_coords(w))
    if (x.denominator() != 1) return false;
  return true;
}

RootSum CartanDatum::to_root_sum(const Weight& w) const {
  RootSum r = RootSum::zero(n_);
  auto x = root_coords(w);
  for (int j = 0; j < n_; ++j) {
    if (x[static_cast<std::size_t>(j)].denominator() != 1)
      throw std::invalid_argument("weight " + w.str() + " is not in the root lattice");
    r.c[static_cast<std::size_t>(j)] = static_cast<int>(x[static_cast<std::size_t>(j)].numerator());
  }
  return r;
}

Rational CartanDatum::form(const Weight& x, const Weight& y) const {
  if (x.rank() != n_ || y.rank() != n_) throw std::invalid_argument("bilinear form: rank mismatch");
  Rational s = 0;
  for (int i = 0; i < n_; ++i) {
    if (x[i] == 0) continue;
    for (int k = 0; k < n_; ++k)
      if (y[k] != 0) s += gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * (x[i] * y[k]);
  }
  return s;
}

Rational CartanDatum::form(const RootSum& x, const RootSum& y) const {
  if (x.rank() != n_ || y.rank() != n_) throw std::invalid_argument("bilinear form: rank mismatch");
  long long s = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += static_cast<long long>(d(i)) * a(i, j) * x[i] * y[j];
  return s;
}

Rational CartanDatum::form(const Weight& x, const RootSum& y) const {
  // (varpi_i, alpha_j) = d_j delta_ij
  if (x.rank() != n_ || y.rank() != n_) throw std::invalid_argument("bilinear form: rank mismatch");
  long long s = 0;
  for (int i = 0; i < n_; ++i) s += static_cast<long long>(x[i]) * d(i) * y[i];
  return s;
}

int CartanDatum::form_t(const Weight& x, const Weight& y) const {
  Rational v = form(x, y) * l0_;
  if (v.denominator() != 1) throw std::logic_error("l0 does not clear the bilinear form");
  return static_cast<int>(v.numerator());
}

QScalar CartanDatum::q_form(const Weight& x, const Weight& y) const { return q_pow_t(form_t(x, y)); }

Weight CartanDatum::reflect(int i, const Weight& w) const {
  Weight r = w;
  int k = w[i];
  for (int j = 0; j < n_; ++j) r.c[static_cast<std::size_t>(j)] -= k * a(j, i);
  return r;
}

RootSum CartanDatum::reflect(int i, const RootSum& b) const {
  int pair = 0;
  for (int j = 0; j < n_; ++j) pair += b[j] * a(i, j);
  RootSum r = b;
  r.c[static_cast<std::size_t>(i)] -= pair;
  return r;
}

Weight CartanDatum::act(const WeylWord& w, const Weight& x, bool shifted) const {
  Weight r = shifted ? x + rho() : x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (*it < 0 || *it >= n_) throw std::invalid_argument("Weyl word letter out of range");
    r = reflect(*it, r);
  }
  return shifted ? r - rho() : r;
}

WeylWord CartanDatum::reduce(const WeylWord& w) const {
  auto it = by_rho_.find(act(w, rho()));
  if (it == by_rho_.end()) throw std::logic_error("Weyl group element not enumerated");
  return group_[it->second];
}

WeylWord CartanDatum::inverse(const WeylWord& w) const { return reduce(WeylWord(w.rbegin(), w.rend())); }

WeylWord CartanDatum::multiply(const WeylWord& x, const WeylWord& y) const {
  WeylWord w = x;
  w.insert(w.end(), y.begin(), y.end());
  return reduce(w);
}

long long CartanDatum::kostant(const RootSum& g) const {
  if (!g.nonneg()) return 0;
  // brute force over multisets of positive roots
  std::function<long long(const RootSum&, std::size_t)> count = [&](const RootSum& rest, std::size_t k) -> long long {
    if (rest.is_zero()) return 1;
    if (k == pos_roots_.size()) return 0;
    long long total = 0;
    RootSum r = rest;
    while (r.nonneg()) {
      total += count(r, k + 1);
      r -= pos_roots_[k];
    }
    return total;
  };
  return count(g, 0);
}

CharacterPoly CartanDatum::weyl_character(const Weight& lambda) const {
  if (!lambda.dominant()) throw std::invalid_argument("weyl_character needs a dominant weight, got " + lambda.str());
  CharacterPoly p;
  for (const auto& w : group_) p.add(act(w, lambda, true), sign(w));
  // order refining dominance: (mu, rho) then lexicographic
  auto key = [&](const Weight& m) { return std::make_pair(form(m, rho()), m); };
  for (const auto& root : pos_roots_) {
    Weight a = weight_of(root);
    CharacterPoly quotient;
    CharacterPoly rem = p;
    Rational floor_val = form(a, rho()) * 0;
    if (!rem.terms.empty()) {
      floor_val = form(rem.terms.begin()->first, rho());
      for (auto& [m, k] : rem.terms) floor_val = std::min(floor_val, form(m, rho()));
    }
    while (!rem.terms.empty()) {
      auto top = std::max_element(rem.terms.begin(), rem.terms.end(),
                                  [&](const auto& x, const auto& y) { return key(x.first) < key(y.first); });
      Weight m = top->first;
      long long k = top->second;
      if (form(m, rho()) < floor_val)
        throw std::logic_error("Weyl character division left a nonzero remainder");
      quotient.add(m, k);
      rem.add(m, -k);
      rem.add(m - a, k);
    }
    p = quotient;
  }
  return p;
}

CharacterPoly CartanDatum::verma_character(const Weight& lambda, const RootSum& depth) const {
  CharacterPoly p;
  for (const auto& g : root_box(depth)) p.add(lambda - weight_of(g), kostant(g));
  return p;
}

bool CartanDatum::linked(const Weight& x, const Weight& y) const {
  Weight target = x + rho();
  for (const auto& w : group_)
    if (act(w, y + rho()) == target) return true;
  return false;
}

std::string CartanDatum::describe() const {
  std::string s = name_ + " [";
  for (int i = 0; i < n_; ++i) {
    s += (i ? "," : "") + std::string("[");
    for (int j = 0; j < n_; ++j) s += (j ? "," : "") + std::to_string(a(i, j));
    s += "]";
  }
  return s + "]";
}

}  // namespace qflag
