#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qflag/cartan.hpp"

#include <algorithm>
#include <array>
#include <set>

using namespace qflag;

namespace {

// Gram matrix of fundamental weights from the symmetrized Cartan matrix B = DA:
// (varpi_i, varpi_k) = d_i d_k (B^{-1})_{ik}, via 2x2 adjugate.
Rational gram2(const std::array<std::array<int, 2>, 2>& b, std::array<int, 2> d, int i, int k) {
  long long det = static_cast<long long>(b[0][0]) * b[1][1] - static_cast<long long>(b[0][1]) * b[1][0];
  long long adj[2][2] = {{b[1][1], -b[0][1]}, {-b[1][0], b[0][0]}};
  return Rational(adj[i][k], det) * d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(k)];
}

// number of ways to write g as a multiset of vectors from `roots` (coin change table)
long long partition_oracle(const std::vector<std::vector<int>>& roots, std::vector<int> g) {
  std::map<std::vector<int>, long long> table{{std::vector<int>(g.size(), 0), 1}};
  for (const auto& r : roots) {
    std::map<std::vector<int>, long long> next = table;
    // unbounded knapsack: iterate targets in increasing order
    std::vector<std::vector<int>> targets;
    std::vector<int> cur(g.size(), 0);
    std::function<void(std::size_t)> gen = [&](std::size_t k) {
      if (k == g.size()) {
        targets.push_back(cur);
        return;
      }
      for (int v = 0; v <= g[k]; ++v) {
        cur[k] = v;
        gen(k + 1);
      }
    };
    gen(0);
    std::sort(targets.begin(), targets.end(), [](auto& x, auto& y) {
      int sx = 0, sy = 0;
      for (int v : x) sx += v;
      for (int v : y) sy += v;
      return sx < sy;
    });
    for (auto& t : targets) {
      std::vector<int> prev = t;
      bool ok = true;
      for (std::size_t k = 0; k < t.size(); ++k) ok = ok && (prev[k] -= r[k]) >= 0;
      if (ok) next[t] += next[prev];
    }
    table = next;
  }
  return table[g];
}

}  // namespace

TEST_CASE("bilinear form normalization") {
  auto a1 = CartanDatum::preset("A1");
  CHECK(a1.form(RootSum::simple(1, 0), RootSum::simple(1, 0)) == Rational(2));
  CHECK(a1.form(a1.fundamental(0), a1.fundamental(0)) == Rational(1, 2));
  CHECK(a1.l0() == 2);
  auto a2 = CartanDatum::preset("A2");
  CHECK(a2.form(a2.fundamental(0), a2.fundamental(1)) == gram2({{{2, -1}, {-1, 2}}}, {1, 1}, 0, 1));
  CHECK(a2.form(a2.fundamental(0), a2.fundamental(1)) == Rational(1, 3));
  CHECK(a2.l0() == 3);
  auto b2 = CartanDatum::preset("B2");
  CHECK(b2.d(0) == 2);
  CHECK(b2.d(1) == 1);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      CHECK(b2.form(b2.fundamental(i), b2.fundamental(k)) == gram2({{{4, -2}, {-2, 2}}}, {2, 1}, i, k));
  auto g2 = CartanDatum::preset("G2");
  CHECK(g2.positive_roots().size() == 6);
  CHECK(g2.weyl_group().size() == 12);
  for (const auto& name : {"A1", "A2", "B2", "G2"}) {
    auto c = CartanDatum::preset(name);
    for (int i = 0; i < c.rank(); ++i)
      CHECK(c.form(c.alpha(i), c.alpha(i)) == Rational(2 * c.d(i)));
    // the weight-root pairing agrees with the weight-weight form
    for (const auto& r : c.positive_roots())
      for (int i = 0; i < c.rank(); ++i) CHECK(c.form(c.fundamental(i), r) == c.form(c.fundamental(i), c.weight_of(r)));
  }
}

TEST_CASE("invalid Cartan matrices are rejected") {
  CHECK_THROWS(CartanDatum::from_matrix({{2, -1}, {0, 2}}));
  CHECK_THROWS(CartanDatum::from_matrix({{2, -2}, {-2, 2}}));
  CHECK_THROWS(CartanDatum::preset("E8"));
}

TEST_CASE("Weyl group actions") {
  auto a1 = CartanDatum::preset("A1");
  CHECK(a1.act({}, Weight({3})) == Weight({3}));
  CHECK(a1.act({0}, Weight({0}), true) == Weight({-2}));
  auto a2 = CartanDatum::preset("A2");
  // oracle: S3 permuting epsilon coordinates; varpi_1 = e1, varpi_2 = e1 + e2
  // w0 reverses, so e1 -> e3 = -(e1 + e2) = -varpi_2
  CHECK(a2.act(a2.longest(), a2.fundamental(0)) == -a2.fundamental(1));
  CHECK(a2.weyl_group().size() == 6);
  CHECK(a2.reduce({0, 1, 0}) == a2.reduce({1, 0, 1}));
  CHECK(a2.reduce({0, 0}).empty());
  CHECK(a2.length(a2.longest()) == 3);
  for (const auto& name : {"A2", "B2", "G2"}) {
    auto c = CartanDatum::preset(name);
    std::vector<Weight> samples = {c.rho(), c.fundamental(0), Weight({2, -1}), Weight({-3, 1})};
    for (const auto& w : c.weyl_group()) {
      // length equals the number of positive roots sent negative
      int neg = 0;
      for (const auto& r : c.positive_roots()) {
        RootSum x = r;
        for (auto it = w.rbegin(); it != w.rend(); ++it) x = c.reflect(*it, x);
        neg += !x.nonneg();
      }
      CHECK(neg == c.length(w));
      for (const auto& x : samples)
        for (const auto& y : samples) CHECK(c.form(c.act(w, x), c.act(w, y)) == c.form(x, y));
    }
  }
}

TEST_CASE("Kostant partition counts") {
  auto a2 = CartanDatum::preset("A2");
  CHECK(a2.kostant(RootSum({0, 0})) == 1);
  CHECK(a2.kostant(RootSum({1, 1})) == 2);
  CHECK(a2.kostant(RootSum({2, 1})) == 2);
  for (const auto& name : {"A2", "B2", "G2"}) {
    auto c = CartanDatum::preset(name);
    std::vector<std::vector<int>> roots;
    for (const auto& r : c.positive_roots()) roots.push_back(r.c);
    for (const auto& g : root_box(RootSum({3, 3}))) CHECK(c.kostant(g) == partition_oracle(roots, g.c));
  }
}

TEST_CASE("characters") {
  auto a1 = CartanDatum::preset("A1");
  CHECK(a1.weyl_character(Weight({0})).terms.size() == 1);
  CharacterPoly c2 = a1.weyl_character(Weight({2}));
  CHECK(c2.terms == std::map<Weight, long long>{{Weight({2}), 1}, {Weight({0}), 1}, {Weight({-2}), 1}});
  for (int n = 0; n < 7; ++n) {
    auto ch = a1.weyl_character(Weight({n}));
    CHECK(ch.terms.size() == static_cast<std::size_t>(n + 1));
    for (auto& [w, k] : ch.terms) CHECK(k == 1);
  }
  auto a2 = CartanDatum::preset("A2");
  CHECK(a2.weyl_character(a2.fundamental(0)).terms ==
        std::map<Weight, long long>{{Weight({1, 0}), 1}, {Weight({-1, 1}), 1}, {Weight({0, -1}), 1}});
  CHECK_THROWS(a2.weyl_character(Weight({-1, 0})));
  for (const auto& name : {"A2", "B2", "G2"}) {
    auto c = CartanDatum::preset(name);
    for (const auto& lam : {Weight({1, 0}), Weight({0, 1}), Weight({1, 1}), Weight({2, 1})}) {
      auto ch = c.weyl_character(lam);
      // Weyl dimension formula oracle
      Rational dim = 1;
      for (const auto& r : c.positive_roots())
        dim *= c.form(lam + c.rho(), r) / c.form(c.rho(), r);
      CHECK(Rational(ch.dimension()) == dim);
      for (const auto& w : c.weyl_group())
        for (auto& [m, k] : ch.terms) CHECK(ch.coeff(c.act(w, m)) == k);
    }
  }
  auto v = a1.verma_character(Weight({5}), RootSum({3}));
  CHECK(v.terms.size() == 4);
  for (auto& [w, k] : v.terms) CHECK(k == 1);
  CHECK(a2.verma_character(Weight({0, 0}), RootSum({1, 1})).coeff(Weight({-1, -1})) == 2);
  CHECK(a2.verma_character(Weight({2, 3}), RootSum({0, 0})).terms.size() == 1);
}

TEST_CASE("text forms") {
  CHECK(Weight::parse("[1,-2]") == Weight({1, -2}));
  CHECK(Weight({1, -2}).str() == "[1,-2]");
  CHECK(RootSum::parse("<2,1>").str() == "<2,1>");
  CHECK_THROWS_AS(RootSum::parse("<-1,0>"), ParseError);
  CHECK_THROWS_AS(Weight::parse("[a]"), ParseError);
}

TEST_CASE("linkage") {
  auto a1 = CartanDatum::preset("A1");
  CHECK(a1.linked(Weight({-2}), Weight({0})));
  CHECK(!a1.linked(Weight({2}), Weight({0})));
}
