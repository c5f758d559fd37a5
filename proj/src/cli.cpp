#include "qflag/cli.hpp"

#include "qflag/dmod.hpp"
#include "qflag/emod.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace qflag::cli {

using nlohmann::json;

namespace {

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string type = "A1";
  std::string cartan_matrix;
  std::string cutoff, depth, degree, weight, weight2, kind = "simple";
  std::string suite;
  std::uint64_t seed = 1;
  int max = -1;
  bool json_out = false;
  bool inject_fault = false;
};

struct Instance {
  std::string key;
  bool pass = true;
  std::size_t checked = 0;
  json detail = json::object();
  std::optional<json> counterexample;
};

json scalar(const QScalar& s) { return s.str(); }

json vector_json(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar(x));
  return a;
}

json matrix_json(const QMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

json counterexample_json(const Counterexample& c) {
  return {{"relation", c.relation}, {"lhs_operator", c.lhs_expr}, {"rhs_operator", c.rhs_expr},
          {"input", c.input},       {"lhs", c.lhs},               {"rhs", c.rhs}};
}

Instance from_report(std::string key, const DReport& r) {
  Instance in{std::move(key), r.ok, r.checked, json::object(), std::nullopt};
  if (!r.failures.empty()) {
    in.counterexample = counterexample_json(r.failures.front());
    in.detail["failures"] = r.failures.size();
  }
  return in;
}

std::vector<std::vector<int>> parse_matrix(const std::string& text) {
  std::vector<std::vector<int>> rows(1);
  std::string num;
  auto flush = [&] {
    if (num.empty()) return;
    try {
      std::size_t used = 0;
      int v = std::stoi(num, &used);
      if (used != num.size()) throw InvalidInput("bad matrix entry '" + num + "'");
      rows.back().push_back(v);
    } catch (const std::logic_error&) {
      throw InvalidInput("bad matrix entry '" + num + "'");
    }
    num.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ') flush();
    else if (ch == ';') {
      flush();
      rows.emplace_back();
    } else
      num += ch;
  }
  flush();
  return rows;
}

CartanDatum cartan_of(const RunConfig& cfg) {
  try {
    if (!cfg.cartan_matrix.empty()) return CartanDatum::from_matrix(parse_matrix(cfg.cartan_matrix), "custom");
    return CartanDatum::preset(cfg.type);
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidInput(e.what());
  }
}

bool caps_overridden() { return std::getenv("QFLAG_MAX_HEIGHT") != nullptr; }

Weight parse_weight(const std::string& text, const CartanDatum& c, const char* what) {
  Weight w;
  try {
    w = Weight::parse(text);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
  if (w.rank() != c.rank()) throw InvalidInput(std::string(what) + " has the wrong rank");
  return w;
}

RootSum parse_root_sum(const std::string& text, const CartanDatum& c, const char* what) {
  RootSum r;
  try {
    r = RootSum::parse(text);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
  if (r.rank() != c.rank() || !r.nonneg()) throw InvalidInput(std::string(what) + " must be in Q^+ of the right rank");
  return r;
}

Weight cutoff_of(const RunConfig& cfg, const CartanDatum& c) {
  Weight w = Weight::zero(c.rank());
  if (cfg.cutoff.empty()) {
    w.c[0] = c.rank() == 1 ? 2 : 1;
    return w;
  }
  w = parse_weight(cfg.cutoff, c, "--cutoff");
  if (!w.dominant()) throw InvalidInput("--cutoff must be dominant");
  int sum = 0;
  for (int x : w.c) sum += x;
  if (sum > 4 && !caps_overridden()) throw InvalidInput("--cutoff exceeds the hard cap (coordinate sum 4)");
  return w;
}

RootSum depth_of(const RunConfig& cfg, const CartanDatum& c, int fallback, int cap) {
  RootSum d = RootSum::zero(c.rank());
  if (cfg.depth.empty()) {
    for (auto& x : d.c) x = fallback;
  } else {
    d = parse_root_sum(cfg.depth, c, "--depth");
  }
  if (d.height() > cap && !caps_overridden()) throw InvalidInput("--depth exceeds the height cap " + std::to_string(cap));
  return d;
}

std::vector<Weight> theta_probes(const CartanDatum& c) {
  std::vector<Weight> p{Weight::zero(c.rank())};
  for (int i = 0; i < c.rank(); ++i) {
    p.push_back(c.fundamental(i));
    p.push_back(2 * c.fundamental(i));
  }
  p.push_back(c.rho());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

std::string name_of(const CartanDatum& c) { return c.name(); }

// ---------------------------------------------------------------- suites

struct Context {
  RunConfig cfg;
  CartanDatum c;
  UAlgebraPtr U;
};

std::vector<Instance> suite_relations(const Context& x) {
  const CartanDatum& c = x.c;
  CoordAlgebra A(x.U);
  DWindow D(A, cutoff_of(x.cfg, c));
  std::vector<Weight> probes;
  for (int i = 0; i < c.rank(); ++i) {
    probes.push_back(c.fundamental(i));
    probes.push_back(-c.fundamental(i));
  }
  probes.push_back(2 * c.fundamental(0));
  std::vector<Instance> out;
  out.push_back(from_report("relations cutoff " + D.cutoff().str(), relations_check(D, probes, x.cfg.inject_fault)));
  // seeded random combinations of basis elements
  std::mt19937_64 rng(x.cfg.seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<CoordElement> extra;
  for (const auto& g : D.grades()) {
    if (g.is_zero()) continue;
    for (int t = 0; t < 2; ++t) {
      CoordElement e = A.zero(g);
      for (auto& v : e.vec) v = QScalar(coef(rng));
      if (!e.is_zero()) extra.push_back(std::move(e));
    }
  }
  DWindow Dr(A, D.cutoff());
  DReport r = relations_check(Dr, {}, x.cfg.inject_fault, extra);
  Instance in = from_report("relations random seed " + std::to_string(x.cfg.seed), r);
  in.detail["random_elements"] = extra.size();
  out.push_back(std::move(in));
  return out;
}

std::vector<Instance> suite_lemma_rl(const Context& x) {
  const CartanDatum& c = x.c;
  CoordAlgebra A(x.U);
  Pairing P(x.U);
  Weight cut = x.cfg.cutoff.empty() ? 2 * c.fundamental(0) : cutoff_of(x.cfg, c);
  DWindow D(A, cut);
  std::vector<Instance> out;
  out.push_back(from_report("lemma-rl psi=1", lemma_rl_check(D, P, A.unit())));
  const Weight g = c.fundamental(0);
  for (std::size_t j = 0; j < A.dim(g); ++j)
    out.push_back(from_report("lemma-rl psi=b" + g.str() + "_" + std::to_string(j), lemma_rl_check(D, P, A.basis(g, j))));
  return out;
}

std::vector<Instance> suite_zw(const Context& x) {
  CoordAlgebra A(x.U);
  DWindow D(A, cutoff_of(x.cfg, x.c));
  std::vector<Instance> out;
  for (int i = 0; i < x.c.rank(); ++i)
    out.push_back(from_report("zw s" + std::to_string(i + 1) + " cutoff " + D.cutoff().str(), z_w_check(D, i, true)));
  return out;
}

std::vector<Instance> suite_theta(const Context& x) {
  const CartanDatum& c = x.c;
  Pairing P(x.U);
  RootSum depth = depth_of(x.cfg, c, c.rank() == 1 ? 4 : 3, x.U->max_height());
  std::vector<Instance> out;
  for (const auto& xi : theta_probes(c)) {
    ThetaBuildReport r = theta_build(x.U, P, {xi}, depth);
    Instance in{"theta xi=" + xi.str() + " depth " + depth.str(), r.ok, r.checked, json::object(), std::nullopt};
    if (!r.failures.empty()) in.counterexample = json{{"description", r.failures.front()}};
    out.push_back(std::move(in));
  }
  // faithfulness certificate for {d_e1, d_f1, d_k, id} on three probes
  RootSum fdepth = RootSum::zero(c.rank());
  for (auto& v : fdepth.c) v = 3;
  std::vector<Weight> probes{Weight::zero(c.rank()), c.fundamental(0), 2 * c.fundamental(0)};
  std::vector<DWord> span{{{DToken::PartialE, 0, {}}},
                          {{DToken::PartialF, 0, {}}},
                          {{DToken::PartialK, 0, c.fundamental(0)}},
                          {}};
  FaithfulnessReport f = theta_faithfulness_probe(x.U, P, probes, fdepth, span);
  Instance in{"theta faithfulness span 4", f.independent(), 1, json::object(), std::nullopt};
  in.detail["rank"] = f.rank;
  in.detail["span"] = f.size;
  in.detail["note"] = "finite-window rank certificate, not a proof of injectivity";
  out.push_back(std::move(in));
  return out;
}

std::vector<CentralElement> nontrivial(const UAlgebra& U, const std::vector<CentralElement>& zs) {
  std::vector<CentralElement> out;
  for (const auto& z : zs)
    if (z.z != U.one()) out.push_back(z);
  return out;
}

int center_height(const Context& x) { return x.cfg.max > 0 ? x.cfg.max : (x.c.rank() == 1 ? 2 : 4); }

std::vector<Weight> scan_weights(const CartanDatum& c) {
  std::vector<Weight> ws;
  if (c.rank() == 1) {
    for (int l = -3; l <= 3; ++l) ws.push_back(Weight({l}));
    return ws;
  }
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      std::vector<int> v(static_cast<std::size_t>(c.rank()), 0);
      v[0] = a;
      v[1] = b;
      ws.emplace_back(v);
    }
  return ws;
}

std::vector<Instance> suite_center(const Context& x) {
  const CartanDatum& c = x.c;
  const UAlgebra& U = *x.U;
  const int h = center_height(x);
  auto zs = center_solve(x.U, h, 2);
  auto nz = nontrivial(U, zs);
  std::vector<Instance> out;
  Instance solve{"center solve height " + std::to_string(h), !nz.empty(), 1, json::object(), std::nullopt};
  solve.detail["solutions"] = zs.size();
  if (nz.empty()) solve.detail["note"] = "no element beyond scalars at this height";
  out.push_back(std::move(solve));
  CoordAlgebra A(x.U);
  DWindow D(A, cutoff_of(x.cfg, c));
  for (std::size_t j = 0; j < zs.size(); ++j) {
    const auto& z = zs[j];
    const std::string tag = "center z" + std::to_string(j + 1);
    Instance in{tag + " central", is_central(U, z.z), 1, json::object(), std::nullopt};
    in.detail["element"] = U.str(z.z);
    json hc = json::object();
    for (const auto& [mu, s] : z.hc) hc[mu.str()] = scalar(s);
    in.detail["hc_image"] = hc;
    out.push_back(std::move(in));
    out.push_back(Instance{tag + " dot-invariant", dot_invariant(c, z), 1, json::object(), std::nullopt});
    out.push_back(from_report(tag + " d_z = sigma zeta(z)", center_operator_check(D, z)));
  }
  if (!nz.empty()) {
    auto scan = zeta_scan(c, zs, scan_weights(c));
    Instance in{"center zeta scan", true, scan.size(), json::object(), std::nullopt};
    for (const auto& e : scan)
      if (e.equal != e.linked && in.pass) {
        in.pass = false;
        in.counterexample = json{{"a", e.a.str()}, {"b", e.b.str()}, {"zeta_equal", e.equal}, {"linked", e.linked}};
      }
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<Instance> suite_annihilator(const Context& x) {
  const CartanDatum& c = x.c;
  auto nz = nontrivial(*x.U, center_solve(x.U, center_height(x), 2));
  RootSum depth = depth_of(x.cfg, c, c.rank() == 1 ? 4 : 2, x.U->max_height());
  std::vector<Instance> out;
  const Weight w1 = c.fundamental(0);
  for (std::size_t j = 0; j < nz.size(); ++j) {
    for (int l = -2; l <= 2; ++l) {
      Weight lam = l * w1;
      AnnihilatorReport r = annihilator_check(x.U, nz[j], lam, lam, depth);
      Instance in{"annihilator z" + std::to_string(j + 1) + " T(" + lam.str() + ")", r.ok, r.checked, json::object(),
                  std::nullopt};
      if (!r.failures.empty()) in.counterexample = json{{"description", r.failures.front()}};
      out.push_back(std::move(in));
    }
  }
  // negative control: T(2 varpi_1) against zeta_0
  bool caught = false;
  for (const auto& z : nz) caught = caught || !annihilator_check(x.U, z, 2 * w1, Weight::zero(c.rank()), depth).ok;
  Instance neg{"annihilator negative-control T(" + (2 * w1).str() + ") with zeta_0", caught, nz.size(), json::object(),
               std::nullopt};
  neg.detail["kind"] = "negative-control";
  out.push_back(std::move(neg));
  return out;
}

std::vector<Instance> suite_key_lemma(const Context& x) {
  const CartanDatum& c = x.c;
  std::vector<std::pair<Weight, Weight>> cases;
  if (c.rank() == 1) {
    for (int l = -3; l <= 3; ++l) cases.emplace_back(Weight({l}), Weight({2}));
  } else {
    cases.emplace_back(c.fundamental(0), c.rho());
    cases.emplace_back(Weight::zero(c.rank()), c.fundamental(0));
    cases.emplace_back(c.rho(), c.fundamental(0));
    cases.emplace_back(-2 * c.fundamental(0), c.fundamental(0));
  }
  std::vector<Instance> out;
  for (const auto& [lam, mu] : cases) {
    KeyLemmaReport r = key_lemma_characters(c, lam, mu);
    bool ok = (!r.key2_pre || r.key2_iff) && (!r.key3_pre || r.key3_iff);
    Instance in{"key-lemma lambda=" + lam.str() + " mu=" + mu.str(), ok, r.key2.size() + r.key3.size(), json::object(),
                std::nullopt};
    auto layers = [](const std::vector<KeyLayer>& ls) {
      json a = json::array();
      for (const auto& l : ls) {
        json e{{"k", l.k}, {"nu", l.nu.str()}, {"target", l.target.str()}, {"linked", l.linked}};
        if (l.linked) e["witness"] = word_str(l.witness);
        a.push_back(e);
      }
      return a;
    };
    in.detail["key2"] = {{"precondition", r.key2_pre}, {"iff", r.key2_iff}, {"asserted", r.key2_pre}, {"layers", layers(r.key2)}};
    in.detail["key3"] = {{"precondition", r.key3_pre}, {"iff", r.key3_iff}, {"asserted", r.key3_pre}, {"layers", layers(r.key3)}};
    if (!ok) in.counterexample = json{{"lambda", lam.str()}, {"mu", mu.str()}};
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<Instance> suite_weyl_character(const Context& x) {
  const CartanDatum& c = x.c;
  const int m = x.cfg.max >= 0 ? x.cfg.max : (c.rank() == 1 ? 6 : 3);
  if (m > 8 && !caps_overridden()) throw InvalidInput("--max exceeds the hard cap 8");
  std::vector<Instance> out;
  std::vector<int> cur(static_cast<std::size_t>(c.rank()), 0);
  while (true) {
    int sum = 0;
    for (int v : cur) sum += v;
    if (sum <= m) {
      Weight lam(cur);
      CharacterPoly got = simple(x.U, lam).character(), want = c.weyl_character(lam);
      Instance in{"weyl-character " + lam.str(), got == want, 1, json::object(), std::nullopt};
      in.detail["dimension"] = want.dimension();
      if (!(got == want)) in.counterexample = json{{"module", got.str()}, {"weyl", want.str()}};
      out.push_back(std::move(in));
    }
    int p = 0;
    while (p < c.rank() && ++cur[static_cast<std::size_t>(p)] > m) cur[static_cast<std::size_t>(p++)] = 0;
    if (p == c.rank()) break;
  }
  return out;
}

using SuiteFn = std::function<std::vector<Instance>(const Context&)>;

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> s{
      {"annihilator", suite_annihilator}, {"center", suite_center},   {"key-lemma", suite_key_lemma},
      {"lemma-rl", suite_lemma_rl},       {"relations", suite_relations}, {"theta", suite_theta},
      {"weyl-character", suite_weyl_character}, {"zw", suite_zw}};
  return s;
}

json config_json(const Context& x) {
  json j{{"type", name_of(x.c)}, {"cartan_matrix", x.c.matrix()}, {"seed", x.cfg.seed}};
  if (!x.cfg.cutoff.empty()) j["cutoff"] = x.cfg.cutoff;
  if (!x.cfg.depth.empty()) j["depth"] = x.cfg.depth;
  if (x.cfg.max >= 0) j["max"] = x.cfg.max;
  if (x.cfg.inject_fault) j["inject_fault"] = true;
  return j;
}

json suite_json(const std::string& name, std::vector<Instance> inst) {
  std::sort(inst.begin(), inst.end(), [](const Instance& a, const Instance& b) { return a.key < b.key; });
  json arr = json::array();
  bool pass = true;
  for (auto& in : inst) {
    json j{{"instance", in.key}, {"pass", in.pass}, {"checked", in.checked}};
    if (!in.detail.empty()) j["detail"] = in.detail;
    if (in.counterexample) j["counterexample"] = *in.counterexample;
    pass = pass && in.pass;
    arr.push_back(std::move(j));
  }
  return json{{"suite", name}, {"pass", pass}, {"instances", arr}};
}

int emit(const json& report, const RunConfig& cfg, std::ostream& out) {
  const bool pass = !report.contains("pass") || report["pass"].get<bool>();
  if (cfg.json_out) {
    out << report.dump(2) << "\n";
  } else {
    std::function<void(const json&)> text = [&](const json& j) {
      if (j.contains("suites"))
        for (const auto& s : j["suites"]) text(s);
      if (j.contains("instances"))
        for (const auto& in : j["instances"]) {
          out << (in["pass"].get<bool>() ? "PASS " : "FAIL ") << j["suite"].get<std::string>() << ": "
              << in["instance"].get<std::string>() << "\n";
          if (in.contains("counterexample")) out << "  counterexample: " << in["counterexample"].dump() << "\n";
        }
    };
    if (report.contains("instances") || report.contains("suites")) {
      text(report);
      out << (pass ? "all checks passed" : "verification failed") << "\n";
    } else {
      out << report.dump(2) << "\n";
    }
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- other subcommands

json cmd_cartan(const Context& x) {
  const CartanDatum& c = x.c;
  json roots = json::array();
  for (const auto& r : c.positive_roots()) roots.push_back(r.str());
  std::vector<int> d;
  for (int i = 0; i < c.rank(); ++i) d.push_back(c.d(i));
  return {{"type", c.name()},
          {"rank", c.rank()},
          {"matrix", c.matrix()},
          {"symmetrizer", d},
          {"l0", c.l0()},
          {"rho", c.rho().str()},
          {"positive_roots", roots},
          {"weyl_group_order", c.weyl_group().size()}};
}

json cmd_basis(const Context& x) {
  RootSum beta = parse_root_sum(x.cfg.degree.empty() ? x.cfg.depth : x.cfg.degree, x.c, "--degree");
  if (beta.height() > x.U->max_height()) throw InvalidInput("--degree exceeds the height cap");
  const GradedBasis& b = x.U->basis(beta);
  json words = json::array();
  for (const auto& w : b.words) {
    std::string s;
    for (int i : w) s += "e" + std::to_string(i + 1);
    words.push_back(s.empty() ? "1" : s);
  }
  return {{"degree", beta.str()}, {"dimension", b.size()}, {"kostant", x.c.kostant(beta)}, {"words", words}};
}

json cmd_pairing(const Context& x) {
  Pairing P(x.U);
  RootSum beta = parse_root_sum(x.cfg.degree.empty() ? x.cfg.depth : x.cfg.degree, x.c, "--degree");
  if (beta.height() > x.U->max_height()) throw InvalidInput("--degree exceeds the height cap");
  const PairingTable& t = P.table(beta);
  const bool ok = rank(t.matrix) == t.matrix.rows();
  return {{"degree", beta.str()}, {"matrix", matrix_json(t.matrix)}, {"nonsingular", ok}, {"pass", ok}};
}

json cmd_rmatrix(const Context& x) {
  Pairing P(x.U);
  Weight a = parse_weight(x.cfg.weight.empty() ? x.c.fundamental(0).str() : x.cfg.weight, x.c, "--weight");
  Weight b = x.cfg.weight2.empty() ? a : parse_weight(x.cfg.weight2, x.c, "--weight2");
  if (!a.dominant() || !b.dominant()) throw InvalidInput("weights must be dominant");
  WeightModule V = simple(x.U, a), W = simple(x.U, b);
  QMatrix R = P.r_operator(V, W, RFlavor::R).matrix, Ri = P.r_operator(V, W, RFlavor::RInverse).matrix;
  const bool inverse_ok = R * Ri == QMatrix::identity(R.rows());
  QMatrix Rc = P.r_operator(V, W, RFlavor::RCheck).matrix;
  WeightModule VW = tensor(V, W), WV = tensor(W, V);
  bool commutes = true;
  for (int i = 0; i < x.c.rank(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    commutes = commutes && Rc * VW.E[k] == WV.E[k] * Rc && Rc * VW.F[k] == WV.F[k] * Rc;
    commutes = commutes && Rc * VW.K(x.c.fundamental(i)) == WV.K(x.c.fundamental(i)) * Rc;
  }
  return {{"V", a.str()}, {"W", b.str()}, {"dim", R.rows()}, {"inverse_ok", inverse_ok}, {"check_commutes", commutes},
          {"pass", inverse_ok && commutes}};
}

json cmd_module(const Context& x) {
  Weight lam = parse_weight(x.cfg.weight.empty() ? Weight::zero(x.c.rank()).str() : x.cfg.weight, x.c, "--weight");
  WeightModule M;
  if (x.cfg.kind == "simple") {
    if (!lam.dominant()) throw InvalidInput("simple modules need a dominant weight");
    M = simple(x.U, lam);
  } else if (x.cfg.kind == "verma") {
    M = verma(x.U, lam, depth_of(x.cfg, x.c, 3, x.U->max_height()), Side::Left);
  } else {
    throw InvalidInput("--kind must be simple or verma");
  }
  RelationReport r = check_relations(M);
  json ch = json::object();
  for (const auto& [w, k] : M.character().terms) ch[w.str()] = k;
  json j{{"kind", x.cfg.kind}, {"weight", lam.str()}, {"dim", M.dim()}, {"character", ch}, {"relations_checked", r.checked},
         {"pass", r.ok}};
  if (!r.failures.empty()) j["counterexample"] = r.failures.front();
  return j;
}

json cmd_coord(const Context& x) {
  CoordAlgebra A(x.U);
  Weight cut = cutoff_of(x.cfg, x.c);
  DWindow D(A, cut);
  json dims = json::object();
  for (const auto& g : D.grades()) dims[g.str()] = A.dim(g);
  // associativity on basis triples whose total grade stays in the window
  auto basis = window_basis(D);
  std::size_t checked = 0;
  std::optional<json> bad;
  for (const auto& a : basis)
    for (const auto& b : basis)
      for (const auto& e : basis) {
        if (!D.contains(a.grade + b.grade + e.grade)) continue;
        ++checked;
        auto l = A.mult(A.mult(a, b), e).vec, r = A.mult(a, A.mult(b, e)).vec;
        if (l != r && !bad)
          bad = json{{"grades", {a.grade.str(), b.grade.str(), e.grade.str()}}, {"lhs", vector_json(l)}, {"rhs", vector_json(r)}};
      }
  json j{{"cutoff", cut.str()}, {"dims", dims}, {"associativity_checked", checked}, {"pass", !bad}};
  if (bad) j["counterexample"] = *bad;
  return j;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, f] : suites()) n.push_back(k);
    return n;
  }();
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations for quantized flag manifolds", "qflag"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--type", cfg.type, "Cartan type preset (A1, A2, B2, C2, G2)");
    sub->add_option("--cartan-matrix", cfg.cartan_matrix, "explicit Cartan matrix, rows separated by ';'");
    sub->add_option("--cutoff", cfg.cutoff, "window cutoff weight, e.g. [2]");
    sub->add_option("--depth", cfg.depth, "depth in Q^+, e.g. <3,3>");
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    sub->add_option("--max", cfg.max, "size bound (suite specific)");
    sub->add_flag("--json", cfg.json_out, "emit JSON");
  };
  auto* c_cartan = app.add_subcommand("cartan", "Cartan datum, roots and Weyl group");
  auto* c_basis = app.add_subcommand("basis", "PBW word basis of U^+ in one degree");
  auto* c_pairing = app.add_subcommand("pairing", "Drinfeld pairing matrix in one degree");
  auto* c_rmatrix = app.add_subcommand("rmatrix", "R-matrix checks on V(a) (x) V(b)");
  auto* c_module = app.add_subcommand("module", "simple or Verma module and its relations");
  auto* c_coord = app.add_subcommand("coord", "coordinate ring window and associativity");
  auto* c_verify = app.add_subcommand("verify", "run a verification suite");
  for (auto* s : {c_cartan, c_basis, c_pairing, c_rmatrix, c_module, c_coord, c_verify}) common(s);
  for (auto* s : {c_basis, c_pairing}) s->add_option("--degree", cfg.degree, "degree in Q^+, e.g. <1,1>");
  for (auto* s : {c_rmatrix, c_module}) s->add_option("--weight", cfg.weight, "weight, e.g. [1,0]");
  c_rmatrix->add_option("--weight2", cfg.weight2, "second weight");
  c_module->add_option("--kind", cfg.kind, "simple or verma");
  std::string positional;
  c_verify->add_option("suite_name", positional, "suite name or 'all'");
  c_verify->add_option("--suite", cfg.suite, "suite name or 'all'");
  c_verify->add_flag("--inject-fault", cfg.inject_fault, "negative control: corrupt one coproduct term")->group("");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    Context x{cfg, cartan_of(cfg), nullptr};
    x.U = std::make_shared<const UAlgebra>(x.c);
    json report;
    if (c_verify->parsed()) {
      std::string suite = !positional.empty() ? positional : cfg.suite;
      if (suite.empty()) throw InvalidInput("verify needs a suite name");
      json body;
      if (suite == "all") {
        json arr = json::array();
        bool pass = true;
        for (const auto& [name, fn] : suites()) {
          json s = suite_json(name, fn(x));
          pass = pass && s["pass"].get<bool>();
          arr.push_back(std::move(s));
        }
        body = json{{"suite", "all"}, {"pass", pass}, {"suites", arr}};
      } else {
        auto it = std::find_if(suites().begin(), suites().end(), [&](const auto& p) { return p.first == suite; });
        if (it == suites().end()) throw InvalidInput("unknown suite '" + suite + "'");
        body = suite_json(suite, it->second(x));
      }
      report = json{{"schema", 1}, {"command", "verify"}, {"config", config_json(x)}};
      report.update(body);
    } else {
      json body;
      std::string cmd;
      if (c_cartan->parsed()) cmd = "cartan", body = cmd_cartan(x);
      else if (c_basis->parsed()) cmd = "basis", body = cmd_basis(x);
      else if (c_pairing->parsed()) cmd = "pairing", body = cmd_pairing(x);
      else if (c_rmatrix->parsed()) cmd = "rmatrix", body = cmd_rmatrix(x);
      else if (c_module->parsed()) cmd = "module", body = cmd_module(x);
      else cmd = "coord", body = cmd_coord(x);
      report = json{{"schema", 1}, {"command", cmd}, {"config", config_json(x)}};
      report.update(body);
    }
    return emit(report, cfg, out);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const DegreeCapExceeded& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qflag::cli
