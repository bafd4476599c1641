#include <doctest.h>

#include "dbisim/bisim.hpp"
#include "dbisim/tableau.hpp"
#include "support.hpp"

using namespace dbisim;
using dbisim::test::Gen;
using dbisim::test::load_ctmc;
using dbisim::test::load_sa;
using dbisim::test::q;

namespace {

struct Ex9 {
  SA sa = load_sa("ex9.json");
  FinitePA fpa = abstract(sa, {0, 1, 2});
  std::size_t at(const char* loc) const { return fpa.initials[sa.location_index(loc)]; }
  RatVector mix(std::initializer_list<std::pair<const char*, const char*>> parts) const {
    RatVector p = RatVector::Zero(static_cast<Index>(fpa.size()));
    for (const auto& [l, w] : parts) p(static_cast<Index>(at(l))) += q(w);
    return p;
  }
};

// The self-loop example with u's clock running at rate 2.
SA ex9_fast_u() {
  const SA base = load_sa("ex9.json");
  auto clocks = base.clocks();
  clocks[base.clock_index("xu")].rate = 2;
  return SA(base.locations(), clocks, base.actions(), base.edges(), base.kappa(), base.initial());
}

std::vector<std::size_t> all_locations(const SA& sa) {
  std::vector<std::size_t> v(sa.num_locations());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

ClockSet bits(std::size_t n, std::initializer_list<std::size_t> on) {
  ClockSet c(n);
  for (auto i : on) c.set(i);
  return c;
}

// Every busy location races two clocks whose rates add up to 2 on the one
// action, so all busy states share the timing 2e^{-2t}; the rest halt.
SA timing_uniform(Gen& g) {
  static const std::pair<const char*, const char*> splits[] = {{"1", "1"}, {"1/2", "3/2"}, {"1/3", "5/3"}};
  const std::size_t n = g.uniform(2, 5);
  std::vector<std::string> locs;
  for (std::size_t i = 0; i < n; ++i) locs.push_back("q" + std::to_string(i));
  std::vector<Clock> clocks;
  std::vector<Edge> edges;
  std::vector<std::pair<std::size_t, std::size_t>> own(n, {0, 0});
  std::vector<bool> busy(n);
  for (std::size_t i = 0; i < n; ++i) {
    busy[i] = g.coin(0.75);
    if (!busy[i]) continue;
    const auto& [r1, r2] = splits[g.uniform(0, 2)];
    own[i] = {clocks.size(), clocks.size() + 1};
    clocks.push_back({locs[i] + ".1", q(r1)});
    clocks.push_back({locs[i] + ".2", q(r2)});
  }
  const std::size_t nc = clocks.size();
  std::vector<ClockSet> kappa(n, ClockSet(nc));
  for (std::size_t i = 0; i < n; ++i) {
    if (!busy[i]) continue;
    kappa[i] = bits(nc, {own[i].first, own[i].second});
    edges.push_back({i, 0, bits(nc, {own[i].first}), g.uniform(0, n - 1)});
    edges.push_back({i, 0, bits(nc, {own[i].second}), g.uniform(0, n - 1)});
  }
  return SA(locs, clocks, {"a"}, edges, kappa, 0);
}

}  // namespace

TEST_CASE("rule names") {
  CHECK(to_string(Rule::Step) == "STEP");
  CHECK(to_string(Rule::Lin) == "LIN");
  CHECK(to_string(Rule::Repeat) == "REPEAT");
  CHECK(to_string(Rule::Failure) == "FAILURE");
  CHECK(to_string(Rule::Open) == "OPEN");
}

TEST_CASE("timing compatibility") {
  const Ex9 x;
  CHECK(compatible_timing(x.fpa, x.mix({{"q", "1/2"}, {"u", "1/2"}}), x.mix({{"v", "1"}})).compatible);
  CHECK(compatible_timing(x.fpa, x.mix({{"u", "1"}}), x.mix({{"v", "1"}})).compatible);

  const SA fast = ex9_fast_u();
  const FinitePA f = abstract(fast, {1, 2});
  const auto rep = compatible_timing(f, f.dirac(f.initials[0]), f.dirac(f.initials[1]));
  CHECK_FALSE(rep.compatible);
  REQUIRE(rep.mismatches.size() == 1);
  CHECK(rep.mismatches[0].action == "a");
  CHECK_FALSE(rep.mismatches[0].mass);
  CHECK(rep.mismatches[0].timing);
}

TEST_CASE("step children") {
  const Ex9 x;
  auto kids = step_children(x.fpa, x.mix({{"q", "1"}}), x.mix({{"v", "1"}}));
  REQUIRE(kids.size() == 1);
  CHECK(kids[0].action == "a");
  CHECK(kids[0].left == x.mix({{"q", "1/2"}, {"u", "1/2"}}));
  CHECK(kids[0].right == x.mix({{"v", "1"}}));
  kids = step_children(x.fpa, kids[0].left, kids[0].right);
  CHECK(kids[0].left == x.mix({{"q", "1/4"}, {"u", "3/4"}}));
  kids = step_children(x.fpa, x.mix({{"u", "1"}}), x.mix({{"v", "1"}}));
  CHECK(kids[0].left == x.mix({{"u", "1"}}));

  const FinitePA halting = abstract(ctmc_to_sa(load_ctmc("intro_c1.json")), {0, 1});
  CHECK_THROWS_AS(step_children(halting, halting.dirac(0).vector(), halting.dirac(1).vector()), Error);
}

TEST_CASE("linear closure") {
  const Ex9 x;
  const RatVector n1 = x.mix({{"q", "1"}}) - x.mix({{"v", "1"}});
  const RatVector n2 = x.mix({{"q", "1/2"}, {"u", "1/2"}}) - x.mix({{"v", "1"}});
  const RatVector n3 = x.mix({{"q", "1/4"}, {"u", "3/4"}}) - x.mix({{"v", "1"}});
  const auto c = lin_closes(n3, {n1, n2});
  REQUIRE(c);
  CHECK((*c)(0) == q("-1/2"));
  CHECK((*c)(1) == q("3/2"));
  // the same coefficients from a plain 2x2 solve on the q and u coordinates
  RatMatrix a(2, 2);
  a << n1(static_cast<Index>(x.at("q"))), n2(static_cast<Index>(x.at("q"))), n1(static_cast<Index>(x.at("u"))),
      n2(static_cast<Index>(x.at("u")));
  const RatVector b = (RatVector(2) << n3(static_cast<Index>(x.at("q"))), n3(static_cast<Index>(x.at("u")))).finished();
  CHECK(*solve<Rational>(a, b) == *c);

  CHECK(lin_closes(n1, {n1}));
  CHECK_FALSE(lin_closes(n2, {n1}));
  CHECK_FALSE(lin_closes(n1, {}));
}

TEST_CASE("self-loop example: u and v") {
  const Ex9 x;
  const Verdict v = check_locations(x.sa, x.sa.location_index("u"), x.sa.location_index("v"));
  CHECK(v.bisimilar);
  CHECK(v.summary() == "BISIMILAR");
  REQUIRE(v.nodes.size() == 2);
  CHECK(v.nodes[0].rule == Rule::Step);
  CHECK(v.nodes[1].rule == Rule::Repeat);
  CHECK(v.nodes[1].repeat_of == std::optional<std::size_t>(0));
  CHECK(v.nodes[1].parent == std::optional<std::size_t>(0));
  CHECK(v.nodes[1].action == "a");
  CHECK(audit_tableau(x.fpa, decide(x.fpa, x.fpa.dirac(x.at("u")), x.fpa.dirac(x.at("v")))) == "");
}

TEST_CASE("self-loop example: q and v") {
  const Ex9 x;
  const Verdict v = decide(x.fpa, x.fpa.dirac(x.at("q")), x.fpa.dirac(x.at("v")));
  CHECK(v.bisimilar);
  REQUIRE(v.nodes.size() == 3);
  CHECK(v.nodes[0].rule == Rule::Step);
  CHECK(v.nodes[1].rule == Rule::Step);
  const TableauNode& n3 = v.nodes[2];
  CHECK(n3.rule == Rule::Lin);
  CHECK(n3.depth == 3);
  CHECK(n3.left == x.mix({{"q", "1/4"}, {"u", "3/4"}}));
  CHECK(n3.basis == std::vector<std::size_t>{0, 1});
  CHECK(n3.coefficients == std::vector<Rational>{q("-1/2"), q("3/2")});
  CHECK(audit_tableau(x.fpa, v) == "");
  CHECK(check_locations(x.sa, x.sa.location_index("q"), x.sa.location_index("v")).nodes.size() == 3);
}

TEST_CASE("timing mismatch fails at the root") {
  const SA fast = ex9_fast_u();
  const Verdict v = check_locations(fast, fast.location_index("u"), fast.location_index("v"));
  CHECK_FALSE(v.bisimilar);
  CHECK(v.summary() == "NOT-BISIMILAR: a timing mismatch at depth 1");
  CHECK(v.failure == std::optional<std::size_t>(0));
  CHECK(v.failure_path() == std::vector<std::size_t>{0});
  CHECK(v.nodes[0].rule == Rule::Failure);
  CHECK(v.nodes[0].failed_action == "a");
  const FinitePA f = abstract(fast, {1, 2});
  CHECK(audit_tableau(f, decide(f, f.dirac(f.initials[0]), f.dirac(f.initials[1]))) == "");
}

TEST_CASE("a failure below the root reports its path") {
  // q -a-> r at rate 1 in both; r waits at rate 1 on one side, rate 2 on the other.
  const SA sa({"q1", "r1", "q2", "r2"}, {{"x", q("1")}, {"y", q("1")}, {"x2", q("1")}, {"y2", q("2")}}, {"a", "b"},
              {{0, 0, bits(4, {0}), 1}, {1, 1, bits(4, {1}), 1}, {2, 0, bits(4, {2}), 3}, {3, 1, bits(4, {3}), 3}},
              {bits(4, {0}), bits(4, {1}), bits(4, {2}), bits(4, {3})}, 0);
  const Verdict v = check_locations(sa, 0, 2);
  CHECK_FALSE(v.bisimilar);
  CHECK(v.summary() == "NOT-BISIMILAR: b timing mismatch at depth 2");
  CHECK(v.failure_path() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("commuting composition") {
  const CTMC c1 = load_ctmc("intro_c1.json");
  const CTMC c2 = load_ctmc("intro_c2.json");
  const auto r = check_commute(c1, c2);
  CHECK(r.verdict.bisimilar);
  CHECK(audit_tableau(r.abstraction, r.verdict) == "");
  CHECK(r.composed.num_locations() == 12);
  CHECK(r.embedded.num_locations() == 4);

  RatMatrix zero = RatMatrix::Zero(1, 1);
  const CTMC absorbing({"z"}, zero, 0);
  const auto deg = check_commute(c1, absorbing);
  CHECK(deg.verdict.bisimilar);
  CHECK(audit_tableau(deg.abstraction, deg.verdict) == "");
}

TEST_CASE("property: commuting composition on random chains") {
  Gen g(0x5eed0601);
  for (int trial = 0; trial < 15; ++trial) {
    const auto r = check_commute(g.ctmc(), g.ctmc());
    CHECK(r.verdict.bisimilar);
    CHECK(audit_tableau(r.abstraction, r.verdict) == "");
  }
}

TEST_CASE("property: symmetry, reflexivity and audit on random automata") {
  Gen g(0x5eed0602);
  int used = 0;
  for (int trial = 0; trial < 400 && used < 60; ++trial) {
    const SA sa = g.sa();
    if (!validate_deterministic(sa).ok) continue;
    ++used;
    const FinitePA fpa = abstract(sa, all_locations(sa));
    for (std::size_t i = 0; i < fpa.size(); ++i) {
      const Verdict self = decide(fpa, fpa.dirac(i), fpa.dirac(i));
      CHECK(self.bisimilar);
      REQUIRE(self.nodes.size() == 1);
      CHECK(self.nodes[0].rule == Rule::Repeat);
      for (std::size_t j = i + 1; j < fpa.size(); ++j) {
        const Verdict ab = decide(fpa, fpa.dirac(i), fpa.dirac(j));
        const Verdict ba = decide(fpa, fpa.dirac(j), fpa.dirac(i));
        CHECK(ab.bisimilar == ba.bisimilar);
        CHECK(audit_tableau(fpa, ab) == "");
        std::size_t retained = 0;
        for (const auto& n : ab.nodes) retained += n.rule == Rule::Step;
        CHECK(retained <= fpa.size());
      }
    }
  }
  CHECK(used >= 30);
}

TEST_CASE("property: agrees with the matrix method when timing is uniform") {
  Gen g(0x5eed0603);
  int separated = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const SA sa = timing_uniform(g);
    const FinitePA fpa = abstract(sa, all_locations(sa));
    const PA pa = to_pa(fpa);
    const auto e = deterministic_bisim_matrix(pa);
    const Index n = static_cast<Index>(fpa.size());
    for (int k = 0; k < 6; ++k) {
      const Dist mu(g.distribution(n)), nu(g.distribution(n));
      const bool tab = decide(fpa, mu, nu).bisimilar;
      CHECK(tab == equivalent(e, mu, nu).equivalent);
      separated += !tab;
    }
  }
  CHECK(separated > 0);
}
