#include <doctest.h>

#include "dbisim/abstraction.hpp"
#include "support.hpp"

using namespace dbisim;
using dbisim::test::Gen;
using dbisim::test::load_ctmc;
using dbisim::test::load_sa;
using dbisim::test::q;

namespace {

Expolynomial e(const char* coef, unsigned power, const char* rate) { return Expolynomial::term(q(coef), power, q(rate)); }

ClockSet bits(std::size_t n, std::initializer_list<std::size_t> on) {
  ClockSet c(n);
  for (auto i : on) c.set(i);
  return c;
}

// One location q with clocks x (rate 1) and y (rate 2); the single edge
// needs both to expire.
SA both_clocks() {
  return SA({"q", "r"}, {{"x", q("1")}, {"y", q("2")}}, {"a"}, {{0, 0, bits(2, {0, 1}), 1}},
            {bits(2, {0, 1}), bits(2, {})}, 0);
}

}  // namespace

TEST_CASE("live clocks and initial states of the self-loop example") {
  const SA sa = load_sa("ex9.json");
  const auto live = live_clocks(sa);
  CHECK(sa.clock_names(live[0]) == std::vector<std::string>{"x", "y"});
  CHECK(sa.clock_names(live[1]) == std::vector<std::string>{"xu"});
  CHECK(sa.clock_names(live[2]) == std::vector<std::string>{"z"});
  CHECK(symstate_name(sa, initial_symstate(sa, 0)) == "q@{x,y}");
  CHECK(symstate_name(sa, initial_symstate(sa, 2)) == "v@{z}");
}

TEST_CASE("successors and timing in the self-loop example") {
  const SA sa = load_sa("ex9.json");
  const SymState qs = initial_symstate(sa, 0);
  const auto succ = successor(sa, qs);
  REQUIRE(succ.size() == 1);
  const SymStep& st = succ.at(0);
  CHECK(st.probability == 1);
  REQUIRE(st.targets.size() == 2);
  CHECK(st.targets.at(qs) == q("1/2"));
  CHECK(st.targets.at(initial_symstate(sa, 1)) == q("1/2"));

  const auto t = timing_profile(sa, qs);
  CHECK(t.halt == 0);
  const ActionTiming& a = t.actions.at(0);
  CHECK(a.mass == 1);
  CHECK(a.atom == 0);
  CHECK(a.density == e("1", 0, "1"));

  const auto tu = timing_profile(sa, initial_symstate(sa, 1));
  CHECK(tu.actions.at(0).density == e("1", 0, "1"));
}

TEST_CASE("abstraction of the self-loop example") {
  const SA sa = load_sa("ex9.json");
  const FinitePA fpa = abstract(sa, {0, 1, 2});
  CHECK(fpa.size() == 3);
  CHECK(fpa.state_bound() == 3 * 16);
  REQUIRE(fpa.initials.size() == 3);
  CHECK(fpa.states[fpa.initials[0]].name == "q@{x,y}");
  CHECK(fpa.states[fpa.initials[1]].name == "u@{xu}");
  CHECK(fpa.states[fpa.initials[2]].name == "v@{z}");
  CHECK(abstract(sa, {0}).size() == 2);

  const PA pa = to_pa(fpa);
  CHECK(pa.num_states() == 3);
  CHECK(pa.transitions().size() == 3);
  CHECK(has_single_transition_per_state(pa));
}

TEST_CASE("exponential race of the introductory automaton") {
  const SA sa = load_sa("intro.json");
  const SymState qs = initial_symstate(sa, sa.location_index("q"));
  const auto t = timing_profile(sa, qs);
  CHECK(t.actions.at(sa.action_index("a")).mass == q("1/3"));
  CHECK(t.actions.at(sa.action_index("a")).density == e("1", 0, "3"));
  CHECK(t.actions.at(sa.action_index("b")).mass == q("2/3"));
  CHECK(t.actions.at(sa.action_index("b")).density == e("2", 0, "3"));

  const auto succ = successor(sa, qs);
  const SymStep& a = succ.at(sa.action_index("a"));
  REQUIRE(a.targets.size() == 1);
  // y keeps running in u
  CHECK(symstate_name(sa, a.targets.begin()->first) == "u@{y}");
  const auto tu = timing_profile(sa, a.targets.begin()->first);
  CHECK(tu.actions.at(sa.action_index("b")).density == e("2", 0, "2"));
}

TEST_CASE("waiting for two clocks gives the maximum of two exponentials") {
  const SA sa = both_clocks();
  const auto t = timing_profile(sa, initial_symstate(sa, 0));
  // density of max(Exp(1), Exp(2)): e^-t + 2e^-2t - 3e^-3t
  CHECK(t.actions.at(0).density == e("1", 0, "1") + e("2", 0, "2") - e("3", 0, "3"));
  CHECK(t.actions.at(0).mass == 1);
  CHECK(abstract(sa, {0}).size() == 2);
}

TEST_CASE("chains as automata abstract to their states") {
  const SA sa = ctmc_to_sa(load_ctmc("intro_c1.json"));
  const FinitePA fpa = abstract(sa, {0});
  REQUIRE(fpa.size() == 2);
  CHECK(fpa.states[1].name == "1@{}");
  CHECK(fpa.states[1].timing.halt == 1);
  CHECK(fpa.states[1].steps.empty());
}

TEST_CASE("immediate edges, Zeno loops and nondeterminism") {
  SUBCASE("an edge whose clock is unset fires at once") {
    const SA sa({"q", "r"}, {{"x", q("1")}}, {"a"}, {{0, 0, bits(1, {0}), 1}}, {bits(1, {}), bits(1, {})}, 0);
    const auto t = timing_profile(sa, initial_symstate(sa, 0));
    CHECK(t.actions.at(0).atom == 1);
    CHECK(t.actions.at(0).density.is_zero());
    CHECK_NOTHROW(abstract(sa, {0}));
  }
  SUBCASE("a cycle of immediate edges is Zeno") {
    const SA sa({"q"}, {{"x", q("1")}}, {"a"}, {{0, 0, bits(1, {0}), 0}}, {bits(1, {})}, 0);
    CHECK_THROWS_AS(abstract(sa, {0}), ZenoLoop);
    CHECK_FALSE(validate_deterministic(sa).ok);
  }
  SUBCASE("two edges on one clock") {
    const SA sa({"q", "r", "s"}, {{"x", q("1")}}, {"a", "b"},
                {{0, 0, bits(1, {0}), 1}, {0, 1, bits(1, {0}), 2}}, {bits(1, {0}), bits(1, {}), bits(1, {})}, 0);
    CHECK_THROWS_AS(abstract(sa, {0}), DeterminismViolation);
    const auto rep = validate_deterministic(sa);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());
  }
  SUBCASE("a location without edges halts") {
    const SA sa({"q"}, {{"x", q("1")}}, {"a"}, {}, {bits(1, {0})}, 0);
    const auto t = timing_profile(sa, initial_symstate(sa, 0));
    CHECK(t.halt == 1);
    CHECK(t.actions.empty());
  }
}

TEST_CASE("property: timing conserves mass on random deterministic automata") {
  Gen g(0x5eed0501);
  int used = 0;
  for (int trial = 0; trial < 300 && used < 80; ++trial) {
    const SA sa = g.sa();
    if (!validate_deterministic(sa).ok) continue;
    ++used;
    std::vector<std::size_t> all(sa.num_locations());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const FinitePA fpa = abstract(sa, all);
    CHECK(fpa.size() <= fpa.state_bound());
    for (const auto& st : fpa.states) {
      Rational total = st.timing.halt;
      for (const auto& [act, at] : st.timing.actions) {
        total += at.mass;
        CHECK(at.atom + at.density.integral() == at.mass);
        REQUIRE(st.steps.count(act) == 1);
        CHECK(st.steps.at(act).probability == at.mass);
        Rational sum = 0;
        for (const auto& [idx, p] : st.steps.at(act).targets) {
          CHECK(idx < fpa.size());
          sum += p;
        }
        CHECK(sum == 1);
      }
      CHECK(total == 1);
      CHECK(st.steps.size() == st.timing.actions.size());
    }
    CHECK(is_action_deterministic(to_pa(fpa)));
  }
  CHECK(used >= 40);
}
