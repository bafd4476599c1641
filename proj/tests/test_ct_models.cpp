#include <doctest.h>

#include "dbisim/ct_models.hpp"
#include "support.hpp"

using namespace dbisim;
using dbisim::test::Gen;
using dbisim::test::load_ctmc;
using dbisim::test::load_sa;
using dbisim::test::q;

namespace {

RatMatrix square(std::initializer_list<std::initializer_list<const char*>> rows) {
  RatMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (const char* v : r) m(i, j++) = q(v);
    ++i;
  }
  return m;
}

// R1 (x) I + I (x) R2 written out entry by entry.
RatMatrix kronecker_sum(const RatMatrix& r1, const RatMatrix& r2) {
  const Index n1 = r1.rows(), n2 = r2.rows();
  RatMatrix out = RatMatrix::Zero(n1 * n2, n1 * n2);
  for (Index a = 0; a < n1; ++a) {
    for (Index b = 0; b < n2; ++b) {
      for (Index c = 0; c < n1; ++c) {
        for (Index d = 0; d < n2; ++d) {
          Rational v = 0;
          if (b == d) v += r1(a, c);
          if (a == c) v += r2(b, d);
          out(a * n2 + b, c * n2 + d) = v;
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("CTMC validation") {
  CHECK_THROWS_AS(CTMC({"a", "b"}, square({{"0", "-1"}, {"0", "0"}}), 0), ModelError);
  CHECK_THROWS_AS(CTMC({"a", "b"}, square({{"1", "0"}, {"0", "0"}}), 0), ModelError);
  CHECK_THROWS_AS(CTMC({"a", "b"}, square({{"0", "1"}, {"0", "0"}}), 2), ModelError);
  CHECK_THROWS_AS(CTMC({"a"}, square({{"0", "1"}, {"0", "0"}}), 0), ModelError);
  const CTMC c({"a", "b", "c"}, square({{"0", "1", "3"}, {"1/2", "0", "0"}, {"0", "0", "0"}}), 0);
  CHECK(c.exit_rate(0) == 4);
  CHECK(c.exit_rate(1) == q("1/2"));
  CHECK(c.exit_rate(2) == 0);
  CHECK(c.state_index("c") == 2);
}

TEST_CASE("interleaving of the two-state chains") {
  const CTMC c1 = load_ctmc("intro_c1.json");
  const CTMC c2 = load_ctmc("intro_c2.json");
  const CTMC p = ctmc_parallel(c1, c2);
  CHECK(p.states() == std::vector<std::string>{"(0,0)", "(0,1)", "(1,0)", "(1,1)"});
  CHECK(p.initial() == 0);
  CHECK(p.rates() == square({{"0", "2", "1", "0"}, {"0", "0", "0", "1"}, {"0", "0", "0", "2"}, {"0", "0", "0", "0"}}));
  CHECK(p.exit_rate(0) == 3);
}

TEST_CASE("property: parallel rates are the Kronecker sum") {
  Gen g(0x5eed0301);
  for (int trial = 0; trial < 50; ++trial) {
    const CTMC c1 = g.ctmc();
    const CTMC c2 = g.ctmc();
    const CTMC p = ctmc_parallel(c1, c2);
    CHECK(p.rates() == kronecker_sum(c1.rates(), c2.rates()));
    for (std::size_t a = 0; a < c1.size(); ++a) {
      for (std::size_t b = 0; b < c2.size(); ++b) {
        CHECK(p.exit_rate(a * c2.size() + b) == c1.exit_rate(a) + c2.exit_rate(b));
      }
    }
  }
}

TEST_CASE("chains as automata") {
  const CTMC c({"a", "b"}, square({{"0", "3"}, {"1", "0"}}), 1);
  const SA sa = ctmc_to_sa(c);
  CHECK(sa.num_locations() == 2);
  CHECK(sa.initial() == 1);
  REQUIRE(sa.num_clocks() == 2);
  CHECK(sa.clocks()[sa.clock_index("a->b")].rate == 3);
  CHECK(sa.clock_names(sa.kappa(0)) == std::vector<std::string>{"a->b"});
  CHECK(sa.actions() == std::vector<std::string>{"L"});
  REQUIRE(sa.edges().size() == 2);
  CHECK(sa.edges_from(0).size() == 1);
}

TEST_CASE("property: one clock and one edge per positive rate") {
  Gen g(0x5eed0302);
  for (int trial = 0; trial < 50; ++trial) {
    const CTMC c = g.ctmc(4);
    const SA sa = ctmc_to_sa(c);
    std::size_t positive = 0;
    for (Index i = 0; i < c.rates().rows(); ++i) {
      for (Index j = 0; j < c.rates().cols(); ++j) positive += c.rates()(i, j) > 0;
    }
    CHECK(sa.num_clocks() == positive);
    CHECK(sa.edges().size() == positive);
    for (const auto& e : sa.edges()) {
      CHECK(e.trigger.count() == 1);
      CHECK(e.trigger.is_subset_of(sa.kappa(e.from)));
    }
  }
}

TEST_CASE("SA validation") {
  ClockSet one(1);
  one.set(0);
  CHECK_THROWS_AS(SA({"q"}, {{"x", q("0")}}, {"a"}, {}, {one}, 0), ModelError);
  CHECK_THROWS_AS(SA({"q"}, {{"x", q("1")}}, {"a"}, {{0, 0, ClockSet(2), 0}}, {one}, 0), ModelError);
  CHECK_THROWS_AS(SA({"q"}, {{"x", q("1")}}, {"a"}, {{0, 3, one, 0}}, {one}, 0), ModelError);
  CHECK_THROWS_AS(SA({"q"}, {{"x", q("1")}, {"x", q("2")}}, {"a"}, {}, {ClockSet(2)}, 0), ModelError);
  const SA dup({"q"}, {{"x", q("1")}}, {"a"}, {{0, 0, one, 0}, {0, 0, one, 0}}, {one}, 0);
  CHECK(dup.edges().size() == 1);
}

TEST_CASE("parallel automata") {
  const SA a = ctmc_to_sa(load_ctmc("intro_c1.json"));
  const SA b = ctmc_to_sa(load_ctmc("intro_c2.json"));
  const SA p = sa_parallel(a, b);
  CHECK(p.num_locations() == 3 * 2 * 2);
  CHECK(p.locations()[p.initial()] == "(0,0,0)");
  // both chains name their clock "0->1": everything is prefixed
  CHECK(p.clock_names(p.kappa(p.location_index("(0,0,0)"))) == std::vector<std::string>{"1.0->1", "2.0->1"});
  CHECK(p.clock_names(p.kappa(p.location_index("(1,0,1)"))) == std::vector<std::string>{});
  CHECK(p.clock_names(p.kappa(p.location_index("(0,1,2)"))) == std::vector<std::string>{});
  CHECK(p.clock_names(p.kappa(p.location_index("(0,0,1)"))) == std::vector<std::string>{"1.0->1"});
  CHECK(p.clock_names(p.kappa(p.location_index("(0,0,2)"))) == std::vector<std::string>{"2.0->1"});
  CHECK(p.edges().size() == 1 * 2 * 3 + 1 * 2 * 3);
  for (const auto& e : p.edges()) {
    const std::string& to = p.locations()[e.to];
    const bool left = p.clock_names(e.trigger).front().starts_with("1.");
    CHECK(to[to.size() - 2] == (left ? '1' : '2'));
  }
}

TEST_CASE("property: parallel shape on random automata") {
  Gen g(0x5eed0303);
  for (int trial = 0; trial < 40; ++trial) {
    const SA a = g.sa();
    const SA b = g.sa();
    const SA p = sa_parallel(a, b);
    CHECK(p.num_locations() == 3 * a.num_locations() * b.num_locations());
    CHECK(p.num_clocks() == a.num_clocks() + b.num_clocks());
    CHECK(p.edges().size() == 3 * (a.edges().size() * b.num_locations() + b.edges().size() * a.num_locations()));
    for (std::size_t l = 0; l < p.num_locations(); ++l) {
      const std::size_t q1 = l / 3 / b.num_locations();
      const std::size_t q2 = l / 3 % b.num_locations();
      const std::size_t tag = l % 3;
      CHECK(p.kappa(l).count() ==
            (tag != 2 ? a.kappa(q1).count() : 0) + (tag != 1 ? b.kappa(q2).count() : 0));
    }
  }
}

TEST_CASE("disjoint union") {
  const SA intro = load_sa("intro.json");
  const SA ex9 = load_sa("ex9.json");
  const SAUnion u = disjoint_union(intro, ex9);
  CHECK(u.sa.num_locations() == 11);
  CHECK(u.sa.num_clocks() == 8);
  CHECK(u.sa.actions() == std::vector<std::string>{"a", "b"});
  CHECK(u.sa.edges().size() == intro.edges().size() + ex9.edges().size());
  for (std::size_t i = 0; i < intro.num_locations(); ++i) {
    CHECK(u.sa.locations()[u.left[i]] == "l." + intro.locations()[i]);
    CHECK(u.sa.clock_names(u.sa.kappa(u.left[i])).size() == intro.kappa(i).count());
  }
  for (std::size_t i = 0; i < ex9.num_locations(); ++i) {
    CHECK(u.sa.locations()[u.right[i]] == "r." + ex9.locations()[i]);
  }
  CHECK(u.sa.clock_names(u.sa.kappa(u.right[ex9.location_index("u")])) == std::vector<std::string>{"r.xu"});
}
