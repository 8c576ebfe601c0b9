#include <doctest.h>

#include "secx/cra.hpp"
#include "secx/errors.hpp"
#include "secx/generators.hpp"
#include "secx/generic_crossover.hpp"
#include "secx/validation.hpp"
#include "support/iso.hpp"

using namespace secx;
using secx::testing::isomorphic;

namespace {

NodeId N(std::uint64_t v) { return NodeId{v}; }
EdgeId E(std::uint64_t v) { return EdgeId{v}; }

// Every solution element of `g` to "both".
DecisionTrace all_both(const InstanceGraph& g, const std::string& prefix) {
  DecisionTrace t;
  for (const auto& [n, type] : g.nodes()) {
    if (!g.types().is_problem(type)) t.add(prefix + ".node@" + std::to_string(n.value), 3);
  }
  for (const auto& [e, ed] : g.edges()) {
    if (!g.types().is_problem(ed.type)) t.add(prefix + ".edge@" + std::to_string(e.value), 3);
  }
  return t;
}

InstanceGraph union_of(const InstanceGraph& a, const InstanceGraph& b) {
  InstanceGraph u = a;
  for (const auto& [n, t] : b.nodes()) {
    if (!u.has_node(n)) u.add_node(n, t);
  }
  for (const auto& [e, ed] : b.edges()) {
    if (!u.has_edge(e)) u.add_edge(e, ed.type, ed.src, ed.tar);
  }
  return u;
}

void check_split(const InstanceGraph& g, const Split& s) {
  const InstanceGraph pip = problem_graph_of(g);
  CHECK(is_subgraph(s.part1, g));
  CHECK(is_subgraph(s.part2, g));
  CHECK(is_subgraph(pip, s.part1));
  CHECK(is_subgraph(pip, s.part2));
  CHECK(union_of(s.part1, s.part2) == g);
  CHECK(is_subgraph(s.split_point, s.part1));
  CHECK(is_subgraph(s.split_point, s.part2));
  for (const auto& [n, t] : s.part1.nodes()) CHECK(s.split_point.has_node(n) == s.part2.has_node(n));
  for (const auto& [e, ed] : s.part1.edges()) CHECK(s.split_point.has_edge(e) == s.part2.has_edge(e));
}

}  // namespace

TEST_CASE("config validation") {
  GenericConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.p_identify_node = 2.0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
  cfg = {};
  cfg.split.p_both = -1.0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
}

TEST_CASE("splitting the problem graph leaves it whole") {
  const InstanceGraph pip = problem_graph_of(cra::fixtures().g);
  Decider d(0);
  const Split s = random_split(pip, d);
  CHECK(s.part1 == pip);
  CHECK(s.part2 == pip);
  CHECK(d.trace().empty());
}

TEST_CASE("all-both decisions give two full copies") {
  const auto f = cra::fixtures();
  Decider d = Decider::forcing(all_both(f.g, "split"), 0);
  const Split s = random_split(f.g, d);
  CHECK(s.part1 == f.g);
  CHECK(s.part2 == f.g);
  CHECK(s.split_point == f.g);
}

TEST_CASE("worked split: G1 lacks the reference to f3") {
  const auto f = cra::fixtures();
  Decider d = Decider::forcing(f.generic_trace, 0);
  const Split s = random_split(f.g, d, {}, "gsplit");
  CHECK(s.part2 == f.g);
  InstanceGraph expected = f.g;
  expected.remove_edge(E(13));
  CHECK(s.part1 == expected);
  check_split(f.g, s);
}

TEST_CASE("worked example: one feasible and one infeasible offspring") {
  const auto f = cra::fixtures();
  Decider d = Decider::forcing(f.generic_trace, 0);
  const GenericResult r = generic_crossover(f.g, f.h, d);
  CHECK(d.remaining() == 0);
  CHECK(isomorphic(r.offspring1, f.g1h2));
  CHECK(is_feasible(r.offspring1));

  const auto report = check_multiplicities(r.offspring2);
  REQUIRE(report.size() == 2);
  CHECK(report.count(BoundKind::Upper) == 1);
  CHECK(report.count(BoundKind::Lower) == 1);
  // f2 is held by two Classes, and one Class is empty
  for (const Violation& v : report.entries) {
    if (v.kind == BoundKind::Upper) {
      CHECK(v.node == N(2));
      CHECK(v.observed == 2);
    } else {
      CHECK(r.offspring2.node_type(v.node) == cra::kClass);
      CHECK(v.observed == 0);
    }
  }
}

TEST_CASE("trivial splits over the problem graph add up the nodes") {
  const auto f = cra::fixtures();
  DecisionTrace t = all_both(f.g, "gsplit");
  for (const auto& e : all_both(f.h, "hsplit").entries) t.add(e.site, e.value);
  GenericConfig cfg;
  cfg.p_identify_node = 0.0;
  Decider d = Decider::forcing(t, 0);
  const GenericResult r = generic_crossover(f.g, f.h, d, cfg);
  const std::size_t pip = problem_graph_of(f.g).node_count();
  CHECK(r.cp.graph == problem_graph_of(f.g));
  CHECK(r.offspring1.node_count() == f.g.node_count() + f.h.node_count() - pip);
  CHECK(r.offspring2.node_count() == f.g.node_count() + f.h.node_count() - pip);
}

TEST_CASE("the problem graph crossed with itself") {
  const InstanceGraph pip = problem_graph_of(cra::fixtures().g);
  Decider d(5);
  const GenericResult r = generic_crossover(pip, pip, d);
  CHECK(r.offspring1 == pip);
  CHECK(r.offspring2 == pip);
}

TEST_CASE("parents from different search spaces are rejected") {
  const auto f = cra::fixtures();
  InstanceGraph other = f.h;
  other.remove_edge(E(1));
  Decider d(0);
  CHECK_THROWS_AS(generic_crossover(f.g, other, d), PreconditionError);
}

TEST_CASE("crossover points embed into both split points") {
  Rng rng(31);
  int trials = 0;
  while (trials < 300) {
    const auto tg = random_type_graph(rng);
    const auto pip = random_problem_graph(tg, rng, 5);
    if (!pip) continue;
    const auto g = random_feasible_solution(*pip, rng, 14);
    const auto h = random_feasible_solution(*pip, rng, 14);
    if (!g || !h) continue;
    Decider d(rng.next());
    const GenericResult r = generic_crossover(*g, *h, d);
    check_split(*g, r.g_split);
    check_split(*h, r.h_split);
    CHECK(is_subgraph(*pip, r.cp.graph));
    for (const auto& [c, t] : r.cp.graph.nodes()) {
      CHECK(r.g_split.split_point.node_type(r.cp.node_to_a.at(c)) == t);
      CHECK(r.h_split.split_point.node_type(r.cp.node_to_b.at(c)) == t);
    }
    CHECK(problem_graph_of(r.offspring1) == *pip);
    CHECK(problem_graph_of(r.offspring2) == *pip);
    CHECK(same_search_space(r.offspring1, *g));
    CHECK(same_search_space(r.offspring2, *h));
    ++trials;
  }
}

TEST_CASE("generic crossover is reproducible") {
  const auto f = cra::fixtures();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Decider a(seed), b(seed);
    const auto ra = generic_crossover(f.g, f.h, a);
    const auto rb = generic_crossover(f.g, f.h, b);
    CHECK(ra.offspring1 == rb.offspring1);
    CHECK(ra.offspring2 == rb.offspring2);
    Decider replay = Decider::replaying(a.trace());
    CHECK(generic_crossover(f.g, f.h, replay).offspring1 == ra.offspring1);
  }
}
