// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "secx/cra.hpp"
#include "secx/generators.hpp"
#include "secx/generic_crossover.hpp"
#include "secx/graph_ops.hpp"
#include "secx/secure_crossover.hpp"
#include "secx/validation.hpp"
#include "support/checks.hpp"
#include "support/iso.hpp"

using namespace secx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << id << ' ' << name << ": " << o.detail << std::endl;
  failures += !o.pass;
}

// Shared tallies for criteria 5 and 6, fed by every secure run below.
struct RunAudit {
  std::size_t runs = 0;
  int max_visits = 0;
  std::size_t nonconforming = 0;
  std::string first_problem;

  void check(const InstanceGraph& g, const InstanceGraph& h, const SecureCrossoverResult& r) {
    ++runs;
    max_visits = std::max(max_visits, r.state.max_visits());
    if (auto why = testing::conformance_failure(g, h, r); !why.empty()) {
      ++nonconforming;
      if (first_problem.empty()) first_problem = why;
    }
  }
};

RunAudit audit;

struct Pair {
  InstanceGraph g;
  InstanceGraph h;
};

// Feasible parent pairs over fresh random type graphs.
template <typename Use>
std::pair<std::size_t, std::size_t> over_random_pairs(Rng& rng, std::size_t min_trials,
                                                      std::size_t min_graphs, std::size_t per_graph,
                                                      Use&& use) {
  std::size_t trials = 0, graphs = 0;
  while (trials < min_trials || graphs < min_graphs) {
    const auto tg = random_type_graph(rng);
    const auto pip = random_problem_graph(tg, rng, 6);
    if (!pip) continue;
    std::size_t here = 0;
    for (std::size_t attempt = 0; attempt < 4 * per_graph && here < per_graph; ++attempt) {
      auto g = random_feasible_solution(*pip, rng, 20);
      auto h = random_feasible_solution(*pip, rng, 20);
      if (!g || !h) continue;
      if (use(Pair{std::move(*g), std::move(*h)})) ++here;
    }
    if (here == 0) continue;
    trials += here;
    ++graphs;
  }
  return {trials, graphs};
}

Outcome feasibility_preservation() {
  Rng rng(1);
  std::size_t infeasible = 0;
  std::string example;
  const auto start = std::chrono::steady_clock::now();
  const auto [trials, graphs] = over_random_pairs(rng, 10'000, 50, 200, [&](const Pair& p) {
    Decider d(rng.next());
    const auto r = secure_crossover(p.g, p.h, {}, d);
    audit.check(p.g, p.h, r);
    if (!is_feasible(r.offspring)) {
      ++infeasible;
    }
    return true;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream s;
  s << trials << " trials over " << graphs << " type graphs, " << infeasible
    << " infeasible offspring, " << secs << " s";
  return {infeasible == 0 && trials >= 10'000 && graphs >= 50 && secs < 60.0, s.str()};
}

Outcome non_worsening() {
  Rng rng(2);
  std::size_t bad = 0;
  std::string first;
  const auto [trials, graphs] = over_random_pairs(rng, 5'000, 50, 100, [&](const Pair& p) {
    const auto g = make_infeasible(p.g, rng);
    const auto h = make_infeasible(p.h, rng);
    if (!g || !h) return false;
    Decider d(rng.next());
    const auto r = secure_crossover(*g, *h, {}, d);
    audit.check(*g, *h, r);
    if (auto why = testing::non_worsening_failure(*g, *h, r); !why.empty()) {
      if (first.empty()) first = why;
      ++bad;
    }
    return true;
  });
  std::ostringstream s;
  s << trials << " infeasible-input trials over " << graphs << " type graphs, " << bad
    << " out of bounds" << (first.empty() ? "" : " (" + first + ")");
  return {bad == 0 && trials >= 5'000, s.str()};
}

Outcome gsub_lower_bounds() {
  Rng rng(3);
  std::size_t runs = 0, bad = 0;
  while (runs < 5'000) {
    const auto tg = random_type_graph(rng);
    const auto pip = random_problem_graph(tg, rng, 6);
    if (!pip) continue;
    const auto g0 = random_feasible_solution(*pip, rng, 20);
    if (!g0) continue;
    // Half of the inputs are infeasible: the inequality uses the available count.
    std::optional<InstanceGraph> g = g0;
    if (rng.bernoulli(0.5)) {
      if (auto bad_g = make_infeasible(*g0, rng)) g = std::move(bad_g);
    }
    Decider d(rng.next());
    const InstanceGraph sub = create_gsub(*g, {}, d);
    ++runs;
    bool ok = is_subgraph(sub, *g) && is_subgraph(*pip, sub);
    for (const auto& [x, type] : sub.nodes()) {
      for (Direction dir : kDirections) {
        for (EdgeTypeId t : tg->incident_types(type, dir)) {
          const std::size_t lb = tg->edge_type(t).bound_at(dir).lb;
          ok = ok && sub.count_at(x, t, dir) >= std::min(lb, g->count_at(x, t, dir));
        }
      }
    }
    bad += !ok;
  }
  std::ostringstream s;
  s << runs << " create_gsub runs, " << bad << " with a node below min(lb, available)";
  return {bad == 0, s.str()};
}

// Splits a feasible CRA solution O into parents G (Classes kept whole or the
// G part of a split Class) and H (the rest, split Classes under fresh IDs),
// with a forced trace that merges every split Class into the crossover point.
struct CoverageCase {
  InstanceGraph target, g, h;
  DecisionTrace trace;
};

CoverageCase coverage_case(Rng& rng) {
  const int features = static_cast<int>(rng.between(2, 7));
  InstanceGraph o = cra::random_solution(cra::random_problem(features, 0.3, rng), rng);
  while (o.node_count() > 12) o = cra::random_solution(problem_graph_of(o), rng);
  const InstanceGraph pip = problem_graph_of(o);
  InstanceGraph g = pip, h = pip;
  DecisionTrace t;
  constexpr std::uint64_t kShift = 1000;

  std::vector<NodeId> classes;
  for (const auto& [n, type] : o.nodes()) {
    if (type == cra::kClass) classes.push_back(n);
  }
  for (NodeId c : classes) {
    const auto owned = o.edges_at(c, cra::kEncapsulates, Direction::Src);
    enum { kG, kH, kSplit } side = static_cast<decltype(side)>(rng.below(owned.size() > 1 ? 3 : 2));
    std::vector<EdgeId> to_g, to_h;
    if (side == kG) to_g = owned;
    if (side == kH) to_h = owned;
    if (side == kSplit) {
      const auto cut = 1 + rng.below(owned.size() - 1);
      to_g.assign(owned.begin(), owned.begin() + static_cast<std::ptrdiff_t>(cut));
      to_h.assign(owned.begin() + static_cast<std::ptrdiff_t>(cut), owned.end());
    }
    if (!to_g.empty()) {
      g.add_node(c, cra::kClass);
      for (EdgeId e : to_g) g.add_edge(e, cra::kEncapsulates, c, o.edge(e).tar);
      // Each Feature brings its own edge; the Class itself asks for no more.
      if (to_g.size() > 1) t.add(site("gsub.count", c.value, cra::kEncapsulates.value, "src"), 1);
    }
    if (!to_h.empty()) {
      const NodeId ch{c.value + kShift};
      h.add_node(ch, cra::kClass);
      t.add(site("hsub.node", ch.value), 1);
      for (EdgeId e : to_h) {
        const EdgeId eh{e.value + kShift};
        h.add_edge(eh, cra::kEncapsulates, ch, o.edge(e).tar);
        t.add(site("hsub.edge", eh.value), 1);
        t.add(site("swap", eh.value), 0);
      }
      if (side == kSplit) {
        t.add(site("cp.node", ch.value), 1);
        t.add(site("cp.node.pick", ch.value), static_cast<std::int64_t>(c.value));
        // The merge happens at the edge of the lowest-numbered Feature.
        const EdgeId first = *std::min_element(to_h.begin(), to_h.end(), [&](EdgeId a, EdgeId b) {
          return o.edge(a).tar < o.edge(b).tar;
        });
        t.add(site("cp.edge", first.value + kShift), 0);
      } else {
        for (std::size_t i = 0; i < to_h.size(); ++i) t.add(site("cp.node", ch.value), 0);
        t.add(site("free.cp", ch.value), 0);
      }
    }
  }
  return {std::move(o), std::move(g), std::move(h), std::move(t)};
}

Outcome coverage() {
  Rng rng(4);
  std::size_t cases = 0, reproduced = 0, fallbacks = 0;
  while (cases < 200) {
    CoverageCase c = coverage_case(rng);
    if (c.target.node_count() > 12) continue;
    ++cases;
    Decider d = Decider::forcing(c.trace, rng.next());
    const auto r = secure_crossover(c.g, c.h, {}, d);
    audit.check(c.g, c.h, r);
    // Every decision taken must have come from the forced trace.
    const std::size_t consumed = c.trace.size() - d.remaining();
    fallbacks += consumed != d.trace().size();
    reproduced += testing::isomorphic(r.offspring, c.target);
  }
  std::ostringstream s;
  s << reproduced << "/" << cases << " targets reproduced, " << fallbacks
    << " runs needed unforced decisions";
  return {reproduced == cases && fallbacks == 0, s.str()};
}

Outcome worked_example() {
  const auto f = cra::fixtures();
  Decider d = Decider::forcing(f.secure_trace, 0);
  const auto r = secure_crossover(f.g, f.h, {}, d);
  audit.check(f.g, f.h, r);
  const bool secure_ok = testing::isomorphic(r.offspring, f.g1h2) && is_feasible(r.offspring);

  Decider dg = Decider::forcing(f.generic_trace, 0);
  const auto gr = generic_crossover(f.g, f.h, dg);
  const auto report = check_multiplicities(gr.offspring2);
  bool empty_class = false, shared_feature = false;
  for (const Violation& v : report.entries) {
    const NodeTypeId type = gr.offspring2.node_type(v.node);
    empty_class = empty_class || (v.kind == BoundKind::Lower && type == cra::kClass && v.observed == 0);
    shared_feature =
        shared_feature || (v.kind == BoundKind::Upper && type == cra::kFeature && v.observed == 2);
  }
  const bool generic_ok = testing::isomorphic(gr.offspring1, f.g1h2) && empty_class && shared_feature;
  std::ostringstream s;
  s << "secure offspring " << (secure_ok ? "matches" : "differs from") << " G1H2; generic second offspring has "
    << report.count(BoundKind::Lower) << " lower and " << report.count(BoundKind::Upper)
    << " upper violations (empty Class " << (empty_class ? "yes" : "no") << ", doubly owned Feature "
    << (shared_feature ? "yes" : "no") << ")";
  return {secure_ok && generic_ok, s.str()};
}

Outcome baseline_contrast() {
  Rng rng(8);
  std::size_t secure_ok = 0, generic_ok = 0, generic_total = 0;
  constexpr int kPairs = 1000;
  for (int i = 0; i < kPairs; ++i) {
    const int n = static_cast<int>(rng.between(10, 30));
    const InstanceGraph problem = cra::random_problem(n, 0.1, rng);
    const InstanceGraph g = cra::random_solution(problem, rng);
    const InstanceGraph h = cra::random_solution(problem, rng);
    Decider ds(rng.next());
    const auto r = secure_crossover(g, h, {}, ds);
    audit.check(g, h, r);
    secure_ok += is_feasible(r.offspring);
    Decider dg(rng.next());
    const auto gr = generic_crossover(g, h, dg);
    generic_ok += is_feasible(gr.offspring1) + is_feasible(gr.offspring2);
    generic_total += 2;
  }
  const double secure_rate = static_cast<double>(secure_ok) / kPairs;
  const double generic_rate = static_cast<double>(generic_ok) / static_cast<double>(generic_total);
  std::ostringstream s;
  s << kPairs << " CRA pairs: secure feasible rate " << secure_rate << ", generic " << generic_rate;
  return {secure_rate == 1.0 && generic_rate < secure_rate, s.str()};
}

Outcome termination() {
  std::ostringstream s;
  s << audit.runs << " secure runs terminated, max visit count " << audit.max_visits;
  return {audit.max_visits <= 3 && audit.runs > 0, s.str()};
}

Outcome conformance() {
  std::ostringstream s;
  s << audit.runs << " secure runs, " << audit.nonconforming << " nonconforming"
    << (audit.first_problem.empty() ? "" : " (" + audit.first_problem + ")");
  return {audit.nonconforming == 0 && audit.runs > 0, s.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("secx_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const fs::path fix = SECX_FIXTURES;
  const std::string bin = quote(SECX_BINARY);
  const std::string g = quote((fix / "fig2_g.instance").string());
  const std::string h = quote((fix / "fig2_h.instance").string());
  auto at = [&](const char* name) { return quote((dir / name).string()); };

  struct Command {
    std::string name;
    std::string args;
    std::vector<std::string> files;
  };
  // The replay command reads the trace written by the crossover command.
  const std::vector<Command> commands{
      {"validate", "validate --instance " + g, {}},
      {"crossover",
       "crossover --operator secure --g " + g + " --h " + h + " --seed 42 --second-offspring --out " +
           at("x1.instance") + " --out2 " + at("x2.instance") + " --trace-out " + at("x.trace"),
       {"x1.instance", "x2.instance", "x.trace"}},
      {"replay",
       "replay --operator secure --g " + g + " --h " + h + " --trace " + at("x.trace") +
           " --second-offspring --out " + at("r1.instance") + " --out2 " + at("r2.instance"),
       {"r1.instance", "r2.instance"}},
      {"ea",
       "ea --config " + quote((fix / "ea_small.json").string()) + " --out " + at("h.csv") +
           " --best-out " + at("best.instance"),
       {"h.csv", "best.instance"}},
      {"bench", "bench --trials 10 --min-features 5 --max-features 10 --seed 3 --no-timing", {}},
  };

  std::ostringstream s;
  bool pass = true;
  for (const Command& c : commands) {
    std::string reference;
    int differing = 0, failed = 0;
    for (int i = 0; i < 100; ++i) {
      const std::string cmd = bin + " " + c.args + " > " + at("stdout.txt") + " 2>&1";
      failed += std::system(cmd.c_str()) != 0;
      std::string snapshot = slurp(dir / "stdout.txt");
      for (const std::string& f : c.files) snapshot += "\n--" + f + "--\n" + slurp(dir / f);
      if (i == 0) {
        reference = snapshot;
      } else if (snapshot != reference) {
        ++differing;
      }
    }
    pass = pass && differing == 0 && failed == 0;
    s << c.name << " " << (100 - differing) << "/100 identical" << (failed ? " (errors)" : "") << "; ";
  }
  fs::remove_all(dir);
  std::string detail = s.str();
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

}  // namespace

int main() {
  try {
    report(1, "feasibility preservation", feasibility_preservation());
    report(2, "non-worsening bounds on infeasible inputs", non_worsening());
    report(3, "gsub lower bounds", gsub_lower_bounds());
    report(4, "coverage of the search space", coverage());
    report(7, "worked example", worked_example());
    report(8, "baseline contrast", baseline_contrast());
    report(5, "termination and visit bound", termination());
    report(6, "generic crossover conformance", conformance());
    report(9, "CLI determinism", cli_determinism());
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
