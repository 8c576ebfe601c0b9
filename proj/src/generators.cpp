#include "secx/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "secx/graph_ops.hpp"
#include "secx/validation.hpp"

namespace secx {

namespace {

constexpr std::uint32_t kUnboundedSlack = 3;

Multiplicity random_bound(Rng& rng) {
  static const Multiplicity choices[] = {
      Multiplicity::any(),        Multiplicity::make(0, 1), Multiplicity::make(1, 1),
      Multiplicity::make(1, std::nullopt), Multiplicity::make(1, 2), Multiplicity::make(2, 3),
  };
  return choices[rng.below(std::size(choices))];
}

std::uint32_t gen_ub(const Multiplicity& m) { return m.ub ? *m.ub : m.lb + kUnboundedSlack; }

/// Degrees in [lb, ub] per node summing to `total` (precondition: feasible).
std::vector<std::uint32_t> spread(std::size_t n, std::uint32_t lb, std::uint32_t ub,
                                  std::uint64_t total, Rng& rng) {
  std::vector<std::uint32_t> deg(n, lb);
  std::uint64_t remaining = total - static_cast<std::uint64_t>(lb) * n;
  std::vector<std::size_t> open(n);
  std::iota(open.begin(), open.end(), 0);
  while (remaining > 0) {
    const std::size_t i = rng.below(open.size());
    if (++deg[open[i]] == ub) {
      open[i] = open.back();
      open.pop_back();
    }
    --remaining;
  }
  return deg;
}

/// Adds edges of type `t` among the given endpoint sets with random valid
/// degrees. Returns false if the counts admit no valid degree sequence.
bool add_edges_of_type(InstanceGraph& g, const EdgeType& t, const std::vector<NodeId>& srcs,
                       const std::vector<NodeId>& tars, EdgeId& next_edge, Rng& rng) {
  const Multiplicity& out = t.m_tar;
  const Multiplicity& in = t.m_src;
  const std::uint64_t ns = srcs.size(), nt = tars.size();
  const std::uint64_t lo = std::max<std::uint64_t>(ns * out.lb, nt * in.lb);
  const std::uint64_t hi = std::min<std::uint64_t>(ns * gen_ub(out), nt * gen_ub(in));
  if (lo > hi) return false;
  const auto total = static_cast<std::uint64_t>(rng.between(static_cast<std::int64_t>(lo),
                                                            static_cast<std::int64_t>(hi)));
  if (total == 0) return true;
  const auto out_deg = spread(ns, out.lb, gen_ub(out), total, rng);
  const auto in_deg = spread(nt, in.lb, gen_ub(in), total, rng);
  std::vector<NodeId> src_stubs, tar_stubs;
  for (std::size_t i = 0; i < ns; ++i) src_stubs.insert(src_stubs.end(), out_deg[i], srcs[i]);
  for (std::size_t i = 0; i < nt; ++i) tar_stubs.insert(tar_stubs.end(), in_deg[i], tars[i]);
  rng.shuffle(tar_stubs);
  for (std::size_t i = 0; i < src_stubs.size(); ++i) {
    g.add_edge(next_edge, t.id, src_stubs[i], tar_stubs[i]);
    next_edge = EdgeId{next_edge.value + 1};
  }
  return true;
}

std::vector<NodeId> nodes_of_type(const InstanceGraph& g, NodeTypeId t) {
  std::vector<NodeId> result;
  for (const auto& [id, type] : g.nodes()) {
    if (type == t) result.push_back(id);
  }
  return result;
}

}  // namespace

std::shared_ptr<const TypeGraph> random_type_graph(Rng& rng, const TypeGraphShape& shape) {
  auto tg = std::make_shared<TypeGraph>();
  const auto n = static_cast<std::uint32_t>(rng.between(2, shape.max_node_types));
  const auto problem = static_cast<std::uint32_t>(rng.between(1, std::min<std::int64_t>(2, n - 1)));
  for (std::uint32_t i = 0; i < n; ++i) {
    tg->add_node_type(NodeTypeId{i}, (i < problem ? "P" : "S") + std::to_string(i), i < problem);
  }
  const auto m = static_cast<std::uint32_t>(rng.between(1, shape.max_edge_types));
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto src = static_cast<std::uint32_t>(rng.below(n));
    const auto tar = static_cast<std::uint32_t>(rng.below(n));
    const bool is_problem = src < problem && tar < problem && rng.bernoulli(shape.p_problem_edge);
    tg->add_edge_type(EdgeTypeId{i}, "e" + std::to_string(i), NodeTypeId{src}, NodeTypeId{tar},
                      random_bound(rng), random_bound(rng), is_problem);
  }
  return tg;
}

std::optional<InstanceGraph> random_problem_graph(std::shared_ptr<const TypeGraph> tg, Rng& rng,
                                                  int max_nodes) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    InstanceGraph g(tg);
    std::uint64_t next_node = 0;
    for (const auto& [id, nt] : tg->node_types()) {
      if (!nt.problem) continue;
      const auto count = rng.between(1, std::max(1, max_nodes / 4));
      for (std::int64_t i = 0; i < count; ++i) g.add_node(NodeId{next_node++}, id);
    }
    if (static_cast<int>(g.node_count()) > max_nodes) continue;
    EdgeId next_edge{0};
    bool ok = true;
    for (const auto& [id, et] : tg->edge_types()) {
      if (!et.problem) continue;
      ok = add_edges_of_type(g, et, nodes_of_type(g, et.src), nodes_of_type(g, et.tar), next_edge,
                             rng);
      if (!ok) break;
    }
    if (ok) return g;
  }
  return std::nullopt;
}

std::optional<InstanceGraph> random_feasible_solution(const InstanceGraph& pip, Rng& rng,
                                                      int max_nodes, int attempts) {
  const TypeGraph& tg = pip.types();
  const int room = max_nodes - static_cast<int>(pip.node_count());
  if (room < 0) return std::nullopt;
  std::vector<NodeTypeId> solution_types;
  for (const auto& [id, nt] : tg.node_types()) {
    if (!nt.problem) solution_types.push_back(id);
  }
  for (int attempt = 0; attempt < attempts; ++attempt) {
    InstanceGraph g = pip;
    NodeId next_node = pip.next_node_id();
    int budget = room;
    for (NodeTypeId t : solution_types) {
      const auto count = std::min<std::int64_t>(budget, rng.between(0, std::max(1, room / 2)));
      for (std::int64_t i = 0; i < count; ++i) {
        g.add_node(next_node, t);
        next_node = NodeId{next_node.value + 1};
      }
      budget -= static_cast<int>(count);
    }
    EdgeId next_edge = pip.next_edge_id();
    bool ok = true;
    for (const auto& [id, et] : tg.edge_types()) {
      if (et.problem) continue;
      ok = add_edges_of_type(g, et, nodes_of_type(g, et.src), nodes_of_type(g, et.tar), next_edge,
                             rng);
      if (!ok) break;
    }
    if (ok && is_feasible(g)) return g;
  }
  return std::nullopt;
}

std::optional<InstanceGraph> make_infeasible(const InstanceGraph& source, Rng& rng, int max_steps) {
  InstanceGraph g = source;
  const TypeGraph& tg = g.types();
  std::vector<EdgeTypeId> solution_edge_types;
  std::vector<NodeTypeId> solution_node_types;
  for (const auto& [id, et] : tg.edge_types()) {
    if (!et.problem) solution_edge_types.push_back(id);
  }
  for (const auto& [id, nt] : tg.node_types()) {
    if (!nt.problem) solution_node_types.push_back(id);
  }
  for (int step = 0; step < max_steps; ++step) {
    switch (rng.below(3)) {
      case 0: {  // drop a solution edge
        std::vector<EdgeId> candidates;
        for (const auto& [id, e] : g.edges()) {
          if (!tg.is_problem(e.type)) candidates.push_back(id);
        }
        if (!candidates.empty()) g.remove_edge(candidates[rng.below(candidates.size())]);
        break;
      }
      case 1: {  // add a solution edge between existing nodes
        if (solution_edge_types.empty()) break;
        const EdgeType& et = tg.edge_type(solution_edge_types[rng.below(solution_edge_types.size())]);
        const auto srcs = nodes_of_type(g, et.src);
        const auto tars = nodes_of_type(g, et.tar);
        if (srcs.empty() || tars.empty()) break;
        g.add_edge(g.next_edge_id(), et.id, srcs[rng.below(srcs.size())],
                   tars[rng.below(tars.size())]);
        break;
      }
      default: {  // add an isolated solution node
        if (solution_node_types.empty()) break;
        g.add_node(g.next_node_id(), solution_node_types[rng.below(solution_node_types.size())]);
        break;
      }
    }
    if (!is_feasible(g)) return g;
  }
  return std::nullopt;
}

}  // namespace secx
