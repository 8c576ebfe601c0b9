#include "secx/generic_crossover.hpp"

#include <set>
#include <utility>

#include "secx/errors.hpp"

namespace secx {

namespace {

constexpr std::int64_t kPart1 = 1;
constexpr std::int64_t kPart2 = 2;

InstanceGraph restrict_to(const InstanceGraph& g, const std::set<NodeId>& nodes,
                          const std::set<EdgeId>& edges) {
  InstanceGraph sub(g.types_ptr());
  for (NodeId n : nodes) sub.add_node(n, g.node_type(n));
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    sub.add_edge(e, ed.type, ed.src, ed.tar);
  }
  return sub;
}

}  // namespace

void GenericConfig::validate() const {
  if (split.p_part1_only < 0 || split.p_part2_only < 0 || split.p_both < 0 ||
      split.p_part1_only + split.p_part2_only + split.p_both <= 0) {
    throw PreconditionError("split weights must be non-negative and not all zero");
  }
  for (double p : {p_identify_node, p_identify_edge}) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("identification probability outside [0, 1]");
  }
}

Split random_split(const InstanceGraph& g, Decider& decider, const SplitConfig& cfg,
                   std::string_view prefix) {
  const std::pair<std::int64_t, double> options[] = {
      {kPart1, cfg.p_part1_only}, {kPart2, cfg.p_part2_only}, {kPart1 | kPart2, cfg.p_both}};
  const std::string node_kind = std::string(prefix) + ".node";
  const std::string edge_kind = std::string(prefix) + ".edge";

  std::map<NodeId, std::int64_t> node_parts;
  std::map<EdgeId, std::int64_t> edge_parts;
  for (const auto& [id, type] : g.nodes()) {
    node_parts[id] = g.types().is_problem(type)
                         ? (kPart1 | kPart2)
                         : decider.weighted(site(node_kind, id.value), options);
  }
  for (const auto& [id, e] : g.edges()) {
    const std::int64_t parts = g.types().is_problem(e.type)
                                   ? (kPart1 | kPart2)
                                   : decider.weighted(site(edge_kind, id.value), options);
    edge_parts[id] = parts;
    node_parts[e.src] |= parts;
    node_parts[e.tar] |= parts;
  }

  std::set<NodeId> n1, n2;
  std::set<EdgeId> e1, e2;
  for (const auto& [id, parts] : node_parts) {
    if (parts & kPart1) n1.insert(id);
    if (parts & kPart2) n2.insert(id);
  }
  for (const auto& [id, parts] : edge_parts) {
    if (parts & kPart1) e1.insert(id);
    if (parts & kPart2) e2.insert(id);
  }
  std::set<NodeId> ni;
  std::set<EdgeId> ei;
  for (NodeId n : n1) {
    if (n2.contains(n)) ni.insert(n);
  }
  for (EdgeId e : e1) {
    if (e2.contains(e)) ei.insert(e);
  }
  return Split{restrict_to(g, n1, e1), restrict_to(g, n2, e2), restrict_to(g, ni, ei)};
}

CrossoverPoint sample_crossover_point(const InstanceGraph& g_point, const InstanceGraph& h_point,
                                      Decider& decider, const GenericConfig& cfg) {
  CrossoverPoint cp = identity_crossover_point(problem_graph_of(g_point));
  std::set<NodeId> used_h;
  for (const auto& [id, image] : cp.node_to_b) used_h.insert(image);

  for (const auto& [x, type] : g_point.nodes()) {
    if (g_point.types().is_problem(type)) continue;
    std::vector<NodeId> candidates;
    for (const auto& [y, ytype] : h_point.nodes()) {
      if (ytype == type && !used_h.contains(y)) candidates.push_back(y);
    }
    if (candidates.empty()) continue;
    if (!decider.bernoulli(site("gcp.node", x.value), cfg.p_identify_node)) continue;
    const NodeId y = decider.pick_id<NodeId>(site("gcp.node.pick", x.value), candidates);
    used_h.insert(y);
    cp.graph.add_node(x, type);
    cp.node_to_a.emplace(x, x);
    cp.node_to_b.emplace(x, y);
  }

  std::set<EdgeId> used_edges;
  for (const auto& [id, image] : cp.edge_to_b) used_edges.insert(image);
  for (const auto& [e, edge] : g_point.edges()) {
    if (g_point.types().is_problem(edge.type)) continue;
    auto src = cp.node_to_b.find(edge.src);
    auto tar = cp.node_to_b.find(edge.tar);
    if (src == cp.node_to_b.end() || tar == cp.node_to_b.end()) continue;
    std::vector<EdgeId> candidates;
    for (EdgeId f : h_point.edges_at(src->second, edge.type, Direction::Src)) {
      if (h_point.edge(f).tar == tar->second && !used_edges.contains(f)) candidates.push_back(f);
    }
    if (candidates.empty()) continue;
    if (!decider.bernoulli(site("gcp.edge", e.value), cfg.p_identify_edge)) continue;
    const EdgeId f = decider.pick_id<EdgeId>(site("gcp.edge.pick", e.value), candidates);
    used_edges.insert(f);
    cp.graph.add_edge(e, edge.type, edge.src, edge.tar);
    cp.edge_to_a.emplace(e, e);
    cp.edge_to_b.emplace(e, f);
  }
  return cp;
}

GenericResult generic_crossover(const InstanceGraph& g, const InstanceGraph& h,
                                Decider& decider, const GenericConfig& cfg) {
  cfg.validate();
  if (!(g.types() == h.types())) throw PreconditionError("parents use different type graphs");
  if (!same_search_space(g, h)) throw PreconditionError("parents solve different problem instances");
  Split gs = random_split(g, decider, cfg.split, "gsplit");
  Split hs = random_split(h, decider, cfg.split, "hsplit");
  CrossoverPoint cp = sample_crossover_point(gs.split_point, hs.split_point, decider, cfg);
  InstanceGraph o1 = union_over(gs.part1, hs.part2, cp);
  InstanceGraph o2 = union_over(gs.part2, hs.part1, cp);
  return GenericResult{std::move(o1), std::move(o2), std::move(gs), std::move(hs), std::move(cp)};
}

}  // namespace secx
