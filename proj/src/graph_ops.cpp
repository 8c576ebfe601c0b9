#include "secx/graph_ops.hpp"

#include <set>
#include <string>

#include "secx/errors.hpp"

namespace secx {

std::vector<EdgeId> edges(const InstanceGraph& g, EdgeTypeId etype, Direction dir, NodeId node) {
  if (!g.types().has_edge_type(etype)) {
    throw MalformedInput("unknown edge type " + std::to_string(etype.value));
  }
  if (!g.has_node(node)) {
    throw MalformedInput("unknown node " + std::to_string(node.value));
  }
  return g.edges_at(node, etype, dir);
}

InstanceGraph problem_graph_of(const InstanceGraph& g) {
  InstanceGraph pip(g.types_ptr());
  for (const auto& [id, type] : g.nodes()) {
    if (g.types().is_problem(type)) pip.add_node(id, type);
  }
  for (const auto& [id, e] : g.edges()) {
    if (g.types().is_problem(e.type)) pip.add_edge(id, e.type, e.src, e.tar);
  }
  return pip;
}

std::vector<NodeId> border(const InstanceGraph& pip, const InstanceGraph& h) {
  std::vector<NodeId> result;
  for (const auto& [id, type] : pip.nodes()) {
    if (!h.has_node(id)) continue;
    bool crosses = false;
    for (Direction d : kDirections) {
      for (EdgeId e : h.incident(id, d)) {
        const NodeId other = h.edge(e).endpoint(opposite(d));
        if (!pip.has_node(other)) {
          crosses = true;
          break;
        }
      }
      if (crosses) break;
    }
    if (crosses) result.push_back(id);
  }
  return result;
}

bool same_search_space(const InstanceGraph& g, const InstanceGraph& h) {
  return problem_graph_of(g) == problem_graph_of(h);
}

CrossoverPoint CrossoverPoint::swapped() const {
  return CrossoverPoint{graph, node_to_b, node_to_a, edge_to_b, edge_to_a};
}

CrossoverPoint identity_crossover_point(const InstanceGraph& pip) {
  CrossoverPoint cp{pip, {}, {}, {}, {}};
  for (const auto& [id, type] : pip.nodes()) {
    cp.node_to_a.emplace(id, id);
    cp.node_to_b.emplace(id, id);
  }
  for (const auto& [id, e] : pip.edges()) {
    cp.edge_to_a.emplace(id, id);
    cp.edge_to_b.emplace(id, id);
  }
  return cp;
}

namespace {

// Validates one side of a crossover point: total, injective, type-preserving,
// and compatible with incidences.
void check_embedding(const CrossoverPoint& cp, const std::map<NodeId, NodeId>& nmap,
                     const std::map<EdgeId, EdgeId>& emap, const InstanceGraph& target,
                     const char* side) {
  const std::string where = std::string("crossover point map into ") + side;
  std::set<NodeId> node_images;
  for (const auto& [id, type] : cp.graph.nodes()) {
    const auto it = nmap.find(id);
    if (it == nmap.end()) throw MalformedInput(where + " misses node " + std::to_string(id.value));
    if (!target.has_node(it->second) || target.node_type(it->second) != type) {
      throw MalformedInput(where + " is not typing-compatible at node " + std::to_string(id.value));
    }
    if (!node_images.insert(it->second).second) {
      throw MalformedInput(where + " is not injective on nodes");
    }
  }
  if (nmap.size() != cp.graph.node_count()) {
    throw MalformedInput(where + " maps nodes outside the crossover point");
  }
  std::set<EdgeId> edge_images;
  for (const auto& [id, e] : cp.graph.edges()) {
    const auto it = emap.find(id);
    if (it == emap.end()) throw MalformedInput(where + " misses edge " + std::to_string(id.value));
    if (!target.has_edge(it->second)) {
      throw MalformedInput(where + " maps edge " + std::to_string(id.value) + " to a missing edge");
    }
    const Edge& img = target.edge(it->second);
    if (img.type != e.type || img.src != nmap.at(e.src) || img.tar != nmap.at(e.tar)) {
      throw MalformedInput(where + " is not a typed morphism at edge " + std::to_string(id.value));
    }
    if (!edge_images.insert(it->second).second) {
      throw MalformedInput(where + " is not injective on edges");
    }
  }
  if (emap.size() != cp.graph.edge_count()) {
    throw MalformedInput(where + " maps edges outside the crossover point");
  }
}

}  // namespace

UnionResult union_over_with_maps(const InstanceGraph& a, const InstanceGraph& b,
                                 const CrossoverPoint& cp) {
  check_embedding(cp, cp.node_to_a, cp.edge_to_a, a, "first graph");
  check_embedding(cp, cp.node_to_b, cp.edge_to_b, b, "second graph");

  // b element -> a element for identified pairs.
  std::map<NodeId, NodeId> node_b_to_a;
  for (const auto& [c, bn] : cp.node_to_b) node_b_to_a.emplace(bn, cp.node_to_a.at(c));
  std::map<EdgeId, EdgeId> edge_b_to_a;
  for (const auto& [c, be] : cp.edge_to_b) edge_b_to_a.emplace(be, cp.edge_to_a.at(c));

  UnionResult result{a, {}, {}, {}, {}};
  for (const auto& [id, type] : a.nodes()) result.node_from_a.emplace(id, id);
  for (const auto& [id, e] : a.edges()) result.edge_from_a.emplace(id, id);

  NodeId next_node = a.next_node_id();
  for (const auto& [id, type] : b.nodes()) {
    const auto it = node_b_to_a.find(id);
    if (it != node_b_to_a.end()) {
      result.node_from_b.emplace(id, it->second);
    } else {
      result.graph.add_node(next_node, type);
      result.node_from_b.emplace(id, next_node);
      next_node = NodeId{next_node.value + 1};
    }
  }
  EdgeId next_edge = a.next_edge_id();
  for (const auto& [id, e] : b.edges()) {
    const auto it = edge_b_to_a.find(id);
    if (it != edge_b_to_a.end()) {
      result.edge_from_b.emplace(id, it->second);
    } else {
      result.graph.add_edge(next_edge, e.type, result.node_from_b.at(e.src),
                            result.node_from_b.at(e.tar));
      result.edge_from_b.emplace(id, next_edge);
      next_edge = EdgeId{next_edge.value + 1};
    }
  }
  return result;
}

bool is_subgraph(const InstanceGraph& sub, const InstanceGraph& g) {
  for (const auto& [id, type] : sub.nodes()) {
    if (!g.has_node(id) || g.node_type(id) != type) return false;
  }
  for (const auto& [id, e] : sub.edges()) {
    if (!g.has_edge(id) || !(g.edge(id) == e)) return false;
  }
  return true;
}

}  // namespace secx
