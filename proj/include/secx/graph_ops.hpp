#pragma once

#include <map>
#include <vector>

#include "secx/instance_graph.hpp"

namespace secx {

/// edges(g, etype, dir, node): edges of `etype` whose `dir` endpoint is
/// `node`, ascending by ID. Throws MalformedInput on an unknown node or type.
std::vector<EdgeId> edges(const InstanceGraph& g, EdgeTypeId etype, Direction dir, NodeId node);

/// Induced subgraph of problem-typed elements; IDs are preserved.
InstanceGraph problem_graph_of(const InstanceGraph& g);

/// Problem nodes of `h` with an incident edge (in `h`) whose other endpoint is
/// not a problem node, ascending by ID. `pip` is the problem graph of `h`.
std::vector<NodeId> border(const InstanceGraph& pip, const InstanceGraph& h);

/// True iff both graphs carry the identical problem graph (same IDs, types and
/// incidences). Identity, not isomorphism.
bool same_search_space(const InstanceGraph& g, const InstanceGraph& h);

/// A graph together with injective, typing-compatible morphisms into two
/// other graphs `a` and `b`.
struct CrossoverPoint {
  InstanceGraph graph;
  std::map<NodeId, NodeId> node_to_a;
  std::map<NodeId, NodeId> node_to_b;
  std::map<EdgeId, EdgeId> edge_to_a;
  std::map<EdgeId, EdgeId> edge_to_b;

  /// The crossover point with its two morphisms exchanged.
  CrossoverPoint swapped() const;
};

/// Crossover point consisting of the identity embedding of `pip` into both sides.
CrossoverPoint identity_crossover_point(const InstanceGraph& pip);

/// Union of two graphs over a crossover point, with provenance maps from the
/// input elements to the result elements.
struct UnionResult {
  InstanceGraph graph;
  std::map<NodeId, NodeId> node_from_a;
  std::map<NodeId, NodeId> node_from_b;
  std::map<EdgeId, EdgeId> edge_from_a;
  std::map<EdgeId, EdgeId> edge_from_b;
};

/// Elements of `a` and `b` sharing a preimage in `cp` appear once. `a` keeps
/// its IDs; the remaining elements of `b` receive fresh IDs (above every ID of
/// `a`) in ascending order of their `b` IDs. Throws MalformedInput if the
/// crossover-point maps are not injective typed graph morphisms.
UnionResult union_over_with_maps(const InstanceGraph& a, const InstanceGraph& b,
                                 const CrossoverPoint& cp);

inline InstanceGraph union_over(const InstanceGraph& a, const InstanceGraph& b,
                                const CrossoverPoint& cp) {
  return union_over_with_maps(a, b, cp).graph;
}

/// True iff every element of `sub` exists in `g` with the same type and
/// incidences.
bool is_subgraph(const InstanceGraph& sub, const InstanceGraph& g);

}  // namespace secx
