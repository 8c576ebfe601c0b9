#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "secx/decision.hpp"
#include "secx/instance_graph.hpp"
#include "secx/type_graph.hpp"

namespace secx {

struct TypeGraphShape {
  int max_node_types = 6;
  int max_edge_types = 8;
  double p_problem_edge = 0.3;
};

/// Bounds drawn independently per edge end from
/// {[0,*], [0,1], [1,1], [1,*], [1,2], [2,3]}.
std::shared_ptr<const TypeGraph> random_type_graph(Rng& rng, const TypeGraphShape& shape = {});

/// A feasible problem graph over `tg` with at least one node per problem node
/// type, or nullopt if none was found.
std::optional<InstanceGraph> random_problem_graph(std::shared_ptr<const TypeGraph> tg, Rng& rng,
                                                  int max_nodes);

/// Extends `pip` by solution nodes and edges to a feasible graph with at most
/// `max_nodes` nodes, or nullopt when the sampled node counts admit none.
/// Unbounded multiplicities are treated as lb + 3 while sampling degrees.
std::optional<InstanceGraph> random_feasible_solution(const InstanceGraph& pip, Rng& rng,
                                                      int max_nodes, int attempts = 100);

/// Randomly removes, adds and rewires solution elements of `g` (never touching
/// problem elements) until it violates at least one multiplicity. Returns
/// nothing if no violation could be produced.
std::optional<InstanceGraph> make_infeasible(const InstanceGraph& g, Rng& rng, int max_steps = 20);

}  // namespace secx
