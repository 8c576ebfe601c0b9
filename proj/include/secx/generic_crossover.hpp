#pragma once

#include <string_view>

#include "secx/decision.hpp"
#include "secx/graph_ops.hpp"
#include "secx/instance_graph.hpp"

namespace secx {

struct SplitConfig {
  double p_part1_only = 0.25;
  double p_part2_only = 0.25;
  double p_both = 0.5;
};

struct GenericConfig {
  SplitConfig split;
  double p_identify_node = 0.3;
  double p_identify_edge = 0.3;

  /// Throws PreconditionError on negative weights or probabilities outside [0, 1].
  void validate() const;
};

/// Two subgraphs covering a graph; both contain its problem graph.
struct Split {
  InstanceGraph part1;
  InstanceGraph part2;
  InstanceGraph split_point;  // part1 ∩ part2
};

/// Every non-problem element draws one of "part1 only" (1), "part2 only" (2)
/// or "both" (3) at site `<prefix>.node@id` / `<prefix>.edge@id`. A node lies
/// in every part that holds it by its own draw or by an incident edge.
Split random_split(const InstanceGraph& g, Decider& decider, const SplitConfig& cfg = {},
                   std::string_view prefix = "split");

/// Crossover point over two split points: the problem graph plus randomly
/// identified same-typed node pairs (greedy, ascending IDs) and edges whose
/// endpoints are both identified.
CrossoverPoint sample_crossover_point(const InstanceGraph& g_point, const InstanceGraph& h_point,
                                      Decider& decider, const GenericConfig& cfg = {});

struct GenericResult {
  InstanceGraph offspring1;  // G1 ∪ H2
  InstanceGraph offspring2;  // G2 ∪ H1
  Split g_split;
  Split h_split;
  CrossoverPoint cp;
};

/// Throws PreconditionError if the parents do not share their problem graph.
GenericResult generic_crossover(const InstanceGraph& g, const InstanceGraph& h,
                                Decider& decider, const GenericConfig& cfg = {});

}  // namespace secx
