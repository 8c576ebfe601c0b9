#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>

#include "secx/decision.hpp"
#include "secx/graph_ops.hpp"
#include "secx/instance_graph.hpp"

namespace secx {

struct CrossoverConfig {
  double p_node_gsub = 0.5;
  double p_node_hsub = 0.5;
  double p_edge_hsub = 0.5;
  double p_swap = 0.5;
  double p_node_cp = 0.5;
  double p_edge_cp = 0.5;
  double p_free_node_cp = 0.3;
  bool compute_second_offspring = false;

  /// Throws PreconditionError unless every probability lies in [0, 1].
  void validate() const;
};

/// An H edge that entered hsub in exchange for a gsub edge at a crossover
/// point node. The removed G edge keeps a slot reserved at its far endpoint so
/// that it can be restored if the replacement is removed again.
struct SwapRecord {
  EdgeId g_edge;
  EdgeId h_edge;
  NodeId x_g;     // crossover point node (G side) where the swap happened
  Direction dir;  // role of x_g for both edges
};

struct CrossoverState {
  std::set<NodeId> gsub_nodes;
  std::set<EdgeId> gsub_edges;
  std::set<NodeId> hsub_nodes;
  std::set<EdgeId> hsub_edges;

  std::map<NodeId, NodeId> node_h_to_g;
  std::map<NodeId, NodeId> node_g_to_h;
  std::map<EdgeId, EdgeId> edge_h_to_g;
  std::map<EdgeId, EdgeId> edge_g_to_h;

  std::deque<NodeId> queue;
  std::map<NodeId, int> visit_count;

  std::set<EdgeId> swapped_edges;
  std::map<EdgeId, SwapRecord> swaps;  // keyed by the replacement H edge

  std::set<NodeId> decided;  // H nodes whose inclusion was settled during CP construction
  std::set<NodeId> banned;   // H nodes dropped by cascading removal
  std::set<NodeId> settled;  // free H nodes that met their minimum
  std::set<NodeId> free_pending;

  bool paired(NodeId h) const { return node_h_to_g.contains(h); }
  int max_visits() const;
};

struct SecureCrossoverResult {
  InstanceGraph offspring;
  std::optional<InstanceGraph> offspring2;
  DecisionTrace trace;
  CrossoverState state;
  InstanceGraph gsub;
  InstanceGraph hsub;
  CrossoverPoint cp;
  std::map<NodeId, NodeId> node_from_g;  // gsub node -> offspring node
  std::map<NodeId, NodeId> node_from_h;  // hsub node -> offspring node
};

/// One run of the secure crossover on a pair of parents. The individual steps
/// are public so that tests can drive and inspect them; `run` performs them in
/// order.
class SecureCrossover {
 public:
  /// Throws PreconditionError if the parents do not share their problem graph
  /// or type graph.
  SecureCrossover(const InstanceGraph& g, const InstanceGraph& h, const CrossoverConfig& cfg,
                  Decider& decider);

  SecureCrossoverResult run();

  void create_gsub();
  void include_adjacent_edges(NodeId x, std::deque<NodeId>& pending);
  /// hsub = cp = problem graph, queue = border.
  void init_cp();
  void construct_cp();
  bool random_edge_swap(NodeId x, EdgeId e_h, Direction dir);
  bool resolve_breach(NodeId x, EdgeId e_h, Direction dir);
  bool include_into_cp(NodeId x, EdgeId e_h, Direction dir);
  bool random_node_to_cp(NodeId y);
  bool random_edge_to_cp(NodeId x, EdgeId e_h, Direction dir);
  /// Would merging the H node `x` with the G node `z` keep every upper bound?
  bool verify_inclusion(NodeId x, NodeId z) const;
  void process_free_nodes();
  bool ensure_minimum_free_node(NodeId x);
  void random_include_more_edges(NodeId x);
  void cascade_remove(NodeId x);
  SecureCrossoverResult finish() const;

  InstanceGraph gsub_graph() const;
  InstanceGraph hsub_graph() const;
  CrossoverPoint crossover_point() const;

  const CrossoverState& state() const { return st_; }
  CrossoverState& state() { return st_; }

  /// A node of the offspring under construction: a G node (possibly paired
  /// with an H node) or an H node outside the crossover point.
  struct ONode {
    bool g_side;
    NodeId id;
    auto operator<=>(const ONode&) const = default;
  };
  struct Delta {
    ONode node;
    EdgeTypeId type;
    Direction dir;
    int amount;
  };

  ONode onode_of_h(NodeId h) const;
  std::size_t count(ONode n, EdgeTypeId t, Direction d) const;
  std::size_t reserved(ONode n, EdgeTypeId t, Direction d) const;
  std::size_t stable(ONode n, EdgeTypeId t, Direction d) const;
  std::size_t target(ONode n, EdgeTypeId t, Direction d) const;
  std::optional<std::size_t> allowance(ONode n, EdgeTypeId t, Direction d) const;
  bool fits(std::span<const Delta> deltas) const;

 private:
  enum class Step { Next, SkipType };
  Step process_cp_edge(NodeId x, EdgeId e_h, EdgeTypeId t, Direction d);

  std::size_t gsub_count(NodeId g, EdgeTypeId t, Direction d) const;
  std::size_t hsub_count(NodeId h, EdgeTypeId t, Direction d) const;
  std::size_t hsub_unpaired_count(NodeId h, EdgeTypeId t, Direction d) const;
  bool fits_raw(NodeId x, EdgeId e_h, Direction d, bool only_far) const;
  void add_h_node(NodeId y);
  void pair_nodes(NodeId h, NodeId g);
  void pair_edges(EdgeId h, EdgeId g);
  void enqueue_free(NodeId y);
  void visit(NodeId h);
  std::vector<NodeId> free_partners(NodeId x) const;

  const InstanceGraph& g_;
  const InstanceGraph& h_;
  CrossoverConfig cfg_;
  Decider& dec_;
  CrossoverState st_;
};

SecureCrossoverResult secure_crossover(const InstanceGraph& g, const InstanceGraph& h,
                                       const CrossoverConfig& cfg, Decider& decider);

/// Runs only the construction of Gsub and returns it.
InstanceGraph create_gsub(const InstanceGraph& g, const CrossoverConfig& cfg, Decider& decider);

}  // namespace secx
