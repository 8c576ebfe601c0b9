#pragma once

#include <map>
#include <memory>
#include <vector>

#include "secx/ids.hpp"
#include "secx/type_graph.hpp"

namespace secx {

struct Edge {
  EdgeTypeId type;
  NodeId src;
  NodeId tar;

  NodeId endpoint(Direction d) const { return d == Direction::Src ? src : tar; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A computation graph typed over a TypeGraph. Typing is checked on every
/// insertion, so a constructed InstanceGraph is always well-typed. An element
/// is a problem element iff its type belongs to the problem type graph.
class InstanceGraph {
 public:
  explicit InstanceGraph(std::shared_ptr<const TypeGraph> types);

  void add_node(NodeId id, NodeTypeId type);
  void add_edge(EdgeId id, EdgeTypeId type, NodeId src, NodeId tar);
  void remove_edge(EdgeId id);
  /// Removes the node together with all of its incident edges.
  void remove_node(NodeId id);

  bool has_node(NodeId id) const { return nodes_.contains(id); }
  bool has_edge(EdgeId id) const { return edges_.contains(id); }
  NodeTypeId node_type(NodeId id) const;
  const Edge& edge(EdgeId id) const;

  const std::map<NodeId, NodeTypeId>& nodes() const { return nodes_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// All edges whose `d` endpoint is `node`, ascending by ID.
  const std::vector<EdgeId>& incident(NodeId node, Direction d) const;

  /// Edges of type `type` whose `d` endpoint is `node`, ascending by ID.
  std::vector<EdgeId> edges_at(NodeId node, EdgeTypeId type, Direction d) const;
  std::size_t count_at(NodeId node, EdgeTypeId type, Direction d) const;

  bool is_problem(NodeId id) const { return types_->is_problem(node_type(id)); }
  bool is_problem(EdgeId id) const { return types_->is_problem(edge(id).type); }

  /// Smallest IDs strictly greater than every ID in use.
  NodeId next_node_id() const;
  EdgeId next_edge_id() const;

  const TypeGraph& types() const { return *types_; }
  const std::shared_ptr<const TypeGraph>& types_ptr() const { return types_; }

  /// Element-for-element equality (same IDs, types and incidences).
  friend bool operator==(const InstanceGraph& a, const InstanceGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  struct Incidence {
    std::vector<EdgeId> out;
    std::vector<EdgeId> in;
  };

  std::shared_ptr<const TypeGraph> types_;
  std::map<NodeId, NodeTypeId> nodes_;
  std::map<EdgeId, Edge> edges_;
  std::map<NodeId, Incidence> incidence_;
};

}  // namespace secx
