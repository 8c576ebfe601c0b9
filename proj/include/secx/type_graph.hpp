#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secx/ids.hpp"

namespace secx {

/// Edge-count bound [lb, ub]; an empty `ub` is the unbounded marker `*`.
struct Multiplicity {
  std::uint32_t lb = 0;
  std::optional<std::uint32_t> ub;

  /// Throws MalformedInput when lb > ub.
  static Multiplicity make(std::uint32_t lb, std::optional<std::uint32_t> ub);
  static Multiplicity any() { return {}; }

  bool satisfies(std::size_t n) const { return n >= lb && (!ub || n <= *ub); }
  bool unbounded() const { return !ub.has_value(); }

  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
};

std::string to_string(const Multiplicity& m);

struct NodeType {
  NodeTypeId id;
  std::string name;
  bool problem = false;

  friend bool operator==(const NodeType&, const NodeType&) = default;
};

struct EdgeType {
  EdgeTypeId id;
  std::string name;
  NodeTypeId src;
  NodeTypeId tar;
  Multiplicity m_src;  // bounds incoming edges at a target node
  Multiplicity m_tar;  // bounds outgoing edges at a source node
  bool problem = false;

  NodeTypeId endpoint(Direction d) const { return d == Direction::Src ? src : tar; }

  /// Bound on the number of edges of this type whose `d` endpoint is a given node.
  const Multiplicity& bound_at(Direction d) const { return d == Direction::Src ? m_tar : m_src; }

  friend bool operator==(const EdgeType&, const EdgeType&) = default;
};

/// Computation type graph with multiplicities: node and edge types, the
/// problem subgraph, and per-edge-type source/target multiplicities.
class TypeGraph {
 public:
  void add_node_type(NodeTypeId id, std::string name, bool problem);
  void add_edge_type(EdgeTypeId id, std::string name, NodeTypeId src, NodeTypeId tar,
                     Multiplicity m_src, Multiplicity m_tar, bool problem);

  bool has_node_type(NodeTypeId id) const { return node_types_.contains(id); }
  bool has_edge_type(EdgeTypeId id) const { return edge_types_.contains(id); }
  const NodeType& node_type(NodeTypeId id) const;
  const EdgeType& edge_type(EdgeTypeId id) const;

  const std::map<NodeTypeId, NodeType>& node_types() const { return node_types_; }
  const std::map<EdgeTypeId, EdgeType>& edge_types() const { return edge_types_; }

  bool is_problem(NodeTypeId id) const { return node_type(id).problem; }
  bool is_problem(EdgeTypeId id) const { return edge_type(id).problem; }

  /// Edge types whose `d` endpoint has node type `t`, ascending by ID.
  const std::vector<EdgeTypeId>& incident_types(NodeTypeId t, Direction d) const;

  std::optional<NodeTypeId> find_node_type(const std::string& name) const;
  std::optional<EdgeTypeId> find_edge_type(const std::string& name) const;

  friend bool operator==(const TypeGraph& a, const TypeGraph& b) {
    return a.node_types_ == b.node_types_ && a.edge_types_ == b.edge_types_;
  }

 private:
  std::map<NodeTypeId, NodeType> node_types_;
  std::map<EdgeTypeId, EdgeType> edge_types_;
  std::map<NodeTypeId, std::vector<EdgeTypeId>> incident_src_;
  std::map<NodeTypeId, std::vector<EdgeTypeId>> incident_tar_;
};

}  // namespace secx
