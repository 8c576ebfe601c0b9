#include "secx/type_graph.hpp"

#include <algorithm>

#include "secx/errors.hpp"

namespace secx {

Multiplicity Multiplicity::make(std::uint32_t lb, std::optional<std::uint32_t> ub) {
  if (ub && lb > *ub) {
    throw MalformedInput("multiplicity lower bound " + std::to_string(lb) +
                         " exceeds upper bound " + std::to_string(*ub));
  }
  return Multiplicity{lb, ub};
}

std::string to_string(const Multiplicity& m) {
  return "[" + std::to_string(m.lb) + "," + (m.ub ? std::to_string(*m.ub) : std::string("*")) +
         "]";
}

void TypeGraph::add_node_type(NodeTypeId id, std::string name, bool problem) {
  if (node_types_.contains(id)) {
    throw MalformedInput("duplicate node type id " + std::to_string(id.value));
  }
  node_types_.emplace(id, NodeType{id, std::move(name), problem});
  incident_src_[id];
  incident_tar_[id];
}

void TypeGraph::add_edge_type(EdgeTypeId id, std::string name, NodeTypeId src, NodeTypeId tar,
                              Multiplicity m_src, Multiplicity m_tar, bool problem) {
  if (edge_types_.contains(id)) {
    throw MalformedInput("duplicate edge type id " + std::to_string(id.value));
  }
  const auto src_it = node_types_.find(src);
  const auto tar_it = node_types_.find(tar);
  if (src_it == node_types_.end() || tar_it == node_types_.end()) {
    throw MalformedInput("edge type " + std::to_string(id.value) +
                         " references an unknown node type");
  }
  if (problem && !(src_it->second.problem && tar_it->second.problem)) {
    throw MalformedInput("problem edge type " + std::to_string(id.value) +
                         " connects a solution node type");
  }
  // Re-validate in case the caller filled the struct directly.
  m_src = Multiplicity::make(m_src.lb, m_src.ub);
  m_tar = Multiplicity::make(m_tar.lb, m_tar.ub);
  edge_types_.emplace(id, EdgeType{id, std::move(name), src, tar, m_src, m_tar, problem});

  auto insert_sorted = [id](std::vector<EdgeTypeId>& v) {
    v.insert(std::upper_bound(v.begin(), v.end(), id), id);
  };
  insert_sorted(incident_src_[src]);
  insert_sorted(incident_tar_[tar]);
}

const NodeType& TypeGraph::node_type(NodeTypeId id) const {
  const auto it = node_types_.find(id);
  if (it == node_types_.end()) {
    throw MalformedInput("unknown node type id " + std::to_string(id.value));
  }
  return it->second;
}

const EdgeType& TypeGraph::edge_type(EdgeTypeId id) const {
  const auto it = edge_types_.find(id);
  if (it == edge_types_.end()) {
    throw MalformedInput("unknown edge type id " + std::to_string(id.value));
  }
  return it->second;
}

const std::vector<EdgeTypeId>& TypeGraph::incident_types(NodeTypeId t, Direction d) const {
  const auto& index = d == Direction::Src ? incident_src_ : incident_tar_;
  const auto it = index.find(t);
  if (it == index.end()) {
    throw MalformedInput("unknown node type id " + std::to_string(t.value));
  }
  return it->second;
}

std::optional<NodeTypeId> TypeGraph::find_node_type(const std::string& name) const {
  for (const auto& [id, nt] : node_types_) {
    if (nt.name == name) return id;
  }
  return std::nullopt;
}

std::optional<EdgeTypeId> TypeGraph::find_edge_type(const std::string& name) const {
  for (const auto& [id, et] : edge_types_) {
    if (et.name == name) return id;
  }
  return std::nullopt;
}

}  // namespace secx
