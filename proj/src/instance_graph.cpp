#include "secx/instance_graph.hpp"

#include <algorithm>
#include <string>

#include "secx/errors.hpp"

namespace secx {
namespace {

void insert_sorted(std::vector<EdgeId>& v, EdgeId id) {
  v.insert(std::upper_bound(v.begin(), v.end(), id), id);
}

void erase_sorted(std::vector<EdgeId>& v, EdgeId id) {
  const auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it != v.end() && *it == id) v.erase(it);
}

}  // namespace

InstanceGraph::InstanceGraph(std::shared_ptr<const TypeGraph> types) : types_(std::move(types)) {
  if (!types_) throw MalformedInput("instance graph requires a type graph");
}

void InstanceGraph::add_node(NodeId id, NodeTypeId type) {
  if (nodes_.contains(id)) {
    throw MalformedInput("duplicate node id " + std::to_string(id.value));
  }
  if (!types_->has_node_type(type)) {
    throw MalformedInput("node " + std::to_string(id.value) + " has unknown type " +
                         std::to_string(type.value));
  }
  nodes_.emplace(id, type);
  incidence_[id];
}

void InstanceGraph::add_edge(EdgeId id, EdgeTypeId type, NodeId src, NodeId tar) {
  if (edges_.contains(id)) {
    throw MalformedInput("duplicate edge id " + std::to_string(id.value));
  }
  if (!types_->has_edge_type(type)) {
    throw MalformedInput("edge " + std::to_string(id.value) + " has unknown type " +
                         std::to_string(type.value));
  }
  const auto src_it = nodes_.find(src);
  const auto tar_it = nodes_.find(tar);
  if (src_it == nodes_.end() || tar_it == nodes_.end()) {
    throw MalformedInput("edge " + std::to_string(id.value) + " references a missing node");
  }
  const EdgeType& et = types_->edge_type(type);
  if (src_it->second != et.src || tar_it->second != et.tar) {
    throw MalformedInput("edge " + std::to_string(id.value) + " of type " + et.name +
                         " violates typing of its endpoints");
  }
  edges_.emplace(id, Edge{type, src, tar});
  insert_sorted(incidence_[src].out, id);
  insert_sorted(incidence_[tar].in, id);
}

void InstanceGraph::remove_edge(EdgeId id) {
  const auto it = edges_.find(id);
  if (it == edges_.end()) {
    throw MalformedInput("cannot remove missing edge " + std::to_string(id.value));
  }
  erase_sorted(incidence_[it->second.src].out, id);
  erase_sorted(incidence_[it->second.tar].in, id);
  edges_.erase(it);
}

void InstanceGraph::remove_node(NodeId id) {
  if (!nodes_.contains(id)) {
    throw MalformedInput("cannot remove missing node " + std::to_string(id.value));
  }
  const Incidence inc = incidence_[id];
  for (EdgeId e : inc.out) remove_edge(e);
  for (EdgeId e : inc.in) {
    if (edges_.contains(e)) remove_edge(e);  // self-loops are already gone
  }
  incidence_.erase(id);
  nodes_.erase(id);
}

NodeTypeId InstanceGraph::node_type(NodeId id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw MalformedInput("unknown node " + std::to_string(id.value));
  return it->second;
}

const Edge& InstanceGraph::edge(EdgeId id) const {
  const auto it = edges_.find(id);
  if (it == edges_.end()) throw MalformedInput("unknown edge " + std::to_string(id.value));
  return it->second;
}

const std::vector<EdgeId>& InstanceGraph::incident(NodeId node, Direction d) const {
  const auto it = incidence_.find(node);
  if (it == incidence_.end()) throw MalformedInput("unknown node " + std::to_string(node.value));
  return d == Direction::Src ? it->second.out : it->second.in;
}

std::vector<EdgeId> InstanceGraph::edges_at(NodeId node, EdgeTypeId type, Direction d) const {
  std::vector<EdgeId> result;
  for (EdgeId e : incident(node, d)) {
    if (edges_.at(e).type == type) result.push_back(e);
  }
  return result;
}

std::size_t InstanceGraph::count_at(NodeId node, EdgeTypeId type, Direction d) const {
  std::size_t n = 0;
  for (EdgeId e : incident(node, d)) {
    if (edges_.at(e).type == type) ++n;
  }
  return n;
}

NodeId InstanceGraph::next_node_id() const {
  return nodes_.empty() ? NodeId{0} : NodeId{nodes_.rbegin()->first.value + 1};
}

EdgeId InstanceGraph::next_edge_id() const {
  return edges_.empty() ? EdgeId{0} : EdgeId{edges_.rbegin()->first.value + 1};
}

}  // namespace secx
