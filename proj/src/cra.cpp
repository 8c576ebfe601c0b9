#include "secx/cra.hpp"

#include <algorithm>

#include "secx/graph_ops.hpp"

namespace secx::cra {

std::shared_ptr<const TypeGraph> type_graph() {
  static const std::shared_ptr<const TypeGraph> tg = [] {
    auto t = std::make_shared<TypeGraph>();
    t->add_node_type(kFeature, "Feature", true);
    t->add_node_type(kClass, "Class", false);
    t->add_edge_type(kDependsOn, "dependsOn", kFeature, kFeature, Multiplicity::any(),
                     Multiplicity::any(), true);
    t->add_edge_type(kEncapsulates, "encapsulates", kClass, kFeature, Multiplicity::make(1, 1),
                     Multiplicity::make(1, std::nullopt), false);
    return std::shared_ptr<const TypeGraph>(std::move(t));
  }();
  return tg;
}

std::vector<NodeId> classes_of(const InstanceGraph& g, NodeId feature) {
  std::vector<NodeId> result;
  for (EdgeId e : g.edges_at(feature, kEncapsulates, Direction::Tar)) {
    result.push_back(g.edge(e).src);
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

double fitness(const InstanceGraph& g) {
  std::size_t deps = 0, internal = 0, external = 0, unassigned = 0;
  for (const auto& [id, type] : g.nodes()) {
    if (type == kFeature && classes_of(g, id).empty()) ++unassigned;
  }
  for (const auto& [id, e] : g.edges()) {
    if (e.type != kDependsOn) continue;
    ++deps;
    const auto a = classes_of(g, e.src);
    const auto b = classes_of(g, e.tar);
    if (a.empty() || b.empty()) continue;
    std::vector<NodeId> shared;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
    if (shared.empty()) {
      ++external;
    } else {
      ++internal;
    }
  }
  const double denom = static_cast<double>(std::max<std::size_t>(1, deps));
  return static_cast<double>(internal) / denom - static_cast<double>(external) / denom -
         static_cast<double>(unassigned);
}

Fixtures fixtures() {
  const auto tg = type_graph();
  InstanceGraph pip(tg);
  for (std::uint64_t f : {1, 2, 3}) pip.add_node(NodeId{f}, kFeature);
  pip.add_edge(EdgeId{1}, kDependsOn, NodeId{1}, NodeId{2});

  InstanceGraph g = pip;
  g.add_node(NodeId{10}, kClass);
  for (std::uint64_t f : {1, 2, 3}) g.add_edge(EdgeId{10 + f}, kEncapsulates, NodeId{10}, NodeId{f});

  InstanceGraph h = pip;
  for (std::uint64_t f : {1, 2, 3}) {
    h.add_node(NodeId{10 + 10 * f}, kClass);
    h.add_edge(EdgeId{11 + 10 * f}, kEncapsulates, NodeId{10 + 10 * f}, NodeId{f});
  }

  InstanceGraph g1h2 = pip;
  g1h2.add_node(NodeId{10}, kClass);
  g1h2.add_node(NodeId{11}, kClass);
  g1h2.add_edge(EdgeId{11}, kEncapsulates, NodeId{10}, NodeId{1});
  g1h2.add_edge(EdgeId{12}, kEncapsulates, NodeId{10}, NodeId{2});
  g1h2.add_edge(EdgeId{13}, kEncapsulates, NodeId{11}, NodeId{3});

  DecisionTrace secure;
  secure.add("hsub.node@20", 1);
  secure.add("hsub.edge@21", 1);
  secure.add("swap@21", 0);
  secure.add("hsub.node@30", 0);
  secure.add("hsub.node@40", 1);
  secure.add("hsub.edge@41", 1);
  secure.add("swap@41", 1);
  secure.add("cp.node@40", 0);
  secure.add("free.cp@40", 0);

  DecisionTrace generic;
  generic.add("gsplit.node@10", 3);
  generic.add("gsplit.edge@11", 3);
  generic.add("gsplit.edge@12", 3);
  generic.add("gsplit.edge@13", 2);
  generic.add("hsplit.node@20", 3);
  generic.add("hsplit.node@30", 1);
  generic.add("hsplit.node@40", 3);
  generic.add("hsplit.edge@21", 3);
  generic.add("hsplit.edge@31", 1);
  generic.add("hsplit.edge@41", 2);
  generic.add("gcp.node@10", 1);
  generic.add("gcp.node.pick@10", 20);
  generic.add("gcp.edge@11", 1);

  return Fixtures{std::move(g), std::move(h), std::move(g1h2), std::move(secure),
                  std::move(generic)};
}

bool move_feature(InstanceGraph& g, EdgeId edge, NodeId target) {
  const Edge e = g.edge(edge);
  if (e.type != kEncapsulates || e.src == target) return false;
  if (g.count_at(e.src, kEncapsulates, Direction::Src) < 2) return false;
  g.remove_edge(edge);
  g.add_edge(edge, kEncapsulates, target, e.tar);
  return true;
}

std::optional<NodeId> create_class_with_feature(InstanceGraph& g, NodeId feature) {
  const auto owners = g.edges_at(feature, kEncapsulates, Direction::Tar);
  if (owners.size() != 1) return std::nullopt;
  const NodeId c = g.next_node_id();
  const NodeId old = g.edge(owners.front()).src;
  if (g.count_at(old, kEncapsulates, Direction::Src) < 2) return std::nullopt;
  g.add_node(c, kClass);
  g.remove_edge(owners.front());
  g.add_edge(owners.front(), kEncapsulates, c, feature);
  return c;
}

bool delete_empty_class(InstanceGraph& g, NodeId c) {
  if (!g.has_node(c) || g.node_type(c) != kClass) return false;
  if (!g.incident(c, Direction::Src).empty() || !g.incident(c, Direction::Tar).empty()) {
    return false;
  }
  g.remove_node(c);
  return true;
}

namespace {

std::vector<NodeId> nodes_of(const InstanceGraph& g, NodeTypeId type) {
  std::vector<NodeId> result;
  for (const auto& [id, t] : g.nodes()) {
    if (t == type) result.push_back(id);
  }
  return result;
}

std::vector<EdgeId> edges_of(const InstanceGraph& g, EdgeTypeId type) {
  std::vector<EdgeId> result;
  for (const auto& [id, e] : g.edges()) {
    if (e.type == type) result.push_back(id);
  }
  return result;
}

}  // namespace

std::vector<Mutation> mutations() {
  return {
      {"moveFeature",
       [](InstanceGraph& g, Rng& rng) {
         const auto edges = edges_of(g, kEncapsulates);
         const auto classes = nodes_of(g, kClass);
         if (edges.empty() || classes.size() < 2) return false;
         const EdgeId e = edges[rng.below(edges.size())];
         const NodeId target = classes[rng.below(classes.size())];
         return move_feature(g, e, target);
       }},
      {"createClassWithFeature",
       [](InstanceGraph& g, Rng& rng) {
         const auto features = nodes_of(g, kFeature);
         if (features.empty()) return false;
         return create_class_with_feature(g, features[rng.below(features.size())]).has_value();
       }},
      {"deleteEmptyClass",
       [](InstanceGraph& g, Rng& rng) {
         std::vector<NodeId> empty;
         for (NodeId c : nodes_of(g, kClass)) {
           if (g.incident(c, Direction::Src).empty() && g.incident(c, Direction::Tar).empty()) {
             empty.push_back(c);
           }
         }
         if (empty.empty()) return false;
         return delete_empty_class(g, empty[rng.below(empty.size())]);
       }},
  };
}

InstanceGraph random_problem(int features, double dependency_probability, Rng& rng) {
  InstanceGraph g(type_graph());
  for (int f = 0; f < features; ++f) g.add_node(NodeId{static_cast<std::uint64_t>(f)}, kFeature);
  std::uint64_t next_edge = 0;
  for (int u = 0; u < features; ++u) {
    for (int v = 0; v < features; ++v) {
      if (u == v || !rng.bernoulli(dependency_probability)) continue;
      g.add_edge(EdgeId{next_edge++}, kDependsOn, NodeId{static_cast<std::uint64_t>(u)},
                 NodeId{static_cast<std::uint64_t>(v)});
    }
  }
  return g;
}

InstanceGraph random_solution(const InstanceGraph& problem, Rng& rng) {
  InstanceGraph g = problem;
  std::vector<NodeId> features = nodes_of(problem, kFeature);
  if (features.empty()) return g;
  rng.shuffle(features);
  const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(features.size())));
  const NodeId first_class = g.next_node_id();
  EdgeId next_edge = g.next_edge_id();
  for (std::size_t c = 0; c < k; ++c) g.add_node(NodeId{first_class.value + c}, kClass);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t c = i < k ? i : rng.below(k);
    g.add_edge(next_edge, kEncapsulates, NodeId{first_class.value + c}, features[i]);
    next_edge = EdgeId{next_edge.value + 1};
  }
  return g;
}

}  // namespace secx::cra
