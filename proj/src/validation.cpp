#include "secx/validation.hpp"

#include <algorithm>
#include <string>

#include "secx/errors.hpp"

namespace secx {

std::size_t ViolationReport::count(BoundKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

ViolationReport check_multiplicities(const InstanceGraph& g) {
  const TypeGraph& tg = g.types();
  ViolationReport report;
  for (const auto& [node, ntype] : g.nodes()) {
    // Gather (edge type, direction) pairs in edge-type order so that entries
    // come out sorted by type first.
    std::vector<std::pair<EdgeTypeId, Direction>> slots;
    for (Direction d : kDirections) {
      for (EdgeTypeId t : tg.incident_types(ntype, d)) slots.emplace_back(t, d);
    }
    std::sort(slots.begin(), slots.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second == Direction::Src;
    });
    for (const auto& [etype, d] : slots) {
      const Multiplicity& m = tg.edge_type(etype).bound_at(d);
      const std::size_t n = g.count_at(node, etype, d);
      if (n < m.lb) {
        report.entries.push_back({node, etype, d, n, BoundKind::Lower, m.lb});
      } else if (m.ub && n > *m.ub) {
        report.entries.push_back({node, etype, d, n, BoundKind::Upper, *m.ub});
      }
    }
  }
  return report;
}

ViolationReport check_multiplicities(const InstanceGraph& g, const TypeGraph& tg) {
  for (const auto& [node, ntype] : g.nodes()) {
    if (!tg.has_node_type(ntype)) {
      throw MalformedInput("node " + std::to_string(node.value) + " is not typed over the type graph");
    }
  }
  for (const auto& [id, e] : g.edges()) {
    if (!tg.has_edge_type(e.type)) {
      throw MalformedInput("edge " + std::to_string(id.value) + " is not typed over the type graph");
    }
    const EdgeType& et = tg.edge_type(e.type);
    if (g.node_type(e.src) != et.src || g.node_type(e.tar) != et.tar) {
      throw MalformedInput("edge " + std::to_string(id.value) + " violates typing");
    }
  }
  return check_multiplicities(g);
}

void write_report(std::ostream& os, const ViolationReport& report, const TypeGraph& tg) {
  for (const Violation& v : report.entries) {
    os << "violation node=" << v.node << " etype=" << tg.edge_type(v.edge_type).name
       << " dir=" << to_string(v.direction) << " observed=" << v.observed
       << " bound=" << (v.kind == BoundKind::Lower ? "lower" : "upper")
       << " required=" << v.required << '\n';
  }
  os << report.size() << " violations\n";
}

}  // namespace secx
