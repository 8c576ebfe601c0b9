#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "secx/instance_graph.hpp"

namespace secx {

enum class BoundKind { Lower, Upper };

struct Violation {
  NodeId node;
  EdgeTypeId edge_type;
  Direction direction;  // the role `node` plays for the counted edges
  std::size_t observed = 0;
  BoundKind kind = BoundKind::Lower;
  std::uint32_t required = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ViolationReport {
  std::vector<Violation> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  std::size_t count(BoundKind kind) const;
};

/// Checks every node against the multiplicities of every edge type it can
/// carry. Outgoing edges are bounded by m_tar of their type, incoming edges by
/// m_src. Entries are ordered by node, edge type, then direction.
ViolationReport check_multiplicities(const InstanceGraph& g);

/// Same as above, but first verifies that `g` is typed over `tg`
/// (MalformedInput otherwise).
ViolationReport check_multiplicities(const InstanceGraph& g, const TypeGraph& tg);

inline bool is_feasible(const InstanceGraph& g) { return check_multiplicities(g).empty(); }

/// One line per entry followed by "<n> violations".
void write_report(std::ostream& os, const ViolationReport& report, const TypeGraph& tg);

}  // namespace secx
