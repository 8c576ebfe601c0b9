#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace secx {

// Opaque integer identifier. The tag keeps node, edge and type IDs apart.
template <typename Tag, typename Rep = std::uint64_t>
struct StrongId {
  Rep value{};

  constexpr StrongId() = default;
  constexpr explicit StrongId(Rep v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
  friend std::ostream& operator<<(std::ostream& os, StrongId id) { return os << id.value; }
};

using NodeId = StrongId<struct NodeIdTag>;
using EdgeId = StrongId<struct EdgeIdTag>;
using NodeTypeId = StrongId<struct NodeTypeIdTag, std::uint32_t>;
using EdgeTypeId = StrongId<struct EdgeTypeIdTag, std::uint32_t>;

enum class Direction { Src, Tar };

constexpr Direction opposite(Direction d) {
  return d == Direction::Src ? Direction::Tar : Direction::Src;
}

constexpr const char* to_string(Direction d) { return d == Direction::Src ? "src" : "tar"; }

inline constexpr Direction kDirections[] = {Direction::Src, Direction::Tar};

}  // namespace secx

template <typename Tag, typename Rep>
struct std::hash<secx::StrongId<Tag, Rep>> {
  std::size_t operator()(secx::StrongId<Tag, Rep> id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
