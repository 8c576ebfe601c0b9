#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>
#include <string>

#include "secx/instance_graph.hpp"
#include "secx/type_graph.hpp"

// Line-oriented text formats for type graphs and instance graphs.
//
//   typegraph v1
//   ntype <id> <name> problem|solution
//   etype <id> <name> <src_ntype> <tar_ntype> <src_lb> <src_ub|*> <tar_lb> <tar_ub|*> problem|solution
//
//   instance v1 typegraph=<path-or-name>
//   node <id> <ntype>
//   edge <id> <etype> <src_node> <tar_node>
//
// Blank lines and lines starting with '#' are ignored. Any other problem is
// reported as MalformedInput carrying the 1-based line number.

namespace secx {

std::shared_ptr<const TypeGraph> parse_type_graph(std::istream& in);
void write_type_graph(std::ostream& out, const TypeGraph& tg);

struct ParsedInstance {
  std::string typegraph_ref;
  InstanceGraph graph;
};

/// Reads only the header line and returns the `typegraph=` reference.
std::string read_typegraph_ref(std::istream& in);

ParsedInstance parse_instance(std::istream& in, std::shared_ptr<const TypeGraph> types);
void write_instance(std::ostream& out, const InstanceGraph& g, const std::string& typegraph_ref);

std::shared_ptr<const TypeGraph> load_type_graph(const std::filesystem::path& path);
/// Loads an instance; with no type graph given, resolves the header reference
/// relative to the instance file's directory.
ParsedInstance load_instance(const std::filesystem::path& path,
                             std::shared_ptr<const TypeGraph> types = nullptr);

std::string to_text(const InstanceGraph& g, const std::string& typegraph_ref);
std::string to_text(const TypeGraph& tg);

}  // namespace secx
