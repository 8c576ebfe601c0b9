#include "secx/text_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "secx/errors.hpp"

namespace secx {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
  return tokens;
}

bool skippable(const std::vector<std::string>& tokens) {
  return tokens.empty() || tokens.front().front() == '#';
}

template <typename Int>
Int parse_int(const std::string& tok, std::size_t line, const char* what) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw MalformedInput(std::string("invalid ") + what + " '" + tok + "'", line);
  }
  return value;
}

std::optional<std::uint32_t> parse_upper(const std::string& tok, std::size_t line) {
  if (tok == "*") return std::nullopt;
  return parse_int<std::uint32_t>(tok, line, "upper bound");
}

bool parse_kind(const std::string& tok, std::size_t line) {
  if (tok == "problem") return true;
  if (tok == "solution") return false;
  throw MalformedInput("expected 'problem' or 'solution', got '" + tok + "'", line);
}

void expect_arity(const std::vector<std::string>& tokens, std::size_t n, std::size_t line) {
  if (tokens.size() != n) {
    throw MalformedInput("record '" + tokens.front() + "' expects " + std::to_string(n - 1) +
                             " fields, got " + std::to_string(tokens.size() - 1),
                         line);
  }
}

// Re-throws construction errors with the offending line attached.
template <typename F>
void at_line(std::size_t line, F&& f) {
  try {
    f();
  } catch (const MalformedInput& e) {
    if (e.line() != 0) throw;
    throw MalformedInput(e.what(), line);
  }
}

std::string ub_text(const Multiplicity& m) { return m.ub ? std::to_string(*m.ub) : "*"; }

}  // namespace

std::shared_ptr<const TypeGraph> parse_type_graph(std::istream& in) {
  auto tg = std::make_shared<TypeGraph>();
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (skippable(tokens)) continue;
    if (!header) {
      if (tokens.size() != 2 || tokens[0] != "typegraph" || tokens[1] != "v1") {
        throw MalformedInput("expected header 'typegraph v1'", lineno);
      }
      header = true;
      continue;
    }
    const std::string& kind = tokens[0];
    if (kind == "ntype") {
      expect_arity(tokens, 4, lineno);
      const auto id = parse_int<std::uint32_t>(tokens[1], lineno, "node type id");
      const bool problem = parse_kind(tokens[3], lineno);
      at_line(lineno, [&] { tg->add_node_type(NodeTypeId{id}, tokens[2], problem); });
    } else if (kind == "etype") {
      expect_arity(tokens, 10, lineno);
      const auto id = parse_int<std::uint32_t>(tokens[1], lineno, "edge type id");
      const auto src = parse_int<std::uint32_t>(tokens[3], lineno, "source node type");
      const auto tar = parse_int<std::uint32_t>(tokens[4], lineno, "target node type");
      const auto src_lb = parse_int<std::uint32_t>(tokens[5], lineno, "lower bound");
      const auto src_ub = parse_upper(tokens[6], lineno);
      const auto tar_lb = parse_int<std::uint32_t>(tokens[7], lineno, "lower bound");
      const auto tar_ub = parse_upper(tokens[8], lineno);
      const bool problem = parse_kind(tokens[9], lineno);
      at_line(lineno, [&] {
        tg->add_edge_type(EdgeTypeId{id}, tokens[2], NodeTypeId{src}, NodeTypeId{tar},
                          Multiplicity::make(src_lb, src_ub), Multiplicity::make(tar_lb, tar_ub),
                          problem);
      });
    } else {
      throw MalformedInput("unknown record kind '" + kind + "'", lineno);
    }
  }
  if (!header) throw MalformedInput("missing header 'typegraph v1'", lineno == 0 ? 1 : lineno);
  return tg;
}

void write_type_graph(std::ostream& out, const TypeGraph& tg) {
  out << "typegraph v1\n";
  for (const auto& [id, nt] : tg.node_types()) {
    out << "ntype " << id << ' ' << nt.name << ' ' << (nt.problem ? "problem" : "solution")
        << '\n';
  }
  for (const auto& [id, et] : tg.edge_types()) {
    out << "etype " << id << ' ' << et.name << ' ' << et.src << ' ' << et.tar << ' '
        << et.m_src.lb << ' ' << ub_text(et.m_src) << ' ' << et.m_tar.lb << ' '
        << ub_text(et.m_tar) << ' ' << (et.problem ? "problem" : "solution") << '\n';
  }
}

namespace {

std::string parse_instance_header(const std::vector<std::string>& tokens, std::size_t lineno) {
  static const std::string prefix = "typegraph=";
  if (tokens.size() != 3 || tokens[0] != "instance" || tokens[1] != "v1" ||
      tokens[2].rfind(prefix, 0) != 0 || tokens[2].size() == prefix.size()) {
    throw MalformedInput("expected header 'instance v1 typegraph=<ref>'", lineno);
  }
  return tokens[2].substr(prefix.size());
}

}  // namespace

std::string read_typegraph_ref(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (skippable(tokens)) continue;
    return parse_instance_header(tokens, lineno);
  }
  throw MalformedInput("missing header 'instance v1 typegraph=<ref>'", 1);
}

ParsedInstance parse_instance(std::istream& in, std::shared_ptr<const TypeGraph> types) {
  ParsedInstance result{"", InstanceGraph(std::move(types))};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  // Edges may reference nodes declared further down; resolve them at the end.
  struct PendingEdge {
    std::size_t line;
    std::uint64_t id, src, tar;
    std::uint32_t type;
  };
  std::vector<PendingEdge> pending;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (skippable(tokens)) continue;
    if (!header) {
      result.typegraph_ref = parse_instance_header(tokens, lineno);
      header = true;
      continue;
    }
    const std::string& kind = tokens[0];
    if (kind == "node") {
      expect_arity(tokens, 3, lineno);
      const auto id = parse_int<std::uint64_t>(tokens[1], lineno, "node id");
      const auto type = parse_int<std::uint32_t>(tokens[2], lineno, "node type");
      at_line(lineno, [&] { result.graph.add_node(NodeId{id}, NodeTypeId{type}); });
    } else if (kind == "edge") {
      expect_arity(tokens, 5, lineno);
      pending.push_back({lineno, parse_int<std::uint64_t>(tokens[1], lineno, "edge id"),
                         parse_int<std::uint64_t>(tokens[3], lineno, "source node"),
                         parse_int<std::uint64_t>(tokens[4], lineno, "target node"),
                         parse_int<std::uint32_t>(tokens[2], lineno, "edge type")});
    } else {
      throw MalformedInput("unknown record kind '" + kind + "'", lineno);
    }
  }
  if (!header) {
    throw MalformedInput("missing header 'instance v1 typegraph=<ref>'", lineno == 0 ? 1 : lineno);
  }
  for (const PendingEdge& p : pending) {
    at_line(p.line, [&] {
      result.graph.add_edge(EdgeId{p.id}, EdgeTypeId{p.type}, NodeId{p.src}, NodeId{p.tar});
    });
  }
  return result;
}

void write_instance(std::ostream& out, const InstanceGraph& g, const std::string& typegraph_ref) {
  out << "instance v1 typegraph=" << typegraph_ref << '\n';
  for (const auto& [id, type] : g.nodes()) out << "node " << id << ' ' << type << '\n';
  for (const auto& [id, e] : g.edges()) {
    out << "edge " << id << ' ' << e.type << ' ' << e.src << ' ' << e.tar << '\n';
  }
}

std::shared_ptr<const TypeGraph> load_type_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open type graph file " + path.string());
  try {
    return parse_type_graph(in);
  } catch (const MalformedInput& e) {
    throw MalformedInput(path.string() + ": " + e.what());
  }
}

ParsedInstance load_instance(const std::filesystem::path& path,
                             std::shared_ptr<const TypeGraph> types) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open instance file " + path.string());
  try {
    if (!types) {
      const std::string ref = read_typegraph_ref(in);
      std::filesystem::path tg_path(ref);
      if (tg_path.is_relative()) tg_path = path.parent_path() / tg_path;
      types = load_type_graph(tg_path);
      in.clear();
      in.seekg(0);
    }
    return parse_instance(in, std::move(types));
  } catch (const MalformedInput& e) {
    throw MalformedInput(path.string() + ": " + e.what());
  }
}

std::string to_text(const InstanceGraph& g, const std::string& typegraph_ref) {
  std::ostringstream ss;
  write_instance(ss, g, typegraph_ref);
  return ss.str();
}

std::string to_text(const TypeGraph& tg) {
  std::ostringstream ss;
  write_type_graph(ss, tg);
  return ss.str();
}

}  // namespace secx
