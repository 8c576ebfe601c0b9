#include "secx/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "secx/cra.hpp"
#include "secx/errors.hpp"
#include "secx/evolution.hpp"
#include "secx/generic_crossover.hpp"
#include "secx/secure_crossover.hpp"
#include "secx/text_format.hpp"
#include "secx/validation.hpp"

namespace secx {

namespace {

struct CrossoverOptions {
  std::string op = "secure";
  std::string typegraph;
  std::string g_path;
  std::string h_path;
  std::string seed = "0";
  std::string force;
  std::string trace;
  std::string trace_out;
  bool second = false;
  std::string out;
  std::string out2;
};

struct EaOptions {
  std::string config;
  std::string out;
  std::string best_out;
};

struct BenchOptions {
  std::string arms = "secure,generic-discard";
  int trials = 100;
  std::string seed = "0";
  int min_features = 10;
  int max_features = 30;
  double dependency_probability = 0.1;
  bool no_timing = false;
};

std::uint64_t parse_seed(const std::string& text, std::ostream& out) {
  if (text == "random") {
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    out << "seed " << seed << '\n';
    return seed;
  }
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw MalformedInput("invalid seed '" + text + "'");
}

DecisionTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  try {
    return parse_trace(in);
  } catch (const MalformedInput& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write " + path);
  out << content;
}

void describe_offspring(std::ostream& out, const std::string& label, const InstanceGraph& g,
                        const std::string& path) {
  const auto report = check_multiplicities(g);
  out << label << " nodes=" << g.node_count() << " edges=" << g.edge_count()
      << " violations=" << report.size() << (report.empty() ? " feasible" : " infeasible");
  if (!path.empty()) out << " -> " << path;
  out << '\n';
}

int cmd_validate(const std::string& typegraph, const std::string& instance, std::ostream& out) {
  std::shared_ptr<const TypeGraph> tg;
  if (!typegraph.empty()) tg = load_type_graph(typegraph);
  const ParsedInstance parsed = load_instance(instance, tg);
  const ViolationReport report = check_multiplicities(parsed.graph);
  write_report(out, report, parsed.graph.types());
  return report.empty() ? kExitOk : kExitViolations;
}

int cmd_crossover(const CrossoverOptions& o, bool replay, std::ostream& out) {
  std::shared_ptr<const TypeGraph> tg;
  if (!o.typegraph.empty()) tg = load_type_graph(o.typegraph);
  ParsedInstance g = load_instance(o.g_path, tg);
  ParsedInstance h = load_instance(o.h_path, g.graph.types_ptr());
  const std::string& ref = g.typegraph_ref;

  std::uint64_t seed = 0;
  if (!replay) seed = parse_seed(o.seed, out);
  Decider decider = replay            ? Decider::replaying(read_trace_file(o.trace))
                    : !o.force.empty() ? Decider::forcing(read_trace_file(o.force), seed)
                                       : Decider(seed);

  std::optional<InstanceGraph> second;
  InstanceGraph first(g.graph.types_ptr());
  if (o.op == "secure") {
    CrossoverConfig cfg;
    cfg.compute_second_offspring = o.second;
    auto result = secure_crossover(g.graph, h.graph, cfg, decider);
    first = std::move(result.offspring);
    second = std::move(result.offspring2);
  } else if (o.op == "generic") {
    auto result = generic_crossover(g.graph, h.graph, decider);
    first = std::move(result.offspring1);
    second = std::move(result.offspring2);
  } else {
    throw MalformedInput("unknown operator '" + o.op + "'");
  }
  if (replay && decider.remaining() != 0) {
    throw TraceError(std::to_string(decider.remaining()) + " trace entries left unused");
  }

  if (!o.out.empty()) write_file(o.out, to_text(first, ref));
  describe_offspring(out, "offspring1", first, o.out);
  if (second) {
    if (!o.out2.empty()) write_file(o.out2, to_text(*second, ref));
    describe_offspring(out, "offspring2", *second, o.out2);
  }
  if (!o.trace_out.empty()) {
    std::ostringstream t;
    write_trace(t, decider.trace());
    write_file(o.trace_out, t.str());
  }
  out << "decisions " << decider.trace().size() << '\n';
  return kExitOk;
}

EAConfig ea_config_from_json(const nlohmann::json& j) {
  static const char* const known[] = {
      "population_size", "generations", "crossover_rate", "mutation_rate", "tournament_size",
      "operator",        "seed",        "burst_min",      "burst_max",     "discard_retries",
      "instance",        "cra"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw MalformedInput("unknown config key '" + key + "'");
    }
  }
  EAConfig cfg;
  cfg.population_size = j.value("population_size", cfg.population_size);
  cfg.generations = j.value("generations", cfg.generations);
  cfg.crossover_rate = j.value("crossover_rate", cfg.crossover_rate);
  cfg.mutation_rate = j.value("mutation_rate", cfg.mutation_rate);
  cfg.tournament_size = j.value("tournament_size", cfg.tournament_size);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.burst_min = j.value("burst_min", cfg.burst_min);
  cfg.burst_max = j.value("burst_max", cfg.burst_max);
  cfg.discard_retries = j.value("discard_retries", cfg.discard_retries);
  const std::string op = j.value("operator", std::string(to_string(cfg.op)));
  const auto parsed = parse_operator(op);
  if (!parsed) throw MalformedInput("unknown operator '" + op + "'");
  cfg.op = *parsed;
  return cfg;
}

int cmd_ea(const EaOptions& o, std::ostream& out) {
  std::ifstream in(o.config);
  if (!in) throw MalformedInput("cannot open " + o.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (!j.is_object()) throw MalformedInput("config must be a JSON object");
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(o.config + ": " + e.what());
  }

  EAConfig cfg;
  InstanceGraph seed_solution(cra::type_graph());
  std::string ref = "cra.typegraph";
  try {
    cfg = ea_config_from_json(j);
    if (j.contains("instance")) {
      const auto base = std::filesystem::path(o.config).parent_path();
      ParsedInstance p = load_instance(base / j.at("instance").get<std::string>());
      if (!(p.graph.types() == *cra::type_graph())) {
        throw PreconditionError("ea supports solutions over the CRA type graph only");
      }
      ref = p.typegraph_ref;
      seed_solution = InstanceGraph(cra::type_graph());
      for (const auto& [id, t] : p.graph.nodes()) seed_solution.add_node(id, t);
      for (const auto& [id, e] : p.graph.edges()) seed_solution.add_edge(id, e.type, e.src, e.tar);
    } else {
      const auto c = j.value("cra", nlohmann::json::object());
      Rng rng(c.value("seed", std::uint64_t{0}));
      const InstanceGraph problem =
          cra::random_problem(c.value("features", 12), c.value("dependency_probability", 0.15), rng);
      seed_solution = cra::random_solution(problem, rng);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(o.config + ": " + e.what());
  }

  const auto mutations = cra::mutations();
  const EAResult result = run_ea(seed_solution, cra::fitness, mutations, cfg);

  std::ostringstream csv;
  write_history_csv(csv, result.history);
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_file(o.out, csv.str());
  }
  if (!o.best_out.empty()) write_file(o.best_out, to_text(result.best.graph, ref));
  out << "best fitness=" << std::fixed << std::setprecision(6) << result.best.fitness
      << " feasible=" << (result.best.feasible ? "yes" : "no")
      << " nodes=" << result.best.graph.node_count() << '\n';
  return kExitOk;
}

struct ArmStats {
  std::string name;
  std::int64_t crossovers = 0;
  std::int64_t offspring = 0;
  std::int64_t feasible = 0;
  std::int64_t discards = 0;
  double seconds = 0.0;
  std::optional<double> best;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.trials < 1) throw PreconditionError("--trials must be positive");
  if (o.min_features < 1 || o.max_features < o.min_features) {
    throw PreconditionError("invalid feature range");
  }
  const std::uint64_t seed = parse_seed(o.seed, out);
  std::vector<ArmStats> arms;
  std::stringstream list(o.arms);
  for (std::string name; std::getline(list, name, ',');) {
    if (!parse_operator(name)) throw MalformedInput("unknown arm '" + name + "'");
    arms.push_back(ArmStats{name, 0, 0, 0, 0, 0.0, std::nullopt});
  }
  if (arms.empty()) throw MalformedInput("no arms given");

  using Clock = std::chrono::steady_clock;
  for (int t = 0; t < o.trials; ++t) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    const auto n = static_cast<int>(rng.between(o.min_features, o.max_features));
    const InstanceGraph problem = cra::random_problem(n, o.dependency_probability, rng);
    const InstanceGraph g = cra::random_solution(problem, rng);
    const InstanceGraph h = cra::random_solution(problem, rng);
    for (std::size_t a = 0; a < arms.size(); ++a) {
      ArmStats& s = arms[a];
      Rng arm_rng(derive_seed(seed, {static_cast<std::uint64_t>(t), a + 1}));
      auto record = [&](const InstanceGraph& child, bool delivered) {
        ++s.offspring;
        const bool ok = is_feasible(child);
        s.feasible += ok;
        if (ok && delivered) {
          const double f = cra::fitness(child);
          s.best = s.best ? std::max(*s.best, f) : f;
        }
        return ok;
      };
      const auto op = *parse_operator(s.name);
      if (op == CrossoverOperator::Secure) {
        Decider d(arm_rng.next());
        const auto start = Clock::now();
        auto r = secure_crossover(g, h, CrossoverConfig{}, d);
        s.seconds += std::chrono::duration<double>(Clock::now() - start).count();
        ++s.crossovers;
        record(r.offspring, true);
        continue;
      }
      const int attempts = op == CrossoverOperator::GenericDiscard ? 10 : 1;
      for (int k = 0; k < attempts; ++k) {
        Decider d(arm_rng.next());
        const auto start = Clock::now();
        auto r = generic_crossover(g, h, d);
        s.seconds += std::chrono::duration<double>(Clock::now() - start).count();
        ++s.crossovers;
        const bool keep = op == CrossoverOperator::GenericKeep;
        const bool ok1 = record(r.offspring1, true);
        const bool ok2 = record(r.offspring2, true);
        if (!keep) s.discards += !ok1 + !ok2;
        if (keep || ok1 || ok2) break;
      }
    }
  }

  out << "arm,trials,crossovers,offspring,feasible,feasible_rate,discards,us_per_crossover,"
         "best_fitness\n";
  out << std::fixed;
  for (const ArmStats& s : arms) {
    out << s.name << ',' << o.trials << ',' << s.crossovers << ',' << s.offspring << ','
        << s.feasible << ',' << std::setprecision(4)
        << static_cast<double>(s.feasible) / static_cast<double>(std::max<std::int64_t>(1, s.offspring))
        << ',' << s.discards << ',';
    if (o.no_timing) {
      out << '-';
    } else {
      out << std::setprecision(2) << 1e6 * s.seconds / static_cast<double>(s.crossovers);
    }
    out << ',';
    if (s.best) {
      out << std::setprecision(4) << *s.best;
    } else {
      out << '-';
    }
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplicity-preserving crossover on typed graphs", "secx"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::string v_typegraph, v_instance;
  auto* validate = app.add_subcommand("validate", "Report multiplicity violations of an instance");
  validate->add_option("--typegraph", v_typegraph, "Type graph file (default: instance header)");
  validate->add_option("--instance", v_instance, "Instance file")->required();

  CrossoverOptions xo;
  auto add_crossover_flags = [](CLI::App* cmd, CrossoverOptions& o) {
    cmd->add_option("--operator", o.op, "secure or generic")->capture_default_str();
    cmd->add_option("--typegraph", o.typegraph, "Type graph file (default: header of --g)");
    cmd->add_option("--g", o.g_path, "First parent")->required();
    cmd->add_option("--h", o.h_path, "Second parent")->required();
    cmd->add_option("--trace-out", o.trace_out, "Write the decisions taken");
    cmd->add_flag("--second-offspring", o.second, "Also build the second offspring (secure)");
    cmd->add_option("--out", o.out, "Offspring file");
    cmd->add_option("--out2", o.out2, "Second offspring file");
  };
  auto* crossover = app.add_subcommand("crossover", "Apply one crossover to two parents");
  add_crossover_flags(crossover, xo);
  crossover->add_option("--seed", xo.seed, "Integer seed or 'random'")->capture_default_str();
  crossover->add_option("--force", xo.force, "Trace of forced decisions");

  CrossoverOptions ro;
  auto* replay = app.add_subcommand("replay", "Reproduce a crossover from a recorded trace");
  add_crossover_flags(replay, ro);
  replay->add_option("--trace", ro.trace, "Recorded trace")->required();

  EaOptions eo;
  auto* ea = app.add_subcommand("ea", "Run the evolutionary algorithm on a CRA instance");
  ea->add_option("--config", eo.config, "JSON configuration")->required();
  ea->add_option("--out", eo.out, "History CSV (default: stdout)");
  ea->add_option("--best-out", eo.best_out, "Write the best individual");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Compare crossover arms on random CRA pairs");
  bench->add_option("--arms", bo.arms, "Comma-separated arms")->capture_default_str();
  bench->add_option("--trials", bo.trials, "Number of parent pairs")->capture_default_str();
  bench->add_option("--seed", bo.seed, "Integer seed or 'random'")->capture_default_str();
  bench->add_option("--min-features", bo.min_features)->capture_default_str();
  bench->add_option("--max-features", bo.max_features)->capture_default_str();
  bench->add_option("--dependency-probability", bo.dependency_probability)->capture_default_str();
  bench->add_flag("--no-timing", bo.no_timing, "Omit wall-clock columns");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitMalformed;
  }

  try {
    if (*validate) return cmd_validate(v_typegraph, v_instance, out);
    if (*crossover) return cmd_crossover(xo, false, out);
    if (*replay) return cmd_crossover(ro, true, out);
    if (*ea) return cmd_ea(eo, out);
    if (*bench) return cmd_bench(bo, out);
  } catch (const MalformedInput& e) {
    err << "malformed input: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const TraceError& e) {
    err << "trace mismatch: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitMalformed;
}

}  // namespace secx
