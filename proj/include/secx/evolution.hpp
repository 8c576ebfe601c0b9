#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secx/decision.hpp"
#include "secx/generic_crossover.hpp"
#include "secx/instance_graph.hpp"
#include "secx/secure_crossover.hpp"

namespace secx {

using Fitness = std::function<double(const InstanceGraph&)>;

/// A problem-preserving graph transformation. Returns false when it found
/// nothing to change.
struct Mutation {
  std::string name;
  std::function<bool(InstanceGraph&, Rng&)> apply;
};

enum class CrossoverOperator { Secure, GenericDiscard, GenericKeep };

std::string_view to_string(CrossoverOperator op);
std::optional<CrossoverOperator> parse_operator(std::string_view name);

struct EAConfig {
  int population_size = 20;
  int generations = 20;
  double crossover_rate = 0.9;
  double mutation_rate = 0.5;
  int tournament_size = 3;
  CrossoverOperator op = CrossoverOperator::Secure;
  std::uint64_t seed = 0;
  int burst_min = 5;
  int burst_max = 30;
  int discard_retries = 10;
  CrossoverConfig secure;
  GenericConfig generic;

  /// Throws PreconditionError on an unusable configuration.
  void validate() const;
};

struct Individual {
  InstanceGraph graph;
  double fitness = 0.0;
  bool feasible = false;
};

Individual evaluate(InstanceGraph g, const Fitness& fitness);

/// Feasible before infeasible, then higher fitness, fewer nodes, lower ID sum.
bool ranks_before(const Individual& a, const Individual& b);

/// Best of k distinct uniformly drawn members by fitness; ties go to fewer
/// nodes, then the lower node-ID sum.
const Individual& tournament_select(std::span<const Individual> pop, int k, Rng& rng);

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double feasible_fraction = 0.0;
  double xover_feasible_rate = 1.0;  // 1 when no crossover happened
  std::int64_t discards = 0;
  std::int64_t xover_offspring = 0;
  std::int64_t xover_feasible = 0;
};

struct EAResult {
  Individual best;
  std::vector<GenerationStats> history;
  std::vector<Individual> population;
};

/// Generational loop with tournament selection and elitist (mu + lambda)
/// survivor selection. Generation 0 in the history describes the initial
/// population. Each mating event draws from its own stream derived from
/// (seed, generation, pair index).
EAResult run_ea(const InstanceGraph& seed_solution, const Fitness& fitness,
                std::span<const Mutation> mutations, const EAConfig& cfg);

void write_history_csv(std::ostream& out, std::span<const GenerationStats> history);

}  // namespace secx
