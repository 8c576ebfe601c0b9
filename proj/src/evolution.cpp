#include "secx/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "secx/errors.hpp"
#include "secx/validation.hpp"

namespace secx {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;  // "init"

std::uint64_t node_id_sum(const InstanceGraph& g) {
  std::uint64_t s = 0;
  for (const auto& [id, type] : g.nodes()) s += id.value;
  return s;
}

bool fitter(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  if (a.graph.node_count() != b.graph.node_count()) {
    return a.graph.node_count() < b.graph.node_count();
  }
  return node_id_sum(a.graph) < node_id_sum(b.graph);
}

void mutate_once(InstanceGraph& g, std::span<const Mutation> mutations, Rng& rng) {
  if (mutations.empty()) return;
  mutations[rng.below(mutations.size())].apply(g, rng);
}

GenerationStats describe(int generation, const std::vector<Individual>& pop) {
  GenerationStats s;
  s.generation = generation;
  s.best = pop.front().fitness;
  double sum = 0.0;
  std::size_t feasible = 0;
  for (const Individual& i : pop) {
    s.best = std::max(s.best, i.fitness);
    sum += i.fitness;
    feasible += i.feasible;
  }
  s.mean = sum / static_cast<double>(pop.size());
  s.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(pop.size());
  return s;
}

}  // namespace

std::string_view to_string(CrossoverOperator op) {
  switch (op) {
    case CrossoverOperator::Secure:
      return "secure";
    case CrossoverOperator::GenericDiscard:
      return "generic-discard";
    case CrossoverOperator::GenericKeep:
      return "generic-keep";
  }
  return "?";
}

std::optional<CrossoverOperator> parse_operator(std::string_view name) {
  for (auto op : {CrossoverOperator::Secure, CrossoverOperator::GenericDiscard,
                  CrossoverOperator::GenericKeep}) {
    if (to_string(op) == name) return op;
  }
  return std::nullopt;
}

void EAConfig::validate() const {
  if (population_size < 2) throw PreconditionError("population_size must be at least 2");
  if (generations < 0) throw PreconditionError("generations must be non-negative");
  if (tournament_size < 1 || tournament_size > population_size) {
    throw PreconditionError("tournament_size must lie in [1, population_size]");
  }
  for (double p : {crossover_rate, mutation_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("rates must lie in [0, 1]");
  }
  if (burst_min < 0 || burst_max < burst_min) throw PreconditionError("invalid burst length range");
  if (discard_retries < 1) throw PreconditionError("discard_retries must be positive");
  secure.validate();
  generic.validate();
}

Individual evaluate(InstanceGraph g, const Fitness& fitness) {
  const double f = fitness(g);
  const bool ok = is_feasible(g);
  return Individual{std::move(g), f, ok};
}

bool ranks_before(const Individual& a, const Individual& b) {
  if (a.feasible != b.feasible) return a.feasible;
  return fitter(a, b);
}

const Individual& tournament_select(std::span<const Individual> pop, int k, Rng& rng) {
  if (pop.empty() || k < 1 || static_cast<std::size_t>(k) > pop.size()) {
    throw PreconditionError("tournament size must lie in [1, population size]");
  }
  std::vector<std::size_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (int i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pop.size() - i);
    std::swap(idx[i], idx[j]);
  }
  std::size_t best = idx[0];
  for (int i = 1; i < k; ++i) {
    if (fitter(pop[idx[i]], pop[best])) best = idx[i];
  }
  return pop[best];
}

EAResult run_ea(const InstanceGraph& seed_solution, const Fitness& fitness,
                std::span<const Mutation> mutations, const EAConfig& cfg) {
  cfg.validate();
  const InstanceGraph pip = problem_graph_of(seed_solution);

  std::vector<Individual> pop;
  for (int i = 0; i < cfg.population_size; ++i) {
    Rng rng(derive_seed(cfg.seed, {kInitStream, static_cast<std::uint64_t>(i)}));
    InstanceGraph g = seed_solution;
    const auto burst = rng.between(cfg.burst_min, cfg.burst_max);
    for (std::int64_t s = 0; s < burst; ++s) mutate_once(g, mutations, rng);
    pop.push_back(evaluate(std::move(g), fitness));
  }
  std::stable_sort(pop.begin(), pop.end(), ranks_before);

  EAResult result{pop.front(), {}, {}};
  result.history.push_back(describe(0, pop));

  const int pairs = (cfg.population_size + 1) / 2;
  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Individual> offspring;
    std::int64_t produced = 0, feasible_produced = 0, discards = 0;
    for (int p = 0; p < pairs; ++p) {
      Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(gen), static_cast<std::uint64_t>(p)}));
      const Individual& a = tournament_select(pop, cfg.tournament_size, rng);
      const Individual& b = tournament_select(pop, cfg.tournament_size, rng);
      std::vector<InstanceGraph> children;
      if (rng.bernoulli(cfg.crossover_rate)) {
        auto tally = [&](const InstanceGraph& c) {
          ++produced;
          const bool ok = is_feasible(c);
          feasible_produced += ok;
          return ok;
        };
        switch (cfg.op) {
          case CrossoverOperator::Secure: {
            Decider d1(rng.next());
            children.push_back(secure_crossover(a.graph, b.graph, cfg.secure, d1).offspring);
            Decider d2(rng.next());
            children.push_back(secure_crossover(b.graph, a.graph, cfg.secure, d2).offspring);
            for (const auto& c : children) tally(c);
            break;
          }
          case CrossoverOperator::GenericKeep: {
            Decider d(rng.next());
            auto r = generic_crossover(a.graph, b.graph, d, cfg.generic);
            tally(r.offspring1);
            tally(r.offspring2);
            children.push_back(std::move(r.offspring1));
            children.push_back(std::move(r.offspring2));
            break;
          }
          case CrossoverOperator::GenericDiscard: {
            for (int attempt = 0; attempt < cfg.discard_retries && children.size() < 2; ++attempt) {
              Decider d(rng.next());
              auto r = generic_crossover(a.graph, b.graph, d, cfg.generic);
              for (InstanceGraph* c : {&r.offspring1, &r.offspring2}) {
                if (children.size() < 2 && tally(*c)) {
                  children.push_back(std::move(*c));
                } else if (children.size() < 2) {
                  ++discards;
                }
              }
            }
            if (children.empty()) children.push_back(a.graph);
            if (children.size() < 2) children.push_back(b.graph);
            break;
          }
        }
      } else {
        children.push_back(a.graph);
        children.push_back(b.graph);
      }
      for (InstanceGraph& c : children) {
        if (static_cast<int>(offspring.size()) >= cfg.population_size) break;
        if (rng.bernoulli(cfg.mutation_rate)) mutate_once(c, mutations, rng);
        offspring.push_back(evaluate(std::move(c), fitness));
      }
    }

    std::vector<Individual> merged = std::move(pop);
    for (Individual& o : offspring) merged.push_back(std::move(o));
    std::stable_sort(merged.begin(), merged.end(), ranks_before);
    merged.erase(merged.begin() + cfg.population_size, merged.end());
    pop = std::move(merged);

    GenerationStats s = describe(gen, pop);
    s.discards = discards;
    s.xover_offspring = produced;
    s.xover_feasible = feasible_produced;
    s.xover_feasible_rate =
        produced == 0 ? 1.0 : static_cast<double>(feasible_produced) / static_cast<double>(produced);
    result.history.push_back(s);
  }
  for (const Individual& i : pop) {
    if (!(problem_graph_of(i.graph) == pip)) {
      throw std::logic_error("an individual lost the problem graph");
    }
  }
  result.best = pop.front();
  result.population = std::move(pop);
  return result;
}

void write_history_csv(std::ostream& out, std::span<const GenerationStats> history) {
  out << "generation,best,mean,feasible_fraction,xover_feasible_rate,discards\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(6) << std::fixed;
  for (const GenerationStats& s : history) {
    out << s.generation << ',' << s.best << ',' << s.mean << ',' << s.feasible_fraction << ','
        << s.xover_feasible_rate << ',' << s.discards << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace secx
