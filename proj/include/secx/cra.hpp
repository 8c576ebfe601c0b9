#pragma once

#include <memory>
#include <vector>

#include "secx/decision.hpp"
#include "secx/evolution.hpp"
#include "secx/instance_graph.hpp"
#include "secx/type_graph.hpp"

namespace secx::cra {

inline constexpr NodeTypeId kFeature{0};
inline constexpr NodeTypeId kClass{1};
inline constexpr EdgeTypeId kDependsOn{0};
inline constexpr EdgeTypeId kEncapsulates{1};

/// Features (problem) with dependsOn edges (problem, unbounded); Classes
/// encapsulate Features: every Feature belongs to exactly one Class and every
/// Class holds at least one Feature.
std::shared_ptr<const TypeGraph> type_graph();

/// cohesion - coupling - unassigned, where cohesion and coupling are the
/// fractions of dependencies inside one Class and across two Classes, and
/// `unassigned` counts Features without a Class. Range [-#Features, 1].
double fitness(const InstanceGraph& g);

/// Classes holding `feature`, ascending.
std::vector<NodeId> classes_of(const InstanceGraph& g, NodeId feature);

struct Fixtures {
  InstanceGraph g;     // c1 owns f1, f2, f3; dependency f1 -> f2
  InstanceGraph h;     // c2, c3, c4 own f1, f2, f3 respectively
  InstanceGraph g1h2;  // one Class owns f1 and f2, another owns f3
  DecisionTrace secure_trace;   // forced decisions turning (g, h) into g1h2
  DecisionTrace generic_trace;  // splits and crossover point of the generic example
};

Fixtures fixtures();

/// Moves the Feature at the end of `edge` into `target` (same edge ID).
/// Refuses (returns false) when that would leave its old Class empty.
bool move_feature(InstanceGraph& g, EdgeId edge, NodeId target);
/// Moves `feature` into a new Class; returns the Class, or nothing when that
/// would leave the old Class empty.
std::optional<NodeId> create_class_with_feature(InstanceGraph& g, NodeId feature);
/// Removes `c` if it is a Class without encapsulated Features.
bool delete_empty_class(InstanceGraph& g, NodeId c);

/// moveFeature, createClassWithFeature, deleteEmptyClass with random targets.
std::vector<Mutation> mutations();

/// Features 0..n-1 with each ordered pair (u != v) depending with probability p.
InstanceGraph random_problem(int features, double dependency_probability, Rng& rng);
/// A random feasible assignment of the Features of `problem` to 1..n Classes.
InstanceGraph random_solution(const InstanceGraph& problem, Rng& rng);

}  // namespace secx::cra
