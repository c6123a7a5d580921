#pragma once

#include "csmgen/automaton.hpp"
#include "csmgen/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace csm {

/// Current state name of each automaton, in SystemConfig order.
using SystemState = std::vector<std::string>;

enum class StepPolicy { Deterministic, All };

struct StepResult {
    SystemState next;
    Valuation emitted;  // emissions of `next`

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

SystemState initial_state(const SystemConfig& sys);

/// Union of the emissions of the current states.
Valuation emissions(const SystemConfig& sys, const SystemState& cur);

/// One synchronous step. The valuation is `inputs` plus the current
/// emissions. Deterministic policy yields exactly one result: each automaton
/// takes its first enabled transition or stays put. The `all` policy yields
/// every combination of enabled choices. Throws DiagnosticError
/// (E_NOT_EXTERNAL) for an input not declared external.
std::vector<StepResult> step(const SystemConfig& sys, const SystemState& cur, const Valuation& inputs,
                             StepPolicy policy = StepPolicy::Deterministic);

/// Deterministic run from the initial configuration; one result per step.
std::vector<StepResult> simulate(const SystemConfig& sys, const std::vector<Valuation>& trace);

struct ReachEdge {
    std::size_t from = 0;
    Valuation inputs;
    std::size_t to = 0;

    friend bool operator==(const ReachEdge&, const ReachEdge&) = default;
};

struct ReachGraph {
    std::vector<SystemState> nodes;  // breadth-first discovery order; nodes[0] is initial
    std::vector<ReachEdge> edges;
    int depth = 0;

    std::size_t index_of(const SystemState& s) const;  // nodes.size() when absent
};

inline constexpr std::size_t default_node_budget = 1'000'000;

/// Breadth-first closure over every subset of `alphabet` and every
/// nondeterministic choice, up to `depth` steps from the initial
/// configuration. Throws DiagnosticError (E_BUDGET_EXCEEDED) once more than
/// `budget` nodes or per-node input subsets would be needed.
ReachGraph explore(const SystemConfig& sys, const std::set<SignalId>& alphabet, int depth,
                   std::size_t budget = default_node_budget);

struct Overlap {
    std::string state;
    std::size_t first = 0;   // indices into the automaton's transitions
    std::size_t second = 0;
    Valuation witness;

    friend bool operator==(const Overlap&, const Overlap&) = default;
};

using OverlapReport = std::vector<Overlap>;

inline constexpr std::size_t max_overlap_signals = 20;

/// Every pair of transitions leaving one state towards different targets
/// whose guards can hold together, with the first joint valuation in
/// enumeration order as witness. Throws DiagnosticError
/// (E_TOO_MANY_SIGNALS) when a state's guards mention more than 20 signals.
OverlapReport check_determinism(const ConcreteAutomaton& a);

}  // namespace csm
