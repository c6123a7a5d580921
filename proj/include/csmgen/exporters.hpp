#pragma once

#include "csmgen/analyzer.hpp"
#include "csmgen/automaton.hpp"

#include <string>

namespace csm {

/// DOT digraph: one node per state labeled `name / emissions`, one edge per
/// transition labeled with its guard, and a point node marking the initial
/// state.
std::string emit_dot(const ConcreteAutomaton& a);

/// One cluster per automaton; an empty system gives an empty digraph.
std::string emit_dot(const SystemConfig& sys);

/// Canonical flat listing, re-parseable with parse_flat.
std::string emit_flat(const SystemConfig& sys);

/// `STATE (s, ...)` lines in node order, then `EDGE (from) --{inputs}--> (to)`.
std::string render_reach_graph(const ReachGraph& g);

std::string render_system_state(const SystemState& s);

}  // namespace csm
