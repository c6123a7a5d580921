#pragma once

#include "csmgen/diagnostic.hpp"
#include "csmgen/formula.hpp"
#include "csmgen/signal.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csm {

struct ConcreteState {
    std::string name;           // rendered with indices, e.g. `s[2]`
    std::vector<SignalId> emits;  // sorted, distinct

    friend bool operator==(const ConcreteState&, const ConcreteState&) = default;
};

struct ConcreteTransition {
    std::string source;
    Formula guard;  // shortcut-free
    std::string target;

    friend bool operator==(const ConcreteTransition&, const ConcreteTransition&) = default;
};

/// A flat, fully expanded machine. Signal attributes are carried as metadata
/// and never evaluated.
struct ConcreteAutomaton {
    std::string name;  // `instance.automaton` or a system alias
    std::vector<ConcreteState> states;
    std::string initial;
    std::vector<ConcreteTransition> transitions;
    std::map<SignalId, std::vector<std::string>> attributes;

    std::optional<std::size_t> find_state(std::string_view state) const;
    const ConcreteState& state(std::string_view state) const;

    friend bool operator==(const ConcreteAutomaton&, const ConcreteAutomaton&) = default;
};

/// Empty iff the automaton's structural invariants hold: one declared initial
/// state, unique state names, declared transition endpoints, distinct emissions.
Diagnostics validate_automaton(const ConcreteAutomaton& a);

/// A composed system of concrete automata plus its declared environment inputs.
struct SystemConfig {
    std::vector<ConcreteAutomaton> automata;
    std::set<SignalId> externals;
    Diagnostics warnings;

    const ConcreteAutomaton* find(std::string_view name) const;

    friend bool operator==(const SystemConfig& a, const SystemConfig& b) {
        return a.automata == b.automata && a.externals == b.externals;
    }
};

}  // namespace csm
