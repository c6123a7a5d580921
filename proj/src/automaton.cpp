#include "csmgen/automaton.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace csm {

std::optional<std::size_t> ConcreteAutomaton::find_state(std::string_view state) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].name == state)
            return i;
    return std::nullopt;
}

const ConcreteState& ConcreteAutomaton::state(std::string_view state) const {
    auto idx = find_state(state);
    if (!idx)
        throw std::out_of_range("no state " + std::string(state) + " in " + name);
    return states[*idx];
}

Diagnostics validate_automaton(const ConcreteAutomaton& a) {
    Diagnostics out;
    std::set<std::string> names;
    if (a.states.empty())
        out.push_back(make_error(codes::no_states, "automaton " + a.name + " has no states", {},
                                 a.name));
    for (const auto& s : a.states) {
        if (!names.insert(s.name).second)
            out.push_back(make_error(codes::dup_state,
                                     "state " + s.name + " declared twice in " + a.name, {}, s.name));
        std::set<SignalId> seen;
        for (const auto& e : s.emits)
            if (!seen.insert(e).second)
                out.push_back(make_error(codes::dup_emission,
                                         "state " + s.name + " emits " + e.str() + " twice", {},
                                         s.name));
    }
    auto check = [&](const std::string& state, const char* role) {
        if (!names.count(state))
            out.push_back(make_error(codes::unknown_state,
                                     std::string(role) + " state " + state + " is not declared in " +
                                         a.name,
                                     {}, state));
    };
    check(a.initial, "initial");
    for (const auto& t : a.transitions) {
        check(t.source, "source");
        check(t.target, "target");
    }
    return out;
}

const ConcreteAutomaton* SystemConfig::find(std::string_view name) const {
    for (const auto& a : automata)
        if (a.name == name)
            return &a;
    return nullptr;
}

}  // namespace csm
