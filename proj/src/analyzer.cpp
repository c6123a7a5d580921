#include "csmgen/analyzer.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace csm {

SystemState initial_state(const SystemConfig& sys) {
    SystemState s;
    for (const auto& a : sys.automata)
        s.push_back(a.initial);
    return s;
}

Valuation emissions(const SystemConfig& sys, const SystemState& cur) {
    Valuation v;
    for (std::size_t i = 0; i < sys.automata.size(); ++i) {
        const auto& st = sys.automata[i].state(cur.at(i));
        v.insert(st.emits.begin(), st.emits.end());
    }
    return v;
}

std::vector<StepResult> step(const SystemConfig& sys, const SystemState& cur, const Valuation& inputs,
                             StepPolicy policy) {
    for (const auto& s : inputs)
        if (!sys.externals.count(s))
            throw DiagnosticError(
                make_error(codes::not_external, "input " + s.str() + " is not declared EXTERNAL", {}, s.str()));

    Valuation v = inputs;
    auto emitted = emissions(sys, cur);
    v.insert(emitted.begin(), emitted.end());

    std::vector<std::vector<std::string>> choices;
    for (std::size_t i = 0; i < sys.automata.size(); ++i) {
        std::vector<std::string> targets;
        for (const auto& t : sys.automata[i].transitions) {
            if (t.source != cur[i] || !eval_formula(t.guard, v))
                continue;
            if (std::find(targets.begin(), targets.end(), t.target) == targets.end())
                targets.push_back(t.target);
            if (policy == StepPolicy::Deterministic)
                break;
        }
        if (targets.empty())
            targets.push_back(cur[i]);
        choices.push_back(std::move(targets));
    }

    std::vector<StepResult> out;
    SystemState next(sys.automata.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == choices.size()) {
            out.push_back(StepResult{next, emissions(sys, next)});
            return;
        }
        for (const auto& c : choices[i]) {
            next[i] = c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<StepResult> simulate(const SystemConfig& sys, const std::vector<Valuation>& trace) {
    std::vector<StepResult> out;
    SystemState cur = initial_state(sys);
    for (const auto& inputs : trace) {
        out.push_back(step(sys, cur, inputs).front());
        cur = out.back().next;
    }
    return out;
}

std::size_t ReachGraph::index_of(const SystemState& s) const {
    return std::size_t(std::find(nodes.begin(), nodes.end(), s) - nodes.begin());
}

ReachGraph explore(const SystemConfig& sys, const std::set<SignalId>& alphabet, int depth,
                   std::size_t budget) {
    const std::vector<SignalId> letters(alphabet.begin(), alphabet.end());
    if (letters.size() >= 63 || (std::uint64_t(1) << letters.size()) > budget)
        throw DiagnosticError(make_error(codes::budget_exceeded,
                                         std::to_string(letters.size()) +
                                             " input signals give more subsets than the budget of " +
                                             std::to_string(budget)));
    const std::uint64_t subsets = std::uint64_t(1) << letters.size();

    ReachGraph g;
    g.depth = depth;
    std::map<SystemState, std::size_t> index;
    std::vector<int> level;
    auto add = [&](const SystemState& s, int d) {
        auto [it, inserted] = index.emplace(s, g.nodes.size());
        if (inserted) {
            if (g.nodes.size() >= budget)
                throw DiagnosticError(make_error(codes::budget_exceeded,
                                                 "exploration needs more than " + std::to_string(budget) +
                                                     " configurations"));
            g.nodes.push_back(s);
            level.push_back(d);
        }
        return it->second;
    };
    add(initial_state(sys), 0);

    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
        if (level[n] >= depth)
            continue;
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            Valuation inputs;
            for (std::size_t b = 0; b < letters.size(); ++b)
                if (mask >> b & 1)
                    inputs.insert(letters[b]);
            const SystemState from = g.nodes[n];
            for (auto& r : step(sys, from, inputs, StepPolicy::All)) {
                std::size_t to = add(r.next, level[n] + 1);
                g.edges.push_back(ReachEdge{n, inputs, to});
            }
        }
    }
    return g;
}

OverlapReport check_determinism(const ConcreteAutomaton& a) {
    OverlapReport report;
    for (const auto& st : a.states) {
        std::vector<std::size_t> out;
        std::set<SignalId> all;
        for (std::size_t i = 0; i < a.transitions.size(); ++i) {
            if (a.transitions[i].source != st.name)
                continue;
            out.push_back(i);
            auto s = formula_signals(a.transitions[i].guard);
            all.insert(s.begin(), s.end());
        }
        if (all.size() > max_overlap_signals)
            throw DiagnosticError(make_error(codes::too_many_signals,
                                             "guards leaving " + a.name + "." + st.name + " mention " +
                                                 std::to_string(all.size()) + " signals (limit " +
                                                 std::to_string(max_overlap_signals) + ")",
                                             {}, st.name));
        for (std::size_t x = 0; x < out.size(); ++x) {
            for (std::size_t y = x + 1; y < out.size(); ++y) {
                const auto& t1 = a.transitions[out[x]];
                const auto& t2 = a.transitions[out[y]];
                if (t1.target == t2.target)
                    continue;
                auto s = formula_signals(t1.guard);
                auto s2 = formula_signals(t2.guard);
                s.insert(s2.begin(), s2.end());
                const std::vector<SignalId> vars(s.begin(), s.end());
                for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << vars.size()); ++mask) {
                    Valuation v;
                    for (std::size_t b = 0; b < vars.size(); ++b)
                        if (mask >> b & 1)
                            v.insert(vars[b]);
                    if (eval_formula(t1.guard, v) && eval_formula(t2.guard, v)) {
                        report.push_back(Overlap{st.name, out[x], out[y], std::move(v)});
                        break;
                    }
                }
            }
        }
    }
    return report;
}

}  // namespace csm
