#pragma once

#include "csmgen/ast.hpp"
#include "csmgen/automaton.hpp"
#include "csmgen/diagnostic.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace csm {

/// Index identifiers and module parameters in scope, by name.
using IndexEnv = std::map<std::string, std::int64_t, std::less<>>;

/// What an actual parameter turned a formal signal (element) into.
struct ActualBinding {
    enum class Kind { Signal, Const0, Const1, Dummy };

    Kind kind = Kind::Signal;
    SignalId signal;
    std::vector<std::string> attributes;

    friend bool operator==(const ActualBinding&, const ActualBinding&) = default;
};

/// Formal-to-actual correspondence for one instance.
struct BindingEnv {
    IndexEnv numeric;
    std::map<SignalId, ActualBinding> signal;  // keyed by formal name (+ element indices)
    std::map<std::string, std::vector<std::string>> attribute;
    std::string instance;
};

/// One actual-parameter position of a formal signal: scalars take one,
/// vectors one per element (row-major over their dimensions).
struct FormalSlot {
    const FormalSignal* formal = nullptr;
    SignalId element;  // formal name plus element indices
};

/// Evaluates an index expression. Throws DiagnosticError(E_UNBOUND_ID).
std::int64_t eval_index_expression(const Expr& e, const IndexEnv& env);

/// Cartesian product of the index ranges in declaration order, filtered by
/// inequalities. Each result extends `env`; an empty range yields nothing.
std::vector<IndexEnv> expand_ranges(const std::vector<RangeElement>& ranges, const IndexEnv& env);

std::vector<FormalSlot> formal_slots(const ModuleAst& m, const IndexEnv& numeric);

/// Binds actuals to formals. Throws DiagnosticError with the instantiation
/// diagnostics when the actual list is incompatible.
BindingEnv bind_instance(const ModuleAst& m, const InstanceDeclaration& decl);

std::vector<ConcreteState> expand_states(const AutomatonAst& a, const ModuleAst& m,
                                         const BindingEnv& binding);

std::vector<ConcreteTransition> expand_transitions(std::span<const TransitionAst> rules,
                                                   const ModuleAst& m, const BindingEnv& binding,
                                                   const std::vector<ConcreteState>& states);

/// Expands every automaton of `m` as `<instance>.<automaton>`. Internal
/// signals are renamed `<instance>__<name>`. Per-element "input never read"
/// findings for vector inputs are appended to `warnings`.
std::vector<ConcreteAutomaton> instantiate_module(const ModuleAst& m,
                                                  const InstanceDeclaration& decl,
                                                  Diagnostics* warnings = nullptr);

/// Expands every instance of a system and enforces the cross-instance
/// generation rules. Throws DiagnosticError with all findings on failure.
SystemConfig expand_system(const SystemAst& sys, const std::vector<ModuleAst>& library);

/// Builds an instance declaration for single-module expansion. Without
/// explicit `signals`, scalar formals keep their names and vector elements
/// become `name[i]`.
InstanceDeclaration default_instance(const ModuleAst& m, const IndexEnv& numeric,
                                     std::string instance_name = {},
                                     const std::vector<std::string>& signals = {});

/// Single-module expansion with every bound input declared external.
SystemConfig expand_module(const ModuleAst& m, const IndexEnv& numeric,
                           std::string instance_name = {},
                           const std::vector<std::string>& signals = {});

/// Converts a flat listing into concrete automata (no bindings, no renaming).
SystemConfig flat_to_system(const FlatAst& flat);

}  // namespace csm
