#pragma once

#include "csmgen/diagnostic.hpp"
#include "csmgen/formula.hpp"
#include "csmgen/signal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace csm {

/// Integer index expression: a signed sum of identifiers and numbers
/// (`l+1`, `N-2`, `7`).
struct Expr {
    struct Term {
        bool negative = false;
        std::string id;  // empty for a numeric literal
        std::int64_t number = 0;

        friend bool operator==(const Term&, const Term&) = default;
    };

    std::vector<Term> terms;
    SourcePos pos;

    static Expr literal(std::int64_t value, SourcePos pos = {});
    static Expr identifier(std::string id, SourcePos pos = {});

    std::string str() const;

    friend bool operator==(const Expr&, const Expr&) = default;
};

/// `low` alone, or `low..high` (inclusive).
struct Range {
    Expr low;
    std::optional<Expr> high;
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const Range&, const Range&) = default;
};

/// `[i=0..N-1]`: binds an index identifier to each value of its ranges.
struct IndexRange {
    std::string id;
    std::vector<Range> ranges;
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// `[i/=j]`: filters index tuples.
struct Inequality {
    std::string id;
    Expr rhs;
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const Inequality&, const Inequality&) = default;
};

using RangeElement = std::variant<IndexRange, Inequality>;

std::string render_ranges(const std::vector<RangeElement>& ranges);

/// A signal occurrence in a guard, emission or shortcut set. `ranges` is only
/// used by shortcut set elements such as `set[l=0..N-1]`.
struct SignalRef {
    std::string name;
    std::vector<Expr> indices;
    std::vector<IndexRange> ranges;
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const SignalRef&, const SignalRef&) = default;
};

/// Guard formula before expansion; may hold shortcuts and index expressions.
struct Guard {
    using Kind = Formula::Kind;

    Kind kind = Kind::True;
    SignalRef signal;
    std::vector<Guard> operands;
    ShortcutKind shortcut = ShortcutKind::Eps;
    std::optional<Expr> selector;
    std::vector<SignalRef> set;
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const Guard&, const Guard&) = default;
};

struct StateDecl {
    std::string name;
    std::vector<Expr> indices;
    std::vector<SignalRef> emits;
    SourcePos pos;

    friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct StateGroup {
    std::vector<RangeElement> ranges;
    std::vector<StateDecl> states;
    SourcePos pos;

    friend bool operator==(const StateGroup&, const StateGroup&) = default;
};

struct StateRef {
    std::string name;
    std::vector<Expr> indices;
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const StateRef&, const StateRef&) = default;
};

struct TransitionAst {
    std::vector<RangeElement> ranges;
    StateRef source;
    Guard guard;
    StateRef target;
    SourcePos pos;

    friend bool operator==(const TransitionAst&, const TransitionAst&) = default;
};

struct SignalAttributes {
    SignalId signal;
    std::vector<std::string> attributes;
    SourcePos pos;

    friend bool operator==(const SignalAttributes&, const SignalAttributes&) = default;
};

struct AutomatonAst {
    std::string name;
    std::vector<StateGroup> state_groups;
    std::optional<StateRef> initial;
    std::vector<TransitionAst> transitions;
    std::vector<SignalAttributes> attributes;  // flat listings only
    SourcePos pos;

    friend bool operator==(const AutomatonAst&, const AutomatonAst&) = default;
};

enum class Qualifier { In, Out };

struct NumericParam {
    std::string name;
    SourcePos pos;

    friend bool operator==(const NumericParam&, const NumericParam&) = default;
};

struct FormalSignal {
    Qualifier qualifier = Qualifier::In;
    std::string name;  // without the `%`
    std::vector<Range> dims;  // empty for scalars
    std::vector<std::string> attributes;  // scalars only
    SourcePos pos;

    bool is_vector() const { return !dims.empty(); }
    bool is_input() const { return qualifier == Qualifier::In; }

    friend bool operator==(const FormalSignal&, const FormalSignal&) = default;
};

struct ModuleAst {
    std::string name;
    std::vector<NumericParam> numeric_params;
    std::vector<FormalSignal> formal_signals;
    std::vector<AutomatonAst> automata;
    SourcePos pos;

    /// A module without automata only publishes an interface.
    bool header_only() const { return automata.empty(); }
    const FormalSignal* find_formal(std::string_view formal) const;
    bool is_numeric_param(std::string_view id) const;

    friend bool operator==(const ModuleAst&, const ModuleAst&) = default;
};

struct Actual {
    enum class Kind { Number, Signal, Const0, Const1, Dummy };

    Kind kind = Kind::Signal;
    std::int64_t number = 0;
    SignalId signal;
    std::vector<std::string> attributes;
    bool vector_range = false;  // written as `c[0..2]`; never legal
    std::string text;           // source spelling, for diagnostics
    SourcePos pos;

    std::string str() const;

    friend bool operator==(const Actual&, const Actual&) = default;
};

struct InstanceDeclaration {
    std::string instance_name;
    std::vector<Actual> actuals;
    std::string module_name;
    SourcePos pos;

    friend bool operator==(const InstanceDeclaration&, const InstanceDeclaration&) = default;
};

/// `MES.REQ:MES_G.M` names one automaton of an instance.
struct AutomatonAlias {
    std::string alias;
    std::string instance;
    std::string automaton;
    SourcePos pos;

    friend bool operator==(const AutomatonAlias&, const AutomatonAlias&) = default;
};

struct SystemAst {
    std::string name;
    std::vector<InstanceDeclaration> instances;
    std::vector<AutomatonAlias> automaton_aliases;
    std::vector<SignalId> external_signals;
    SourcePos pos;

    friend bool operator==(const SystemAst&, const SystemAst&) = default;
};

/// Automata of a flat listing, before conversion to concrete values.
struct FlatAst {
    std::vector<SignalId> external_signals;
    std::vector<AutomatonAst> automata;

    friend bool operator==(const FlatAst&, const FlatAst&) = default;
};

}  // namespace csm
