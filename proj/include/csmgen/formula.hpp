#pragma once

#include "csmgen/signal.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace csm {

enum class ShortcutKind { Eps, Any, All, Single, SingleN };

std::string_view shortcut_name(ShortcutKind kind);

/// Boolean guard over signals.
///
/// Conjunction and disjunction are n-ary and flattened on construction, so
/// `And`/`Or` nodes always hold at least two operands. A `Shortcut` node keeps
/// its operand list (each a signal reference or constant) until
/// `rewrite_shortcuts` turns it into plain connectives.
class Formula {
public:
    enum class Kind { True, False, Ref, Not, And, Or, Shortcut };

    Formula() = default;  // constant true

    static Formula constant(bool value);
    static Formula ref(SignalId signal);
    static Formula negate(Formula operand);
    static Formula conj(std::vector<Formula> operands);
    static Formula disj(std::vector<Formula> operands);
    static Formula shortcut(ShortcutKind kind, std::vector<Formula> operands,
                            std::optional<std::int64_t> selector = std::nullopt);

    Kind kind() const noexcept { return kind_; }
    const SignalId& signal() const noexcept { return signal_; }
    const std::vector<Formula>& operands() const noexcept { return operands_; }
    ShortcutKind shortcut_kind() const noexcept { return shortcut_; }
    std::optional<std::int64_t> selector() const noexcept { return selector_; }

    bool is_shortcut_free() const;

    /// Canonical text: `*` conjunction, `+` disjunction, `~` negation, `1`/`0`.
    std::string str() const;

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    static Formula nary(Kind kind, std::vector<Formula> operands);

    Kind kind_ = Kind::True;
    SignalId signal_;
    std::vector<Formula> operands_;
    ShortcutKind shortcut_ = ShortcutKind::Eps;
    std::optional<std::int64_t> selector_;
};

/// Evaluates a shortcut-free formula; a signal is true iff it is in `v`.
/// Throws std::logic_error on a Shortcut node.
bool eval_formula(const Formula& f, const Valuation& v);

/// Every signal referenced in `f`, including operands of shortcut nodes.
std::set<SignalId> formula_signals(const Formula& f);

/// Rewrites one shortcut node into connectives. Throws DiagnosticError
/// (E_EMPTY_SHORTCUT_SET, E_INDEX_OUT_OF_RANGE) for an empty set or a
/// selector outside the set.
Formula rewrite_shortcut(const Formula& node);

/// Rewrites every shortcut node in `f`.
Formula rewrite_shortcuts(const Formula& f);

}  // namespace csm
