#include "csmgen/formula.hpp"

#include "csmgen/diagnostic.hpp"

#include <algorithm>
#include <stdexcept>

namespace csm {

std::string_view shortcut_name(ShortcutKind kind) {
    switch (kind) {
    case ShortcutKind::Eps: return "eps";
    case ShortcutKind::Any: return "any";
    case ShortcutKind::All: return "all";
    case ShortcutKind::Single:
    case ShortcutKind::SingleN: return "single";
    }
    return "?";
}

Formula Formula::constant(bool value) {
    Formula f;
    f.kind_ = value ? Kind::True : Kind::False;
    return f;
}

Formula Formula::ref(SignalId signal) {
    Formula f;
    f.kind_ = Kind::Ref;
    f.signal_ = std::move(signal);
    return f;
}

Formula Formula::negate(Formula operand) {
    Formula f;
    f.kind_ = Kind::Not;
    f.operands_.push_back(std::move(operand));
    return f;
}

Formula Formula::nary(Kind kind, std::vector<Formula> operands) {
    std::vector<Formula> flat;
    flat.reserve(operands.size());
    for (auto& op : operands) {
        if (op.kind_ == kind)
            flat.insert(flat.end(), op.operands_.begin(), op.operands_.end());
        else
            flat.push_back(std::move(op));
    }
    if (flat.empty())
        return constant(kind == Kind::And);
    if (flat.size() == 1)
        return std::move(flat.front());
    Formula f;
    f.kind_ = kind;
    f.operands_ = std::move(flat);
    return f;
}

Formula Formula::conj(std::vector<Formula> operands) {
    return nary(Kind::And, std::move(operands));
}

Formula Formula::disj(std::vector<Formula> operands) {
    return nary(Kind::Or, std::move(operands));
}

Formula Formula::shortcut(ShortcutKind kind, std::vector<Formula> operands,
                          std::optional<std::int64_t> selector) {
    Formula f;
    f.kind_ = Kind::Shortcut;
    f.shortcut_ = selector ? ShortcutKind::SingleN : kind;
    f.operands_ = std::move(operands);
    f.selector_ = selector;
    return f;
}

bool Formula::is_shortcut_free() const {
    if (kind_ == Kind::Shortcut)
        return false;
    return std::all_of(operands_.begin(), operands_.end(),
                       [](const Formula& op) { return op.is_shortcut_free(); });
}

namespace {

void render(const Formula& f, std::string& out);

void render_operand(const Formula& op, Formula::Kind parent, std::string& out) {
    bool paren = (parent == Formula::Kind::And && op.kind() == Formula::Kind::Or) ||
                 (parent == Formula::Kind::Not &&
                  (op.kind() == Formula::Kind::And || op.kind() == Formula::Kind::Or));
    if (paren)
        out += '(';
    render(op, out);
    if (paren)
        out += ')';
}

void render(const Formula& f, std::string& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: out += '1'; break;
    case K::False: out += '0'; break;
    case K::Ref: out += f.signal().str(); break;
    case K::Not:
        out += '~';
        render_operand(f.operands().front(), K::Not, out);
        break;
    case K::And:
    case K::Or: {
        const char* sep = f.kind() == K::And ? "*" : " + ";
        for (std::size_t i = 0; i < f.operands().size(); ++i) {
            if (i)
                out += sep;
            render_operand(f.operands()[i], f.kind(), out);
        }
        break;
    }
    case K::Shortcut:
        out += shortcut_name(f.shortcut_kind());
        if (f.selector())
            out += '[' + std::to_string(*f.selector()) + ']';
        out += '(';
        for (std::size_t i = 0; i < f.operands().size(); ++i) {
            if (i)
                out += ", ";
            render(f.operands()[i], out);
        }
        out += ')';
        break;
    }
}

}  // namespace

std::string Formula::str() const {
    std::string out;
    render(*this, out);
    return out;
}

bool eval_formula(const Formula& f, const Valuation& v) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Ref: return v.count(f.signal()) != 0;
    case K::Not: return !eval_formula(f.operands().front(), v);
    case K::And:
        return std::all_of(f.operands().begin(), f.operands().end(),
                           [&](const Formula& op) { return eval_formula(op, v); });
    case K::Or:
        return std::any_of(f.operands().begin(), f.operands().end(),
                           [&](const Formula& op) { return eval_formula(op, v); });
    case K::Shortcut: break;
    }
    throw std::logic_error("E_INTERNAL: unexpanded shortcut in guard: " + f.str());
}

static void collect_signals(const Formula& f, std::set<SignalId>& out) {
    if (f.kind() == Formula::Kind::Ref)
        out.insert(f.signal());
    for (const auto& op : f.operands())
        collect_signals(op, out);
}

std::set<SignalId> formula_signals(const Formula& f) {
    std::set<SignalId> out;
    collect_signals(f, out);
    return out;
}

Formula rewrite_shortcut(const Formula& node) {
    if (node.kind() != Formula::Kind::Shortcut)
        return node;
    std::vector<Formula> set;
    for (const auto& op : node.operands())
        if (std::find(set.begin(), set.end(), op) == set.end())
            set.push_back(op);
    if (set.empty())
        throw DiagnosticError(make_error(codes::empty_shortcut_set,
                                         std::string(shortcut_name(node.shortcut_kind())) +
                                             " over an empty signal set"));

    auto exactly = [&](std::size_t chosen) {
        std::vector<Formula> lits;
        for (std::size_t i = 0; i < set.size(); ++i)
            lits.push_back(i == chosen ? set[i] : Formula::negate(set[i]));
        return Formula::conj(std::move(lits));
    };

    switch (node.shortcut_kind()) {
    case ShortcutKind::Eps: {
        std::vector<Formula> lits;
        for (const auto& s : set)
            lits.push_back(Formula::negate(s));
        return Formula::conj(std::move(lits));
    }
    case ShortcutKind::Any: return Formula::disj(set);
    case ShortcutKind::All: return Formula::conj(set);
    case ShortcutKind::Single: {
        std::vector<Formula> terms;
        for (std::size_t i = 0; i < set.size(); ++i)
            terms.push_back(exactly(i));
        return Formula::disj(std::move(terms));
    }
    case ShortcutKind::SingleN: {
        auto j = node.selector().value_or(-1);
        if (j < 0 || static_cast<std::size_t>(j) >= set.size())
            throw DiagnosticError(make_error(
                codes::index_out_of_range,
                "single[" + std::to_string(j) + "] selects outside a set of " +
                    std::to_string(set.size()) + " signals"));
        return exactly(static_cast<std::size_t>(j));
    }
    }
    return node;
}

Formula rewrite_shortcuts(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::Shortcut: return rewrite_shortcut(f);
    case K::Not: return Formula::negate(rewrite_shortcuts(f.operands().front()));
    case K::And:
    case K::Or: {
        std::vector<Formula> ops;
        for (const auto& op : f.operands())
            ops.push_back(rewrite_shortcuts(op));
        return f.kind() == K::And ? Formula::conj(std::move(ops)) : Formula::disj(std::move(ops));
    }
    default: return f;
    }
}

}  // namespace csm
