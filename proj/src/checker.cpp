#include "csmgen/checker.hpp"

#include "csmgen/expander.hpp"

#include <map>
#include <set>

namespace csm {

namespace {

using Scope = std::set<std::string, std::less<>>;

class ModuleChecker {
public:
    explicit ModuleChecker(const ModuleAst& m) : m_(m) {}

    Diagnostics run() {
        check_header();
        collect_internal_signals();

        std::set<std::string> automata;
        for (const auto& a : m_.automata) {
            if (!automata.insert(a.name).second)
                error(codes::dup_automaton, "automaton " + a.name + " declared twice in module " + m_.name,
                      a.pos, a.name);
            check_automaton(a);
        }

        if (!m_.header_only()) {
            for (const auto& f : m_.formal_signals) {
                if (f.is_input() && !used_.count(f.name))
                    error(codes::input_unused,
                          "input %" + f.name + " is not used in any transition formula", f.pos, f.name);
                if (!f.is_input() && !generated_.count(f.name))
                    error(codes::output_not_generated,
                          "output %" + f.name + " is not generated in any state", f.pos, f.name);
            }
        }
        return std::move(diags_);
    }

private:
    void error(std::string_view code, std::string msg, SourcePos pos, std::string subject) {
        diags_.push_back(make_error(code, std::move(msg), pos, std::move(subject)));
    }

    Scope base_scope() const {
        Scope s;
        for (const auto& p : m_.numeric_params)
            s.insert(p.name);
        return s;
    }

    void check_header() {
        std::set<std::string> ids;
        auto claim = [&](const std::string& id, SourcePos pos) {
            if (!ids.insert(id).second)
                error(codes::dup_formal, "formal identifier " + id + " is used more than once", pos, id);
        };
        for (const auto& p : m_.numeric_params)
            claim(p.name, p.pos);
        Scope params = base_scope();
        for (const auto& f : m_.formal_signals) {
            claim(f.name, f.pos);
            for (const auto& attr : f.attributes)
                claim(attr, f.pos);
            for (const auto& d : f.dims)
                check_range(d, params, {});
        }
    }

    void collect_internal_signals() {
        for (const auto& a : m_.automata)
            for (const auto& g : a.state_groups)
                for (const auto& s : g.states)
                    for (const auto& e : s.emits)
                        if (!m_.find_formal(e.name) && !m_.is_numeric_param(e.name))
                            internal_[e.name].insert(e.indices.size());
    }

    // Identifiers in `e` must be in scope; `later` holds index identifiers
    // introduced further along the same range list.
    void check_expr(const Expr& e, const Scope& scope, const Scope& later,
                    std::string_view ineq_context = {}) {
        for (const auto& t : e.terms) {
            if (t.id.empty() || scope.count(t.id))
                continue;
            if (!ineq_context.empty() && later.count(t.id))
                error(codes::ineq_before_range,
                      "index " + t.id + " is used in inequality " + std::string(ineq_context) +
                          " before its range",
                      e.pos, t.id);
            else
                error(codes::unknown_expr_id,
                      "identifier " + t.id + " is neither a module parameter nor an index in scope",
                      e.pos, t.id);
        }
    }

    void check_range(const Range& r, const Scope& scope, const Scope& later) {
        check_expr(r.low, scope, later);
        if (r.high)
            check_expr(*r.high, scope, later);
    }

    // Adds the range identifiers to `scope`.
    void check_range_list(const std::vector<RangeElement>& elements, Scope& scope) {
        Scope local;
        Scope all_ids;
        for (const auto& el : elements)
            if (auto* r = std::get_if<IndexRange>(&el))
                all_ids.insert(r->id);
        for (const auto& el : elements) {
            if (auto* r = std::get_if<IndexRange>(&el)) {
                for (const auto& range : r->ranges)
                    check_range(range, scope, {});
                bind_index(r->id, r->pos, local, scope);
            } else {
                const auto& q = std::get<Inequality>(el);
                Scope later;
                for (const auto& id : all_ids)
                    if (!local.count(id))
                        later.insert(id);
                if (!local.count(q.id))
                    error(codes::ineq_before_range,
                          "inequality " + q.str() + " must follow the range of index " + q.id, q.pos,
                          q.id);
                check_expr(q.rhs, scope, later, q.str());
            }
        }
    }

    void bind_index(const std::string& id, SourcePos pos, Scope& local, Scope& scope) {
        if (local.count(id) || m_.is_numeric_param(id))
            error(codes::dup_index, "index identifier " + id + " is not unique in its definition", pos,
                  id);
        local.insert(id);
        scope.insert(id);
    }

    enum class Use { Guard, Emission };

    void check_signal(const std::string& name, std::size_t arity, SourcePos pos, Use use) {
        if (m_.is_numeric_param(name)) {
            error(codes::unknown_signal, "module parameter " + name + " used as a signal", pos, name);
            return;
        }
        if (const FormalSignal* f = m_.find_formal(name)) {
            if (use == Use::Emission && f->is_input()) {
                error(codes::input_generated, "input %" + name + " is generated in a state", pos, name);
                return;
            }
            if (f->is_vector() && arity == 0) {
                // Counted as an attempt so the usage rules do not repeat the finding.
                (use == Use::Emission ? generated_ : used_).insert(name);
                if (use == Use::Emission)
                    error(codes::vector_emit_scalar,
                          "vector formal %" + name + " is emitted without an index", pos, name);
                else
                    error(codes::unknown_signal, "vector formal %" + name + " is used without an index",
                          pos, name);
                return;
            }
            if (arity != f->dims.size()) {
                error(codes::unknown_signal,
                      "%" + name + " takes " + std::to_string(f->dims.size()) + " indices, not " +
                          std::to_string(arity),
                      pos, name);
                return;
            }
            if (use == Use::Guard && f->is_input())
                used_.insert(name);
            if (use == Use::Emission)
                generated_.insert(name);
            return;
        }
        if (use == Use::Emission)
            return;  // emitting a non-formal declares an internal signal
        auto it = internal_.find(name);
        if (it == internal_.end())
            error(codes::unknown_signal,
                  "signal " + name + " is neither a formal parameter nor generated in module " + m_.name,
                  pos, name);
        else if (!it->second.count(arity))
            error(codes::unknown_signal,
                  "internal signal " + name + " is never generated with " + std::to_string(arity) +
                      " indices",
                  pos, name);
    }

    void check_signal_ref(const SignalRef& s, const Scope& scope, Use use) {
        for (const auto& e : s.indices)
            check_expr(e, scope, {});
        check_signal(s.name, s.indices.size(), s.pos, use);
    }

    void check_guard(const Guard& g, const Scope& scope) {
        switch (g.kind) {
        case Guard::Kind::Ref: check_signal_ref(g.signal, scope, Use::Guard); break;
        case Guard::Kind::Not:
        case Guard::Kind::And:
        case Guard::Kind::Or:
            for (const auto& op : g.operands)
                check_guard(op, scope);
            break;
        case Guard::Kind::Shortcut:
            if (g.selector)
                check_expr(*g.selector, scope, {});
            for (const auto& el : g.set) {
                // Element ranges open a local scope that may shadow outer indices.
                Scope inner = scope;
                Scope local;
                for (const auto& r : el.ranges) {
                    for (const auto& range : r.ranges)
                        check_range(range, inner, {});
                    bind_index(r.id, r.pos, local, inner);
                }
                for (const auto& e : el.indices)
                    check_expr(e, inner, {});
                std::size_t arity = el.indices.empty() ? el.ranges.size() : el.indices.size();
                check_signal(el.name, arity, el.pos, Use::Guard);
            }
            break;
        default: break;
        }
    }

    void check_automaton(const AutomatonAst& a) {
        for (const auto& g : a.state_groups) {
            Scope scope = base_scope();
            check_range_list(g.ranges, scope);
            for (const auto& s : g.states) {
                for (const auto& e : s.indices)
                    check_expr(e, scope, {});
                for (const auto& e : s.emits)
                    check_signal_ref(e, scope, Use::Emission);
            }
        }
        if (a.initial)
            for (const auto& e : a.initial->indices)
                check_expr(e, base_scope(), {});
        for (const auto& t : a.transitions) {
            Scope scope = base_scope();
            check_range_list(t.ranges, scope);
            for (const auto& e : t.source.indices)
                check_expr(e, scope, {});
            for (const auto& e : t.target.indices)
                check_expr(e, scope, {});
            check_guard(t.guard, scope);
        }
    }

    const ModuleAst& m_;
    Diagnostics diags_;
    std::map<std::string, std::set<std::size_t>> internal_;
    std::set<std::string> used_;
    std::set<std::string> generated_;
};

}  // namespace

Diagnostics check_module(const ModuleAst& m) { return ModuleChecker(m).run(); }

Diagnostics check_actuals(const ModuleAst& m, const InstanceDeclaration& decl) {
    Diagnostics out;
    auto error = [&](std::string_view code, std::string msg, const Actual* a, std::string subject) {
        out.push_back(make_error(code, std::move(msg), a ? a->pos : decl.pos, std::move(subject)));
    };

    for (const auto& a : decl.actuals)
        if (a.vector_range)
            error(codes::vector_actual,
                  "vector " + a.text + " cannot be an actual parameter; pass individual signals", &a,
                  a.signal.name);
    if (!out.empty())
        return out;

    const std::size_t params = m.numeric_params.size();
    if (decl.actuals.size() < params) {
        error(codes::arity,
              "module " + m.name + " takes " + std::to_string(params) + " module parameters but " +
                  std::to_string(decl.actuals.size()) + " actuals were given",
              nullptr, decl.instance_name);
        return out;
    }

    IndexEnv numeric;
    for (std::size_t i = 0; i < params; ++i) {
        const Actual& a = decl.actuals[i];
        if (a.kind != Actual::Kind::Number)
            error(codes::kind,
                  "module parameter " + m.numeric_params[i].name + " needs a number, got " + a.str(), &a,
                  m.numeric_params[i].name);
        else
            numeric[m.numeric_params[i].name] = a.number;
    }
    if (!out.empty())
        return out;

    std::vector<FormalSlot> slots;
    try {
        slots = formal_slots(m, numeric);
    } catch (const DiagnosticError& e) {
        return e.diagnostics();
    }
    if (decl.actuals.size() - params != slots.size()) {
        error(codes::arity,
              "module " + m.name + " needs " + std::to_string(params + slots.size()) +
                  " actuals with these parameters but " + std::to_string(decl.actuals.size()) +
                  " were given",
              nullptr, decl.instance_name);
        return out;
    }

    std::set<SignalId> seen_signals;
    std::set<std::string> seen_attrs;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Actual& a = decl.actuals[params + i];
        const FormalSignal& f = *slots[i].formal;
        const std::string formal = "%" + slots[i].element.str();
        switch (a.kind) {
        case Actual::Kind::Number:
            error(codes::kind, "signal formal " + formal + " cannot take the number " + a.str(), &a,
                  slots[i].element.str());
            break;
        case Actual::Kind::Const0:
        case Actual::Kind::Const1:
            if (!f.is_input())
                error(codes::const_for_output, "output " + formal + " cannot be bound to constant " + a.str(),
                      &a, slots[i].element.str());
            break;
        case Actual::Kind::Dummy:
            if (f.is_input())
                error(codes::dummy_for_input, "input " + formal + " cannot be discarded with dummy", &a,
                      slots[i].element.str());
            break;
        case Actual::Kind::Signal: {
            std::size_t formal_attrs = f.attributes.size();
            std::size_t actual_attrs = a.attributes.size();
            bool compatible = formal_attrs == 0 ? actual_attrs == 0
                              : formal_attrs == 1 ? actual_attrs >= 1
                                                  : actual_attrs == formal_attrs;
            if (!compatible)
                error(codes::attr_arity,
                      "actual " + a.str() + " does not match the attribute list of formal " + formal, &a,
                      a.signal.str());
            if (!seen_signals.insert(a.signal).second)
                error(codes::dup_actual,
                      "signal " + a.signal.str() + " is assigned to more than one formal parameter", &a,
                      a.signal.str());
            for (const auto& attr : a.attributes)
                if (!seen_attrs.insert(attr).second)
                    error(codes::dup_actual,
                          "attribute " + attr + " is assigned to more than one formal attribute", &a, attr);
            break;
        }
        }
    }
    return out;
}

const ModuleAst* find_module(const std::vector<ModuleAst>& library, std::string_view name) {
    for (const auto& m : library)
        if (m.name == name)
            return &m;
    return nullptr;
}

Diagnostics check_instantiation(const SystemAst& sys, const std::vector<ModuleAst>& library) {
    Diagnostics out;
    for (const auto& decl : sys.instances) {
        const ModuleAst* m = find_module(library, decl.module_name);
        if (!m) {
            out.push_back(make_error(codes::unknown_module,
                                     "instance " + decl.instance_name + " refers to unknown module " +
                                         decl.module_name,
                                     decl.pos, decl.module_name));
            continue;
        }
        auto diags = check_actuals(*m, decl);
        out.insert(out.end(), diags.begin(), diags.end());
    }
    return out;
}

}  // namespace csm
