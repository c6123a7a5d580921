#include "csmgen/expander.hpp"

#include "csmgen/checker.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace csm {

std::int64_t eval_index_expression(const Expr& e, const IndexEnv& env) {
    std::int64_t value = 0;
    for (const auto& t : e.terms) {
        std::int64_t v = t.number;
        if (!t.id.empty()) {
            auto it = env.find(t.id);
            if (it == env.end())
                throw DiagnosticError(
                    make_error(codes::unbound_id, "identifier " + t.id + " is not bound", e.pos, t.id));
            v = it->second;
        }
        value += t.negative ? -v : v;
    }
    return value;
}

static std::vector<std::int64_t> range_values(const std::vector<Range>& ranges, const IndexEnv& env) {
    std::vector<std::int64_t> values;
    for (const auto& r : ranges) {
        std::int64_t low = eval_index_expression(r.low, env);
        std::int64_t high = r.high ? eval_index_expression(*r.high, env) : low;
        for (std::int64_t v = low; v <= high; ++v)
            if (std::find(values.begin(), values.end(), v) == values.end())
                values.push_back(v);
    }
    return values;
}

static void expand_from(const std::vector<RangeElement>& ranges, std::size_t i, IndexEnv& env,
                        std::vector<IndexEnv>& out) {
    if (i == ranges.size()) {
        out.push_back(env);
        return;
    }
    if (const auto* q = std::get_if<Inequality>(&ranges[i])) {
        auto it = env.find(q->id);
        if (it == env.end())
            throw DiagnosticError(make_error(codes::unbound_id,
                                             "inequality index " + q->id + " is not bound", q->pos, q->id));
        if (it->second != eval_index_expression(q->rhs, env))
            expand_from(ranges, i + 1, env, out);
        return;
    }
    const auto& r = std::get<IndexRange>(ranges[i]);
    auto values = range_values(r.ranges, env);
    auto saved = env.find(r.id) != env.end() ? std::optional(env.at(r.id)) : std::nullopt;
    for (auto v : values) {
        env[r.id] = v;
        expand_from(ranges, i + 1, env, out);
    }
    if (saved)
        env[r.id] = *saved;
    else
        env.erase(r.id);
}

std::vector<IndexEnv> expand_ranges(const std::vector<RangeElement>& ranges, const IndexEnv& env) {
    std::vector<IndexEnv> out;
    IndexEnv scratch = env;
    expand_from(ranges, 0, scratch, out);
    return out;
}

std::vector<FormalSlot> formal_slots(const ModuleAst& m, const IndexEnv& numeric) {
    std::vector<FormalSlot> slots;
    for (const auto& f : m.formal_signals) {
        if (!f.is_vector()) {
            slots.push_back(FormalSlot{&f, SignalId(f.name)});
            continue;
        }
        std::vector<std::vector<std::int64_t>> dims;
        for (const auto& d : f.dims)
            dims.push_back(range_values({d}, numeric));
        // row-major enumeration of the element indices
        std::vector<std::int64_t> idx;
        auto rec = [&](auto&& self, std::size_t k) -> void {
            if (k == dims.size()) {
                slots.push_back(FormalSlot{&f, SignalId(f.name, idx)});
                return;
            }
            for (auto v : dims[k]) {
                idx.push_back(v);
                self(self, k + 1);
                idx.pop_back();
            }
        };
        rec(rec, 0);
    }
    return slots;
}

BindingEnv bind_instance(const ModuleAst& m, const InstanceDeclaration& decl) {
    auto diags = check_actuals(m, decl);
    if (has_errors(diags))
        throw DiagnosticError(std::move(diags));

    BindingEnv env;
    env.instance = decl.instance_name;
    const std::size_t params = m.numeric_params.size();
    for (std::size_t i = 0; i < params; ++i)
        env.numeric[m.numeric_params[i].name] = decl.actuals[i].number;

    auto slots = formal_slots(m, env.numeric);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Actual& a = decl.actuals[params + i];
        ActualBinding b;
        switch (a.kind) {
        case Actual::Kind::Const0: b.kind = ActualBinding::Kind::Const0; break;
        case Actual::Kind::Const1: b.kind = ActualBinding::Kind::Const1; break;
        case Actual::Kind::Dummy: b.kind = ActualBinding::Kind::Dummy; break;
        default:
            b.kind = ActualBinding::Kind::Signal;
            b.signal = a.signal;
            b.attributes = a.attributes;
            break;
        }
        const auto& formal_attrs = slots[i].formal->attributes;
        if (b.kind == ActualBinding::Kind::Signal && !formal_attrs.empty()) {
            if (formal_attrs.size() == 1) {
                env.attribute[formal_attrs.front()] = a.attributes;
            } else {
                for (std::size_t k = 0; k < formal_attrs.size(); ++k)
                    env.attribute[formal_attrs[k]] = {a.attributes[k]};
            }
        }
        env.signal.emplace(slots[i].element, std::move(b));
    }
    return env;
}

namespace {

/// Resolves signal occurrences of one instance and records what it touched.
class SignalResolver {
public:
    SignalResolver(const ModuleAst& m, const BindingEnv& binding) : m_(m), binding_(binding) {}

    /// nullopt means the signal is discarded (bound to dummy).
    std::optional<ActualBinding> resolve(const std::string& name, std::vector<std::int64_t> indices,
                                         SourcePos pos) {
        const FormalSignal* f = m_.find_formal(name);
        if (!f) {
            ActualBinding b;
            b.signal = SignalId(binding_.instance + "__" + name, std::move(indices));
            return b;
        }
        SignalId key(name, std::move(indices));
        auto it = binding_.signal.find(key);
        if (it == binding_.signal.end()) {
            if (f->is_vector())
                throw DiagnosticError(make_error(codes::index_out_of_range,
                                                 "%" + key.str() + " is outside the declared range of %" +
                                                     name,
                                                 pos, key.str()));
            throw DiagnosticError(
                make_error(codes::unbound_id, "formal %" + key.str() + " is not bound", pos, key.str()));
        }
        if (it->second.kind == ActualBinding::Kind::Signal && !f->attributes.empty())
            attributes_[it->second.signal] = it->second.attributes;
        if (it->second.kind == ActualBinding::Kind::Dummy)
            return std::nullopt;
        return it->second;
    }

    Formula guard_operand(const std::string& name, std::vector<std::int64_t> indices, SourcePos pos) {
        auto b = resolve(name, std::move(indices), pos);
        if (!b)
            return Formula::constant(false);
        switch (b->kind) {
        case ActualBinding::Kind::Const0: return Formula::constant(false);
        case ActualBinding::Kind::Const1: return Formula::constant(true);
        default:
            referenced_.insert(b->signal);
            return Formula::ref(b->signal);
        }
    }

    Formula guard(const Guard& g, const IndexEnv& env) {
        using K = Guard::Kind;
        switch (g.kind) {
        case K::True: return Formula::constant(true);
        case K::False: return Formula::constant(false);
        case K::Ref: return guard_operand(g.signal.name, eval_all(g.signal.indices, env), g.signal.pos);
        case K::Not: return Formula::negate(guard(g.operands.front(), env));
        case K::And:
        case K::Or: {
            std::vector<Formula> ops;
            for (const auto& op : g.operands)
                ops.push_back(guard(op, env));
            return g.kind == K::And ? Formula::conj(std::move(ops)) : Formula::disj(std::move(ops));
        }
        case K::Shortcut: {
            std::vector<Formula> set;
            for (const auto& el : g.set) {
                if (el.ranges.empty()) {
                    set.push_back(guard_operand(el.name, eval_all(el.indices, env), el.pos));
                    continue;
                }
                std::vector<RangeElement> ranges(el.ranges.begin(), el.ranges.end());
                for (const auto& inner : expand_ranges(ranges, env)) {
                    std::vector<std::int64_t> idx;
                    if (el.indices.empty())
                        for (const auto& r : el.ranges)
                            idx.push_back(inner.at(r.id));
                    else
                        idx = eval_all(el.indices, inner);
                    set.push_back(guard_operand(el.name, std::move(idx), el.pos));
                }
            }
            std::optional<std::int64_t> selector;
            if (g.selector)
                selector = eval_index_expression(*g.selector, env);
            try {
                return rewrite_shortcut(Formula::shortcut(g.shortcut, std::move(set), selector));
            } catch (const DiagnosticError& e) {
                Diagnostic d = e.diagnostics().front();
                d.pos = g.pos;
                d.message += " in " + g.str();
                throw DiagnosticError(std::move(d));
            }
        }
        }
        return Formula::constant(true);
    }

    static std::vector<std::int64_t> eval_all(const std::vector<Expr>& exprs, const IndexEnv& env) {
        std::vector<std::int64_t> out;
        for (const auto& e : exprs)
            out.push_back(eval_index_expression(e, env));
        return out;
    }

    const std::set<SignalId>& referenced() const { return referenced_; }
    const std::map<SignalId, std::vector<std::string>>& attributes() const { return attributes_; }

private:
    const ModuleAst& m_;
    const BindingEnv& binding_;
    std::set<SignalId> referenced_;
    std::map<SignalId, std::vector<std::string>> attributes_;
};

std::string state_name(const std::string& base, const std::vector<std::int64_t>& indices, SourcePos pos) {
    for (auto i : indices)
        if (i < 0)
            throw DiagnosticError(make_error(codes::index_out_of_range,
                                             "negative index in state " + render_indexed(base, indices),
                                             pos, render_indexed(base, indices)));
    return render_indexed(base, indices);
}

std::vector<ConcreteState> expand_states_impl(const AutomatonAst& a, SignalResolver& resolver,
                                              const BindingEnv& binding) {
    std::vector<ConcreteState> states;
    auto add = [&](std::string name, std::set<SignalId> emits) {
        for (auto& s : states) {
            if (s.name == name) {
                s.emits.insert(s.emits.end(), emits.begin(), emits.end());
                std::sort(s.emits.begin(), s.emits.end());
                s.emits.erase(std::unique(s.emits.begin(), s.emits.end()), s.emits.end());
                return;
            }
        }
        states.push_back(ConcreteState{std::move(name), {emits.begin(), emits.end()}});
    };
    auto emissions = [&](const StateDecl& d, const IndexEnv& env) {
        std::set<SignalId> out;
        for (const auto& e : d.emits) {
            auto b = resolver.resolve(e.name, SignalResolver::eval_all(e.indices, env), e.pos);
            if (b && b->kind == ActualBinding::Kind::Signal)
                out.insert(b->signal);
        }
        return out;
    };

    std::vector<std::string> group_names;
    for (const auto& g : a.state_groups) {
        auto envs = expand_ranges(g.ranges, binding.numeric);
        std::set<std::string> seen_in_group;
        for (const auto& d : g.states) {
            if (d.indices.empty()) {
                std::set<SignalId> emits;
                if (envs.empty()) {
                    emits = emissions(d, binding.numeric);
                } else {
                    for (const auto& env : envs) {
                        auto e = emissions(d, env);
                        emits.insert(e.begin(), e.end());
                    }
                }
                if (seen_in_group.insert(d.name).second)
                    group_names.push_back(d.name);
                add(d.name, std::move(emits));
                continue;
            }
            for (const auto& env : envs) {
                auto name = state_name(d.name, SignalResolver::eval_all(d.indices, env), d.pos);
                if (seen_in_group.insert(name).second)
                    group_names.push_back(name);
                add(name, emissions(d, env));
            }
        }
    }
    // A name repeated across groups is kept twice so validation reports it.
    if (group_names.size() != states.size()) {
        std::vector<ConcreteState> ordered;
        for (const auto& n : group_names)
            for (const auto& s : states)
                if (s.name == n)
                    ordered.push_back(s);
        return ordered;
    }
    return states;
}

class StateIndex {
public:
    explicit StateIndex(const std::vector<ConcreteState>& states, const AutomatonAst* ast = nullptr) {
        for (const auto& s : states) {
            names_.insert(s.name);
            auto bracket = s.name.find('[');
            if (bracket != std::string::npos)
                families_.insert(s.name.substr(0, bracket));
        }
        (void)ast;
    }

    std::string resolve(const StateRef& ref, const IndexEnv& env) const {
        auto name = state_name(ref.name, SignalResolver::eval_all(ref.indices, env), ref.pos);
        if (names_.count(name))
            return name;
        if (!ref.indices.empty() && families_.count(ref.name))
            throw DiagnosticError(make_error(codes::index_out_of_range,
                                             "state " + name + " is outside the generated state vector " +
                                                 ref.name,
                                             ref.pos, name));
        throw DiagnosticError(
            make_error(codes::unknown_state, "state " + name + " is not declared", ref.pos, name));
    }

private:
    std::set<std::string> names_;
    std::set<std::string> families_;
};

std::vector<ConcreteTransition> expand_transitions_impl(std::span<const TransitionAst> rules,
                                                        SignalResolver& resolver,
                                                        const BindingEnv& binding,
                                                        const std::vector<ConcreteState>& states) {
    StateIndex index(states);
    std::vector<ConcreteTransition> out;
    std::unordered_set<std::string> seen;
    for (const auto& rule : rules) {
        for (const auto& env : expand_ranges(rule.ranges, binding.numeric)) {
            ConcreteTransition t{index.resolve(rule.source, env), resolver.guard(rule.guard, env),
                                 index.resolve(rule.target, env)};
            std::string key = t.source + '\x1f' + t.guard.str() + '\x1f' + t.target;
            if (seen.insert(key).second)
                out.push_back(std::move(t));
        }
    }
    return out;
}

// Adds the automaton name to diagnostics raised while expanding it.
template <typename F>
auto with_context(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const DiagnosticError& e) {
        Diagnostics diags = e.diagnostics();
        for (auto& d : diags)
            d.message += " (while expanding " + what + ")";
        throw DiagnosticError(std::move(diags));
    }
}

}  // namespace

std::vector<ConcreteState> expand_states(const AutomatonAst& a, const ModuleAst& m,
                                         const BindingEnv& binding) {
    SignalResolver resolver(m, binding);
    return expand_states_impl(a, resolver, binding);
}

std::vector<ConcreteTransition> expand_transitions(std::span<const TransitionAst> rules,
                                                   const ModuleAst& m, const BindingEnv& binding,
                                                   const std::vector<ConcreteState>& states) {
    SignalResolver resolver(m, binding);
    return expand_transitions_impl(rules, resolver, binding, states);
}

std::vector<ConcreteAutomaton> instantiate_module(const ModuleAst& m, const InstanceDeclaration& decl,
                                                  Diagnostics* warnings) {
    if (m.header_only())
        throw DiagnosticError(make_error(codes::header_only,
                                         "module " + m.name + " only declares an interface and cannot be expanded",
                                         decl.pos, m.name));
    BindingEnv binding = bind_instance(m, decl);

    std::vector<ConcreteAutomaton> out;
    std::set<SignalId> referenced;
    for (const auto& a : m.automata) {
        std::string qualified = decl.instance_name + "." + a.name;
        out.push_back(with_context(qualified, [&] {
            SignalResolver resolver(m, binding);
            ConcreteAutomaton ca;
            ca.name = qualified;
            ca.states = expand_states_impl(a, resolver, binding);
            if (a.initial)
                ca.initial = StateIndex(ca.states).resolve(*a.initial, binding.numeric);
            else if (!ca.states.empty())
                ca.initial = ca.states.front().name;
            ca.transitions = expand_transitions_impl(a.transitions, resolver, binding, ca.states);
            ca.attributes = resolver.attributes();
            referenced.insert(resolver.referenced().begin(), resolver.referenced().end());
            auto diags = validate_automaton(ca);
            if (has_errors(diags))
                throw DiagnosticError(std::move(diags));
            return ca;
        }));
    }

    if (warnings) {
        for (const auto& slot : formal_slots(m, binding.numeric)) {
            if (!slot.formal->is_input() || !slot.formal->is_vector())
                continue;
            const auto& b = binding.signal.at(slot.element);
            if (b.kind == ActualBinding::Kind::Signal && !referenced.count(b.signal))
                warnings->push_back(make_warning(codes::input_unused,
                                                 "element %" + slot.element.str() + " of " +
                                                     decl.instance_name + " is never read",
                                                 slot.formal->pos, slot.element.str()));
        }
    }
    return out;
}

InstanceDeclaration default_instance(const ModuleAst& m, const IndexEnv& numeric,
                                     std::string instance_name, const std::vector<std::string>& signals) {
    InstanceDeclaration decl;
    decl.instance_name = instance_name.empty() ? m.name : std::move(instance_name);
    decl.module_name = m.name;
    for (const auto& p : m.numeric_params) {
        auto it = numeric.find(p.name);
        if (it == numeric.end())
            throw DiagnosticError(make_error(codes::unbound_id,
                                             "module parameter " + p.name + " of " + m.name + " is not bound",
                                             p.pos, p.name));
        Actual a;
        a.kind = Actual::Kind::Number;
        a.number = it->second;
        a.text = std::to_string(it->second);
        decl.actuals.push_back(std::move(a));
    }
    if (!signals.empty()) {
        for (const auto& text : signals) {
            Actual a;
            a.text = text;
            if (text == "_0") {
                a.kind = Actual::Kind::Const0;
            } else if (text == "_1") {
                a.kind = Actual::Kind::Const1;
            } else if (text == "dummy") {
                a.kind = Actual::Kind::Dummy;
            } else if (auto id = parse_signal_id(text)) {
                a.signal = *id;
            } else {
                throw DiagnosticError(
                    make_error(codes::parse, "malformed actual signal '" + text + "'", {}, text));
            }
            decl.actuals.push_back(std::move(a));
        }
        return decl;
    }
    for (const auto& slot : formal_slots(m, numeric)) {
        Actual a;
        a.signal = slot.element;
        a.text = slot.element.str();
        if (slot.formal->attributes.size() == 1)
            a.attributes = {slot.formal->attributes.front()};
        else
            a.attributes = slot.formal->attributes;
        decl.actuals.push_back(std::move(a));
    }
    return decl;
}

SystemConfig expand_module(const ModuleAst& m, const IndexEnv& numeric, std::string instance_name,
                           const std::vector<std::string>& signals) {
    auto decl = default_instance(m, numeric, std::move(instance_name), signals);
    SystemConfig sys;
    sys.automata = instantiate_module(m, decl, &sys.warnings);
    auto binding = bind_instance(m, decl);
    for (const auto& [formal, b] : binding.signal)
        if (b.kind == ActualBinding::Kind::Signal && m.find_formal(formal.name)->is_input())
            sys.externals.insert(b.signal);
    return sys;
}

SystemConfig expand_system(const SystemAst& sys, const std::vector<ModuleAst>& library) {
    Diagnostics diags = check_instantiation(sys, library);
    if (has_errors(diags))
        throw DiagnosticError(std::move(diags));

    SystemConfig out;
    out.externals.insert(sys.external_signals.begin(), sys.external_signals.end());

    struct InstanceSignals {
        std::set<SignalId> inputs, outputs, emitted;
        const InstanceDeclaration* decl = nullptr;
    };
    std::vector<InstanceSignals> per_instance;

    for (const auto& decl : sys.instances) {
        const ModuleAst& m = *find_module(library, decl.module_name);
        try {
            auto automata = instantiate_module(m, decl, &out.warnings);
            InstanceSignals sig;
            sig.decl = &decl;
            auto binding = bind_instance(m, decl);
            for (const auto& [formal, b] : binding.signal) {
                if (b.kind != ActualBinding::Kind::Signal)
                    continue;
                (m.find_formal(formal.name)->is_input() ? sig.inputs : sig.outputs).insert(b.signal);
            }
            for (const auto& a : automata)
                for (const auto& s : a.states)
                    sig.emitted.insert(s.emits.begin(), s.emits.end());
            per_instance.push_back(std::move(sig));
            for (auto& a : automata)
                out.automata.push_back(std::move(a));
        } catch (const DiagnosticError& e) {
            for (auto d : e.diagnostics()) {
                if (d.pos.line == 0)
                    d.pos = decl.pos;
                diags.push_back(std::move(d));
            }
        }
    }

    for (const auto& alias : sys.automaton_aliases) {
        std::string target = alias.instance + "." + alias.automaton;
        auto it = std::find_if(out.automata.begin(), out.automata.end(),
                               [&](const ConcreteAutomaton& a) { return a.name == target; });
        if (it == out.automata.end()) {
            diags.push_back(make_error(codes::unknown_automaton,
                                       "alias " + alias.alias + " refers to unknown automaton " + target,
                                       alias.pos, target));
            continue;
        }
        it->name = alias.alias;
    }

    for (std::size_t k = 0; k < per_instance.size(); ++k) {
        auto generated_elsewhere = [&](const SignalId& s) {
            if (out.externals.count(s))
                return true;
            for (std::size_t j = 0; j < per_instance.size(); ++j)
                if (j != k && per_instance[j].emitted.count(s))
                    return true;
            return false;
        };
        const auto& inst = per_instance[k];
        for (const auto& s : inst.inputs)
            if (!generated_elsewhere(s))
                diags.push_back(make_error(codes::input_not_generated,
                                           "input " + s.str() + " of " + inst.decl->instance_name +
                                               " is neither EXTERNAL nor generated by another instance",
                                           inst.decl->pos, s.str()));
        for (const auto& s : inst.outputs)
            if (generated_elsewhere(s))
                diags.push_back(make_error(codes::output_generated_outside,
                                           "output " + s.str() + " of " + inst.decl->instance_name +
                                               " is also generated outside the instance",
                                           inst.decl->pos, s.str()));
    }

    std::set<std::string> names;
    for (const auto& a : out.automata)
        if (!names.insert(a.name).second)
            diags.push_back(make_error(codes::dup_automaton, "automaton name " + a.name + " is used twice",
                                       {}, a.name));

    if (has_errors(diags))
        throw DiagnosticError(std::move(diags));
    return out;
}

SystemConfig flat_to_system(const FlatAst& flat) {
    SystemConfig sys;
    sys.externals.insert(flat.external_signals.begin(), flat.external_signals.end());
    for (const auto& a : flat.automata) {
        // Flat signals are already concrete: identity binding, no renaming.
        ConcreteAutomaton ca;
        ca.name = a.name;
        IndexEnv none;
        auto concrete = [&](const SignalRef& s) {
            return SignalId(s.name, SignalResolver::eval_all(s.indices, none));
        };
        for (const auto& g : a.state_groups)
            for (const auto& d : g.states) {
                ConcreteState cs{state_name(d.name, SignalResolver::eval_all(d.indices, none), d.pos), {}};
                for (const auto& e : d.emits)
                    cs.emits.push_back(concrete(e));
                std::sort(cs.emits.begin(), cs.emits.end());
                ca.states.push_back(std::move(cs));
            }
        auto to_formula = [&](auto&& self, const Guard& g) -> Formula {
            using K = Guard::Kind;
            switch (g.kind) {
            case K::True: return Formula::constant(true);
            case K::False: return Formula::constant(false);
            case K::Ref: return Formula::ref(concrete(g.signal));
            case K::Not: return Formula::negate(self(self, g.operands.front()));
            case K::And:
            case K::Or: {
                std::vector<Formula> ops;
                for (const auto& op : g.operands)
                    ops.push_back(self(self, op));
                return g.kind == K::And ? Formula::conj(std::move(ops)) : Formula::disj(std::move(ops));
            }
            default: return Formula::constant(true);
            }
        };
        auto ref_name = [&](const StateRef& r) {
            return state_name(r.name, SignalResolver::eval_all(r.indices, none), r.pos);
        };
        ca.initial = a.initial ? ref_name(*a.initial) : (ca.states.empty() ? "" : ca.states.front().name);
        for (const auto& t : a.transitions)
            ca.transitions.push_back(
                ConcreteTransition{ref_name(t.source), to_formula(to_formula, t.guard), ref_name(t.target)});
        for (const auto& attrs : a.attributes)
            ca.attributes[attrs.signal] = attrs.attributes;
        auto diags = validate_automaton(ca);
        if (has_errors(diags))
            throw DiagnosticError(std::move(diags));
        sys.automata.push_back(std::move(ca));
    }
    return sys;
}

}  // namespace csm
