#include "csmgen/ast.hpp"
#include "csmgen/parser.hpp"

namespace csm {

Expr Expr::literal(std::int64_t value, SourcePos pos) {
    Expr e;
    e.terms.push_back(Term{false, {}, value});
    e.pos = pos;
    return e;
}

Expr Expr::identifier(std::string id, SourcePos pos) {
    Expr e;
    e.terms.push_back(Term{false, std::move(id), 0});
    e.pos = pos;
    return e;
}

std::string Expr::str() const {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i || terms[i].negative)
            out += terms[i].negative ? '-' : '+';
        out += terms[i].id.empty() ? std::to_string(terms[i].number) : terms[i].id;
    }
    return out;
}

std::string Range::str() const { return high ? low.str() + ".." + high->str() : low.str(); }

static std::string join_ranges(const std::vector<Range>& ranges) {
    std::string out;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (i)
            out += ", ";
        out += ranges[i].str();
    }
    return out;
}

static std::string join_exprs(const std::vector<Expr>& exprs) {
    std::string out;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        if (i)
            out += ',';
        out += exprs[i].str();
    }
    return out;
}

std::string IndexRange::str() const { return "[" + id + "=" + join_ranges(ranges) + "]"; }

std::string Inequality::str() const { return "[" + id + "/=" + rhs.str() + "]"; }

std::string render_ranges(const std::vector<RangeElement>& ranges) {
    std::string out;
    for (const auto& r : ranges)
        out += std::visit([](const auto& e) { return e.str(); }, r);
    return out;
}

std::string SignalRef::str() const {
    std::string out = name;
    if (!indices.empty())
        out += "[" + join_exprs(indices) + "]";
    for (const auto& r : ranges)
        out += r.str();
    return out;
}

std::string StateRef::str() const {
    return indices.empty() ? name : name + "[" + join_exprs(indices) + "]";
}

namespace {

void render_guard(const Guard& g, std::string& out);

void render_guard_operand(const Guard& op, Guard::Kind parent, std::string& out) {
    bool paren = (parent == Guard::Kind::And && op.kind == Guard::Kind::Or) ||
                 (parent == Guard::Kind::Not &&
                  (op.kind == Guard::Kind::And || op.kind == Guard::Kind::Or));
    if (paren)
        out += '(';
    render_guard(op, out);
    if (paren)
        out += ')';
}

void render_guard(const Guard& g, std::string& out) {
    using K = Guard::Kind;
    switch (g.kind) {
    case K::True: out += '1'; break;
    case K::False: out += '0'; break;
    case K::Ref: out += g.signal.str(); break;
    case K::Not:
        out += '~';
        render_guard_operand(g.operands.front(), K::Not, out);
        break;
    case K::And:
    case K::Or:
        for (std::size_t i = 0; i < g.operands.size(); ++i) {
            if (i)
                out += g.kind == K::And ? "*" : " + ";
            render_guard_operand(g.operands[i], g.kind, out);
        }
        break;
    case K::Shortcut:
        out += shortcut_name(g.shortcut);
        if (g.selector)
            out += "[" + g.selector->str() + "]";
        out += '(';
        for (std::size_t i = 0; i < g.set.size(); ++i) {
            if (i)
                out += ", ";
            out += g.set[i].str();
        }
        out += ')';
        break;
    }
}

}  // namespace

std::string Guard::str() const {
    std::string out;
    render_guard(*this, out);
    return out;
}

std::string Actual::str() const {
    switch (kind) {
    case Kind::Number: return std::to_string(number);
    case Kind::Const0: return "_0";
    case Kind::Const1: return "_1";
    case Kind::Dummy: return "dummy";
    case Kind::Signal: break;
    }
    if (vector_range)
        return text;
    std::string out = signal.str();
    if (!attributes.empty()) {
        out += '(';
        for (std::size_t i = 0; i < attributes.size(); ++i) {
            if (i)
                out += ", ";
            out += attributes[i];
        }
        out += ')';
    }
    return out;
}

const FormalSignal* ModuleAst::find_formal(std::string_view formal) const {
    for (const auto& f : formal_signals)
        if (f.name == formal)
            return &f;
    return nullptr;
}

bool ModuleAst::is_numeric_param(std::string_view id) const {
    for (const auto& p : numeric_params)
        if (p.name == id)
            return true;
    return false;
}

static void render_automaton_body(const AutomatonAst& a, std::string& out) {
    for (const auto& g : a.state_groups) {
        out += "  STATES ";
        if (!g.ranges.empty())
            out += render_ranges(g.ranges) + " ";
        out += '(';
        for (std::size_t i = 0; i < g.states.size(); ++i) {
            const auto& s = g.states[i];
            if (i)
                out += ", ";
            out += s.name;
            if (!s.indices.empty())
                out += "[" + join_exprs(s.indices) + "]";
            if (s.emits.size() == 1) {
                out += " / " + s.emits.front().str();
            } else if (s.emits.size() > 1) {
                out += " / (";
                for (std::size_t k = 0; k < s.emits.size(); ++k) {
                    if (k)
                        out += ", ";
                    out += s.emits[k].str();
                }
                out += ')';
            }
        }
        out += ")\n";
    }
    if (a.initial)
        out += "  init " + a.initial->str() + "\n";
    for (const auto& t : a.transitions) {
        out += "  TRANS ";
        if (!t.ranges.empty())
            out += render_ranges(t.ranges) + " ";
        out += t.source.str() + " --{ " + t.guard.str() + " }--> " + t.target.str() + "\n";
    }
}

std::string render_module(const ModuleAst& m) {
    std::string out = "MODULE " + m.name;
    if (!m.numeric_params.empty() || !m.formal_signals.empty()) {
        out += '(';
        bool first = true;
        for (const auto& p : m.numeric_params) {
            out += (first ? "" : ", ") + std::string("%[") + p.name + "]";
            first = false;
        }
        for (const auto& f : m.formal_signals) {
            out += (first ? "" : ", ");
            first = false;
            out += (f.is_input() ? "in %" : "out %") + f.name;
            if (f.is_vector())
                out += "[" + join_ranges(f.dims) + "]";
            if (!f.attributes.empty()) {
                out += '(';
                for (std::size_t i = 0; i < f.attributes.size(); ++i)
                    out += (i ? ", %" : "%") + f.attributes[i];
                out += ')';
            }
        }
        out += ')';
    }
    out += '\n';
    for (const auto& a : m.automata) {
        out += "AUTOMATON " + a.name + "\n";
        render_automaton_body(a, out);
    }
    out += "END\n";
    return out;
}

std::string render_library(const std::vector<ModuleAst>& modules) {
    std::string out;
    for (std::size_t i = 0; i < modules.size(); ++i) {
        if (i)
            out += '\n';
        out += render_module(modules[i]);
    }
    return out;
}

std::string render_system(const SystemAst& sys) {
    std::string out = "SYSTEM";
    if (!sys.name.empty())
        out += " " + sys.name;
    out += '\n';
    for (const auto& inst : sys.instances) {
        out += "INSTANCE " + inst.instance_name;
        if (!inst.actuals.empty()) {
            out += '(';
            for (std::size_t i = 0; i < inst.actuals.size(); ++i)
                out += (i ? ", " : "") + inst.actuals[i].str();
            out += ')';
        }
        out += ":" + inst.module_name + "\n";
    }
    for (const auto& a : sys.automaton_aliases)
        out += a.alias + ":" + a.instance + "." + a.automaton + "\n";
    if (!sys.external_signals.empty()) {
        out += "EXTERNAL ";
        for (std::size_t i = 0; i < sys.external_signals.size(); ++i)
            out += (i ? ", " : "") + sys.external_signals[i].str();
        out += '\n';
    }
    out += "END\n";
    return out;
}

}  // namespace csm
