#include "csmgen/exporters.hpp"

#include <sstream>

namespace csm {

namespace {

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + '"';
}

std::string emission_list(const ConcreteState& s) {
    std::string out;
    for (const auto& e : s.emits) {
        if (!out.empty())
            out += ", ";
        out += e.str();
    }
    return out;
}

std::string node_label(const ConcreteState& s) {
    return s.emits.empty() ? s.name : s.name + " / " + emission_list(s);
}

void dot_body(std::ostream& out, const ConcreteAutomaton& a, const std::string& prefix,
              const std::string& indent) {
    const std::string init = prefix.empty() ? "__init" : prefix + "__init";
    out << indent << quote(init) << " [shape=point];\n";
    for (const auto& s : a.states)
        out << indent << quote(prefix + s.name) << " [label=" << quote(node_label(s)) << "];\n";
    if (!a.initial.empty())
        out << indent << quote(init) << " -> " << quote(prefix + a.initial) << ";\n";
    for (const auto& t : a.transitions)
        out << indent << quote(prefix + t.source) << " -> " << quote(prefix + t.target)
            << " [label=" << quote(t.guard.str()) << "];\n";
}

}  // namespace

std::string emit_dot(const ConcreteAutomaton& a) {
    std::ostringstream out;
    out << "digraph " << quote(a.name) << " {\n";
    dot_body(out, a, "", "  ");
    out << "}\n";
    return out.str();
}

std::string emit_dot(const SystemConfig& sys) {
    std::ostringstream out;
    out << "digraph {\n";
    for (std::size_t i = 0; i < sys.automata.size(); ++i) {
        const auto& a = sys.automata[i];
        out << "  subgraph " << quote("cluster_" + std::to_string(i)) << " {\n";
        out << "    label=" << quote(a.name) << ";\n";
        dot_body(out, a, a.name + ":", "    ");
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

std::string emit_flat(const SystemConfig& sys) {
    std::ostringstream out;
    if (!sys.externals.empty()) {
        out << "EXTERNAL ";
        bool first = true;
        for (const auto& s : sys.externals) {
            out << (first ? "" : ", ") << s.str();
            first = false;
        }
        out << "\n";
    }
    for (const auto& a : sys.automata) {
        out << "AUTOMATON " << a.name << "\n";
        for (const auto& s : a.states) {
            out << "  STATES (" << s.name;
            if (s.emits.size() == 1)
                out << " / " << s.emits.front().str();
            else if (s.emits.size() > 1)
                out << " / (" << emission_list(s) << ")";
            out << ")\n";
        }
        out << "  init " << a.initial << "\n";
        for (const auto& [signal, attrs] : a.attributes) {
            out << "  ATTRS " << signal.str() << "(";
            for (std::size_t i = 0; i < attrs.size(); ++i)
                out << (i ? ", " : "") << attrs[i];
            out << ")\n";
        }
        for (const auto& t : a.transitions)
            out << "  TRANS " << t.source << " --{ " << t.guard.str() << " }--> " << t.target << "\n";
    }
    return out.str();
}

std::string render_system_state(const SystemState& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? ", " : "") + s[i];
    return out + ")";
}

std::string render_reach_graph(const ReachGraph& g) {
    std::ostringstream out;
    for (const auto& n : g.nodes)
        out << "STATE " << render_system_state(n) << "\n";
    for (const auto& e : g.edges)
        out << "EDGE " << render_system_state(g.nodes[e.from]) << " --" << render_valuation(e.inputs)
            << "--> " << render_system_state(g.nodes[e.to]) << "\n";
    return out.str();
}

}  // namespace csm
