#include "csmgen/analyzer.hpp"
#include "csmgen/checker.hpp"
#include "csmgen/cli.hpp"
#include "csmgen/expander.hpp"
#include "csmgen/exporters.hpp"
#include "csmgen/parser.hpp"
#include "csmgen/stdlib.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace csm;

namespace {

std::vector<std::string> rendered(const Diagnostics& diags, const std::string& file) {
    std::vector<std::string> out;
    for (const auto& d : diags)
        out.push_back(d.render(file));
    return out;
}

void raise_on_errors(const Diagnostics& diags) {
    if (has_errors(diags))
        throw DiagnosticError(diags);
}

std::vector<ModuleAst> library_with(const std::string& library) {
    std::vector<ModuleAst> modules;
    if (!library.empty()) {
        auto parsed = parse_library(library);
        raise_on_errors(parsed.diagnostics);
        modules = std::move(parsed.modules);
    }
    for (auto& m : builtin_library())
        if (!find_module(modules, m.name))
            modules.push_back(std::move(m));
    return modules;
}

SystemConfig from_flat(const std::string& text) {
    auto parsed = parse_flat(text);
    raise_on_errors(parsed.diagnostics);
    return flat_to_system(parsed.flat);
}

SystemConfig expand_one(const std::string& module, const std::map<std::string, std::int64_t>& params,
                        const std::string& library, const std::string& as, const std::vector<std::string>& signals) {
    auto modules = library_with(library);
    const ModuleAst* m = find_module(modules, module);
    if (!m)
        throw py::key_error("no module named " + module);
    IndexEnv numeric(params.begin(), params.end());
    return expand_module(*m, numeric, as, signals);
}

Valuation valuation(const std::vector<std::string>& names) {
    Valuation v;
    for (const auto& n : names) {
        auto id = parse_signal_id(n);
        if (!id)
            throw py::value_error("malformed signal " + n);
        v.insert(*id);
    }
    return v;
}

std::vector<std::string> names(const Valuation& v) {
    std::vector<std::string> out;
    for (const auto& s : v)
        out.push_back(s.str());
    return out;
}

std::vector<Valuation> trace_of(const std::vector<std::vector<std::string>>& trace) {
    std::vector<Valuation> out;
    for (const auto& step : trace)
        out.push_back(valuation(step));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    py::register_exception<DiagnosticError>(mod, "CsmError", PyExc_ValueError);

    mod.def("builtin_names", [] {
        std::vector<std::string> out;
        for (const auto& e : builtin_entries())
            out.push_back(e.name);
        return out;
    });
    mod.def("builtin_source", [](const std::string& name) {
        for (const auto& e : builtin_entries())
            if (e.name == name)
                return std::string(e.source);
        throw py::key_error("no builtin named " + name);
    });

    mod.def(
        "check_library",
        [](const std::string& text, const std::string& file) {
            auto parsed = parse_library(text);
            auto diags = parsed.diagnostics;
            for (const auto& m : parsed.modules)
                for (auto& d : check_module(m))
                    diags.push_back(std::move(d));
            return rendered(diags, file);
        },
        py::arg("text"), py::arg("file") = "<library>");
    mod.def(
        "check_system",
        [](const std::string& text, const std::string& library, const std::string& file) {
            auto parsed = parse_system(text);
            auto diags = parsed.diagnostics;
            if (!has_errors(diags))
                for (auto& d : check_instantiation(parsed.system, library_with(library)))
                    diags.push_back(std::move(d));
            return rendered(diags, file);
        },
        py::arg("text"), py::arg("library") = "", py::arg("file") = "<system>");

    mod.def(
        "expand",
        [](const std::string& module, const std::map<std::string, std::int64_t>& params, const std::string& library,
           const std::string& format, const std::string& as, const std::vector<std::string>& signals) {
            auto sys = expand_one(module, params, library, as, signals);
            if (format == "flat")
                return emit_flat(sys);
            if (format == "dot")
                return sys.automata.size() == 1 ? emit_dot(sys.automata[0]) : emit_dot(sys);
            throw py::value_error("format must be flat or dot");
        },
        py::arg("module"), py::arg("params") = std::map<std::string, std::int64_t>{}, py::arg("library") = "",
        py::arg("format") = "flat", py::arg("instance") = "", py::arg("signals") = std::vector<std::string>{});
    mod.def(
        "expand_system",
        [](const std::string& text, const std::string& library) {
            auto parsed = parse_system(text);
            raise_on_errors(parsed.diagnostics);
            return emit_flat(expand_system(parsed.system, library_with(library)));
        },
        py::arg("text"), py::arg("library") = "");

    mod.def(
        "simulate",
        [](const std::string& flat, const std::vector<std::vector<std::string>>& trace) {
            std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> out;
            for (const auto& s : simulate(from_flat(flat), trace_of(trace)))
                out.emplace_back(s.next, names(s.emitted));
            return out;
        },
        py::arg("flat"), py::arg("trace"));
    mod.def(
        "explore",
        [](const std::string& flat, int depth, std::size_t budget) {
            auto sys = from_flat(flat);
            auto g = explore(sys, sys.externals, depth, budget);
            std::vector<std::tuple<std::size_t, std::vector<std::string>, std::size_t>> edges;
            for (const auto& e : g.edges)
                edges.emplace_back(e.from, names(e.inputs), e.to);
            return py::make_tuple(g.nodes, edges);
        },
        py::arg("flat"), py::arg("depth"), py::arg("budget") = default_node_budget);
    mod.def(
        "determinism",
        [](const std::string& flat) {
            py::dict out;
            for (const auto& a : from_flat(flat).automata) {
                py::list overlaps;
                for (const auto& o : check_determinism(a)) {
                    const auto& t1 = a.transitions[o.first];
                    const auto& t2 = a.transitions[o.second];
                    overlaps.append(py::dict(py::arg("state") = o.state,
                                             py::arg("first") = py::make_tuple(t1.source, t1.guard.str(), t1.target),
                                             py::arg("second") = py::make_tuple(t2.source, t2.guard.str(), t2.target),
                                             py::arg("witness") = names(o.witness)));
                }
                out[py::str(a.name)] = overlaps;
            }
            return out;
        },
        py::arg("flat"));

    mod.def(
        "counter_oracle",
        [](std::int64_t n, const std::vector<std::vector<std::string>>& trace) {
            std::vector<std::string> out;
            for (const auto& s : counter_oracle(n, trace_of(trace)))
                out.push_back(s.state_name());
            return out;
        },
        py::arg("n"), py::arg("trace"));

    mod.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = csm::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
