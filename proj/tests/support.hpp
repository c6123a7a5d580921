#pragma once

#include "csmgen/automaton.hpp"
#include "csmgen/expander.hpp"
#include "csmgen/parser.hpp"
#include "csmgen/stdlib.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline csm::SystemConfig expand_builtin(const std::string& name, std::int64_t n) {
    return csm::expand_module(csm::load_builtin(name), {{"N", n}});
}

inline const csm::ConcreteAutomaton& only(const csm::SystemConfig& sys) {
    return sys.automata.at(0);
}

inline csm::ModuleAst parse_module(const std::string& text) {
    auto parsed = csm::parse_library(text);
    if (!parsed.ok() || parsed.modules.size() != 1)
        throw std::runtime_error("test module does not parse: " +
                                 (parsed.diagnostics.empty() ? std::string("no module")
                                                             : parsed.diagnostics.front().render("<test>")));
    return parsed.modules.front();
}

inline csm::SystemAst parse_sys(const std::string& text) {
    auto parsed = csm::parse_system(text);
    if (!parsed.ok())
        throw std::runtime_error("test system does not parse: " + parsed.diagnostics.front().render("<test>"));
    return parsed.system;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_file_text(const std::string& stdlib_file) {
    return read_file(std::string(CSMGEN_STDLIB_DIR) + "/" + stdlib_file);
}

inline std::size_t count_from(const csm::ConcreteAutomaton& a, const std::string& source,
                              const std::string& target) {
    return std::size_t(std::count_if(a.transitions.begin(), a.transitions.end(), [&](const auto& t) {
        return t.source == source && t.target == target;
    }));
}

// The distinct diagnostic codes, for "exactly this code" assertions.
inline std::set<std::string> codes_of(const csm::Diagnostics& diags) {
    std::set<std::string> out;
    for (const auto& d : diags)
        out.insert(d.code);
    return out;
}

}  // namespace testing
