#pragma once

#include "csmgen/ast.hpp"
#include "csmgen/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace csm {

struct LibraryParse {
    std::vector<ModuleAst> modules;
    Diagnostics diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

struct SystemParse {
    SystemAst system;
    Diagnostics diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

struct FlatParse {
    FlatAst flat;
    Diagnostics diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

/// Parses a library file (`.csml`) holding any number of MODULE blocks.
/// After a syntax error the parser resumes at the next MODULE keyword.
LibraryParse parse_library(std::string_view text);

/// Parses a system file (`.csms`): INSTANCE declarations, automaton aliases
/// and EXTERNAL signals.
SystemParse parse_system(std::string_view text);

/// Parses a flat listing (`.csmf`) in restricted mode: no index ranges,
/// no shortcuts and only literal indices.
FlatParse parse_flat(std::string_view text);

std::string render_module(const ModuleAst& module);
std::string render_library(const std::vector<ModuleAst>& modules);
std::string render_system(const SystemAst& system);

}  // namespace csm
