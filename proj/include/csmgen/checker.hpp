#pragma once

#include "csmgen/ast.hpp"
#include "csmgen/diagnostic.hpp"

#include <vector>

namespace csm {

/// Module-level constraints: unique formals, automata and index identifiers,
/// scoped expressions, known signals, and formal usage (inputs read but
/// never generated, outputs generated).
Diagnostics check_module(const ModuleAst& m);

/// Compatibility of one instance's actual list with its module header.
Diagnostics check_actuals(const ModuleAst& m, const InstanceDeclaration& decl);

/// check_actuals over every instance of `sys`, plus unknown modules.
Diagnostics check_instantiation(const SystemAst& sys, const std::vector<ModuleAst>& library);

const ModuleAst* find_module(const std::vector<ModuleAst>& library, std::string_view name);

}  // namespace csm
