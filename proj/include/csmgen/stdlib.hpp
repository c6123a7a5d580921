#pragma once

#include "csmgen/ast.hpp"
#include "csmgen/signal.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace csm {

struct BuiltinEntry {
    std::string name;
    std::string file;    // e.g. `counter.csml`
    std::string source;  // text of the whole file the module lives in
    std::vector<std::string> notes;  // normalizations applied to the printed table
    bool header_only = false;
};

/// Full modules first, then the interface-only ones, each in library order.
const std::vector<BuiltinEntry>& builtin_entries();

/// Embedded file name to text, sorted by file name.
std::vector<std::pair<std::string, std::string>> builtin_files();

/// Parsed and checked module. Throws DiagnosticError(E_UNKNOWN_BUILTIN).
ModuleAst load_builtin(std::string_view name);

/// Every builtin module, in builtin_entries() order.
std::vector<ModuleAst> builtin_library();

/// Abstract state of an unbounded-precision counter with absorbing limits.
struct CounterState {
    enum class Kind { Value, Under, Over };

    Kind kind = Kind::Value;
    std::int64_t value = 0;

    /// The matching COUNTER state name: `s[k]`, `UNDER` or `OVER`.
    std::string state_name() const;

    friend bool operator==(const CounterState&, const CounterState&) = default;
};

/// Reference counter: starts at 0; {inc} alone counts up (N-1 overflows),
/// {dec} alone counts down (0 underflows), both or neither keep the value.
std::vector<CounterState> counter_oracle(std::int64_t n, const std::vector<Valuation>& trace);

/// Reference arbiter: the set of states (`IDLE`, `GT[i]`) possible after each
/// step. From IDLE any requested index may be granted; GT[i] holds until
/// rel[i], which returns to IDLE.
std::vector<std::set<std::string>> arbiter_oracle(std::int64_t n, const std::vector<Valuation>& trace);

}  // namespace csm
