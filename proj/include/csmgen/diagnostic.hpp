#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csm {

struct SourcePos {
    int line = 0;
    int column = 0;

    // Positions annotate nodes; they do not take part in structural equality.
    friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    std::string code;
    std::string message;
    SourcePos pos;
    std::string subject;
    Severity severity = Severity::Error;

    bool is_error() const { return severity == Severity::Error; }

    /// `FILE:LINE:COL: CODE: message`
    std::string render(std::string_view file) const;

    friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
        return a.code == b.code && a.message == b.message && a.subject == b.subject &&
               a.severity == b.severity && a.pos.line == b.pos.line &&
               a.pos.column == b.pos.column;
    }
};

using Diagnostics = std::vector<Diagnostic>;

Diagnostic make_error(std::string_view code, std::string message, SourcePos pos = {},
                      std::string subject = {});
Diagnostic make_warning(std::string_view code, std::string message, SourcePos pos = {},
                        std::string subject = {});

bool has_errors(const Diagnostics& diags);
bool has_code(const Diagnostics& diags, std::string_view code);

/// Thrown by operations whose failure is reported as coded diagnostics.
class DiagnosticError : public std::runtime_error {
public:
    explicit DiagnosticError(Diagnostics diags);
    explicit DiagnosticError(Diagnostic diag) : DiagnosticError(Diagnostics{std::move(diag)}) {}

    const Diagnostics& diagnostics() const noexcept { return diags_; }

private:
    Diagnostics diags_;
};

namespace codes {
// lexical / syntactic
inline constexpr std::string_view lex = "E_LEX";
inline constexpr std::string_view parse = "E_PARSE";
inline constexpr std::string_view dup_instance = "E_DUP_INSTANCE";
inline constexpr std::string_view unknown_instance = "E_UNKNOWN_INSTANCE";

// module-level semantic constraints
inline constexpr std::string_view dup_formal = "E_DUP_FORMAL";
inline constexpr std::string_view dup_automaton = "E_DUP_AUTOMATON";
inline constexpr std::string_view input_generated = "E_INPUT_GENERATED";
inline constexpr std::string_view input_unused = "E_INPUT_UNUSED";
inline constexpr std::string_view output_not_generated = "E_OUTPUT_NOT_GENERATED";
inline constexpr std::string_view dup_index = "E_DUP_INDEX";
inline constexpr std::string_view unknown_expr_id = "E_UNKNOWN_EXPR_ID";
inline constexpr std::string_view ineq_before_range = "E_INEQ_BEFORE_RANGE";
inline constexpr std::string_view unknown_signal = "E_UNKNOWN_SIGNAL";
inline constexpr std::string_view vector_emit_scalar = "E_VECTOR_EMIT_SCALAR";

// instantiation-level semantic constraints
inline constexpr std::string_view unknown_module = "E_UNKNOWN_MODULE";
inline constexpr std::string_view arity = "E_ARITY";
inline constexpr std::string_view kind = "E_KIND";
inline constexpr std::string_view attr_arity = "E_ATTR_ARITY";
inline constexpr std::string_view dup_actual = "E_DUP_ACTUAL";
inline constexpr std::string_view const_for_output = "E_CONST_FOR_OUTPUT";
inline constexpr std::string_view dummy_for_input = "E_DUMMY_FOR_INPUT";
inline constexpr std::string_view vector_actual = "E_VECTOR_ACTUAL";

// system-level generation rules
inline constexpr std::string_view input_not_generated = "E_INPUT_NOT_GENERATED";
inline constexpr std::string_view output_generated_outside = "E_OUTPUT_GENERATED_OUTSIDE";

// concrete model
inline constexpr std::string_view unknown_state = "E_UNKNOWN_STATE";
inline constexpr std::string_view dup_state = "E_DUP_STATE";
inline constexpr std::string_view no_states = "E_NO_STATES";
inline constexpr std::string_view dup_emission = "E_DUP_EMISSION";

// expansion
inline constexpr std::string_view unbound_id = "E_UNBOUND_ID";
inline constexpr std::string_view index_out_of_range = "E_INDEX_OUT_OF_RANGE";
inline constexpr std::string_view empty_shortcut_set = "E_EMPTY_SHORTCUT_SET";
inline constexpr std::string_view header_only = "E_HEADER_ONLY";
inline constexpr std::string_view unknown_automaton = "E_UNKNOWN_AUTOMATON";
inline constexpr std::string_view unknown_builtin = "E_UNKNOWN_BUILTIN";

// analysis
inline constexpr std::string_view not_external = "E_NOT_EXTERNAL";
inline constexpr std::string_view budget_exceeded = "E_BUDGET_EXCEEDED";
inline constexpr std::string_view too_many_signals = "E_TOO_MANY_SIGNALS";
}  // namespace codes

}  // namespace csm
