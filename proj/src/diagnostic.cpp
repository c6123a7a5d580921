#include "csmgen/diagnostic.hpp"

#include <algorithm>

namespace csm {

std::string Diagnostic::render(std::string_view file) const {
    std::string out;
    out.append(file);
    out += ':' + std::to_string(pos.line) + ':' + std::to_string(pos.column) + ": " + code;
    if (severity == Severity::Warning)
        out += " (warning)";
    out += ": " + message;
    return out;
}

Diagnostic make_error(std::string_view code, std::string message, SourcePos pos,
                      std::string subject) {
    return Diagnostic{std::string(code), std::move(message), pos, std::move(subject),
                      Severity::Error};
}

Diagnostic make_warning(std::string_view code, std::string message, SourcePos pos,
                        std::string subject) {
    return Diagnostic{std::string(code), std::move(message), pos, std::move(subject),
                      Severity::Warning};
}

bool has_errors(const Diagnostics& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

bool has_code(const Diagnostics& diags, std::string_view code) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

static std::string summarize(const Diagnostics& diags) {
    if (diags.empty())
        return "unspecified error";
    std::string msg = diags.front().code + ": " + diags.front().message;
    if (diags.size() > 1)
        msg += " (and " + std::to_string(diags.size() - 1) + " more)";
    return msg;
}

DiagnosticError::DiagnosticError(Diagnostics diags)
    : std::runtime_error(summarize(diags)), diags_(std::move(diags)) {}

}  // namespace csm
