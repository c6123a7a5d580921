#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace csm {

/// A concrete signal: an identifier with an optional list of integer indices,
/// rendered canonically as `name` or `name[i,j]`.
struct SignalId {
    std::string name;
    std::vector<std::int64_t> indices;

    SignalId() = default;
    SignalId(std::string n) : name(std::move(n)) {}  // NOLINT: implicit from names is convenient
    SignalId(const char* n) : name(n) {}             // NOLINT
    SignalId(std::string n, std::vector<std::int64_t> idx)
        : name(std::move(n)), indices(std::move(idx)) {}

    std::string str() const;

    friend auto operator<=>(const SignalId&, const SignalId&) = default;
    friend bool operator==(const SignalId&, const SignalId&) = default;
};

/// Renders `name[i,j]` (or plain `name`); shared by signals and state names.
std::string render_indexed(std::string_view name, const std::vector<std::int64_t>& indices);

/// Parses the canonical rendering; returns nullopt on malformed text.
std::optional<SignalId> parse_signal_id(std::string_view text);

bool is_identifier(std::string_view text);

/// The set of asserted signals; everything else is false.
using Valuation = std::set<SignalId>;

std::string render_valuation(const Valuation& v);

}  // namespace csm
