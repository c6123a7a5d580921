#include "csmgen/signal.hpp"

#include <cctype>
#include <charconv>

namespace csm {

std::string render_indexed(std::string_view name, const std::vector<std::int64_t>& indices) {
    std::string out(name);
    if (indices.empty())
        return out;
    out += '[';
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(indices[i]);
    }
    out += ']';
    return out;
}

std::string SignalId::str() const { return render_indexed(name, indices); }

bool is_identifier(std::string_view text) {
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front())))
        return false;
    for (char c : text)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

std::optional<SignalId> parse_signal_id(std::string_view text) {
    auto open = text.find('[');
    if (open == std::string_view::npos)
        return is_identifier(text) ? std::optional<SignalId>(SignalId(std::string(text)))
                                   : std::nullopt;
    if (text.back() != ']' || !is_identifier(text.substr(0, open)))
        return std::nullopt;
    SignalId id(std::string(text.substr(0, open)));
    std::string_view body = text.substr(open + 1, text.size() - open - 2);
    while (true) {
        auto comma = body.find(',');
        std::string_view part = body.substr(0, comma);
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty() || value < 0)
            return std::nullopt;
        id.indices.push_back(value);
        if (comma == std::string_view::npos)
            break;
        body.remove_prefix(comma + 1);
    }
    return id;
}

std::string render_valuation(const Valuation& v) {
    std::string out = "{";
    bool first = true;
    for (const auto& s : v) {
        if (!first)
            out += ", ";
        out += s.str();
        first = false;
    }
    out += '}';
    return out;
}

}  // namespace csm
