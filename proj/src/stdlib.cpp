#include "csmgen/stdlib.hpp"

#include "csmgen/checker.hpp"
#include "csmgen/parser.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace csm {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_sources();
}

namespace {

const std::vector<std::string_view> full_modules = {
    "COUNTER", "NEW_COUNTER", "SET_COUNTER", "DETERMINISTIC_COUNTER", "ARBITER", "SWITCH"};

std::vector<BuiltinEntry> scan_entries() {
    std::vector<BuiltinEntry> entries;
    for (const auto& [file, text] : detail::embedded_sources()) {
        std::istringstream in{std::string(text)};
        std::string line;
        std::vector<std::string> notes;
        while (std::getline(in, line)) {
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos)
                continue;
            std::string_view body = std::string_view(line).substr(first);
            if (body.rfind("# note:", 0) == 0) {
                auto note = std::string(body.substr(7));
                note.erase(0, note.find_first_not_of(' '));
                notes.push_back(std::move(note));
            } else if (body.rfind("MODULE", 0) == 0) {
                auto rest = body.substr(6);
                rest.remove_prefix(std::min(rest.find_first_not_of(" \t"), rest.size()));
                auto end = rest.find_first_of("( \t");
                BuiltinEntry e;
                e.name = std::string(rest.substr(0, end));
                e.file = std::string(file);
                e.source = std::string(text);
                e.notes = std::move(notes);
                notes.clear();
                e.header_only = std::find(full_modules.begin(), full_modules.end(), e.name) ==
                                full_modules.end();
                entries.push_back(std::move(e));
            }
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const BuiltinEntry& a, const BuiltinEntry& b) {
        auto rank = [](const BuiltinEntry& e) {
            auto it = std::find(full_modules.begin(), full_modules.end(), e.name);
            return it == full_modules.end() ? full_modules.size() : std::size_t(it - full_modules.begin());
        };
        return rank(a) < rank(b);
    });
    return entries;
}

}  // namespace

const std::vector<BuiltinEntry>& builtin_entries() {
    static const std::vector<BuiltinEntry> entries = scan_entries();
    return entries;
}

std::vector<std::pair<std::string, std::string>> builtin_files() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [file, text] : detail::embedded_sources())
        out.emplace_back(std::string(file), std::string(text));
    return out;
}

ModuleAst load_builtin(std::string_view name) {
    const auto& entries = builtin_entries();
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const BuiltinEntry& e) { return e.name == name; });
    if (it == entries.end())
        throw DiagnosticError(make_error(codes::unknown_builtin,
                                         "no builtin module named " + std::string(name), {},
                                         std::string(name)));
    auto parsed = parse_library(it->source);
    if (!parsed.ok())
        throw DiagnosticError(parsed.diagnostics);
    const ModuleAst* m = find_module(parsed.modules, name);
    auto diags = check_module(*m);
    if (has_errors(diags))
        throw DiagnosticError(std::move(diags));
    return *m;
}

std::vector<ModuleAst> builtin_library() {
    std::vector<ModuleAst> out;
    for (const auto& e : builtin_entries())
        out.push_back(load_builtin(e.name));
    return out;
}

std::string CounterState::state_name() const {
    switch (kind) {
    case Kind::Under: return "UNDER";
    case Kind::Over: return "OVER";
    default: return render_indexed("s", {value});
    }
}

std::vector<CounterState> counter_oracle(std::int64_t n, const std::vector<Valuation>& trace) {
    std::vector<CounterState> out;
    CounterState cur;
    for (const auto& v : trace) {
        bool inc = v.count(SignalId("inc")) > 0;
        bool dec = v.count(SignalId("dec")) > 0;
        if (cur.kind == CounterState::Kind::Value && inc != dec) {
            if (inc)
                cur = cur.value == n - 1 ? CounterState{CounterState::Kind::Over, 0}
                                         : CounterState{CounterState::Kind::Value, cur.value + 1};
            else
                cur = cur.value == 0 ? CounterState{CounterState::Kind::Under, 0}
                                     : CounterState{CounterState::Kind::Value, cur.value - 1};
        }
        out.push_back(cur);
    }
    return out;
}

std::vector<std::set<std::string>> arbiter_oracle(std::int64_t n, const std::vector<Valuation>& trace) {
    // -1 stands for IDLE, i >= 0 for a grant to i
    std::set<std::int64_t> cur{-1};
    std::vector<std::set<std::string>> out;
    for (const auto& v : trace) {
        std::set<std::int64_t> next;
        for (auto s : cur) {
            if (s < 0) {
                bool requested = false;
                for (std::int64_t i = 0; i < n; ++i)
                    if (v.count(SignalId("rq", {i}))) {
                        next.insert(i);
                        requested = true;
                    }
                if (!requested)
                    next.insert(-1);
            } else {
                next.insert(v.count(SignalId("rel", {s})) ? -1 : s);
            }
        }
        cur = std::move(next);
        std::set<std::string> names;
        for (auto s : cur)
            names.insert(s < 0 ? std::string("IDLE") : render_indexed("GT", {s}));
        out.push_back(std::move(names));
    }
    return out;
}

}  // namespace csm
