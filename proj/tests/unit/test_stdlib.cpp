#include <doctest.h>

#include "csmgen/checker.hpp"
#include "csmgen/stdlib.hpp"
#include "support.hpp"

using namespace csm;
using namespace testing;

namespace {

CounterState value(std::int64_t v) { return {CounterState::Kind::Value, v}; }
const CounterState over{CounterState::Kind::Over, 0};
const CounterState under{CounterState::Kind::Under, 0};

}  // namespace

TEST_CASE("load_builtin COUNTER") {
    auto m = load_builtin("COUNTER");
    REQUIRE(m.numeric_params.size() == 1);
    CHECK(m.numeric_params[0].name == "N");
    std::vector<std::string> names;
    for (const auto& f : m.formal_signals)
        names.push_back(f.name);
    CHECK(names == std::vector<std::string>{"inc", "dec", "under", "over", "c"});
    CHECK(m.formal_signals[4].is_vector());
}

TEST_CASE("load_builtin SWITCH has five rules") {
    CHECK(load_builtin("SWITCH").automata.at(0).transitions.size() == 5);
}

TEST_CASE("load_builtin rejects unknown names") {
    try {
        load_builtin("NOPE");
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_UNKNOWN_BUILTIN");
    }
}

TEST_CASE("builtin entries carry their notes and header-only flags") {
    const auto& entries = builtin_entries();
    REQUIRE(entries.size() == 10);
    std::vector<std::string> names;
    for (const auto& e : entries)
        names.push_back(e.name);
    CHECK(names == std::vector<std::string>{"COUNTER", "NEW_COUNTER", "SET_COUNTER", "DETERMINISTIC_COUNTER",
                                            "ARBITER", "SWITCH", "X", "IL", "ID", "IB"});
    for (const auto& e : entries) {
        CAPTURE(e.name);
        CHECK(e.header_only == (load_builtin(e.name).header_only()));
        if (e.name != "X")
            CHECK_FALSE(e.notes.empty());
    }
    auto arbiter = std::find_if(entries.begin(), entries.end(), [](auto& e) { return e.name == "ARBITER"; });
    CHECK(arbiter->notes.size() == 3);
}

TEST_CASE("embedded sources match the installed files") {
    for (const auto& [file, text] : builtin_files())
        CHECK(read_file_text(file) == text);
}

TEST_CASE("every full builtin expands and validates for N in 1..8") {
    for (const auto& e : builtin_entries()) {
        if (e.header_only)
            continue;
        for (std::int64_t n = 1; n <= 8; ++n) {
            CAPTURE(e.name);
            CAPTURE(n);
            if (e.name == "SWITCH" && n == 1) {
                // The release rule keeps eps(rq[j=1..N-1]) as printed, which is empty at N=1.
                try {
                    expand_builtin(e.name, n);
                    FAIL("expected an error");
                } catch (const DiagnosticError& err) {
                    CHECK(err.diagnostics().at(0).code == "E_EMPTY_SHORTCUT_SET");
                }
                continue;
            }
            auto sys = expand_builtin(e.name, n);
            for (const auto& a : sys.automata)
                CHECK(validate_automaton(a).empty());
        }
    }
}

TEST_CASE("counter_oracle examples") {
    CHECK(counter_oracle(2, {{"inc"}, {"inc"}, {"inc"}}) == std::vector<CounterState>{value(1), over, over});
    CHECK(counter_oracle(3, {{"inc", "dec"}}) == std::vector<CounterState>{value(0)});
    CHECK(counter_oracle(1, {{"dec"}}) == std::vector<CounterState>{under});
    CHECK(counter_oracle(2, {{"dec"}, {"inc"}}) == std::vector<CounterState>{under, under});
    CHECK(value(2).state_name() == "s[2]");
    CHECK(over.state_name() == "OVER");
}

TEST_CASE("arbiter_oracle examples") {
    using Names = std::vector<std::set<std::string>>;
    CHECK(arbiter_oracle(2, {{SignalId("rq", {0})}}) == Names{{"GT[0]"}});
    CHECK(arbiter_oracle(2, {{SignalId("rq", {0}), SignalId("rq", {1})}}) == Names{{"GT[0]", "GT[1]"}});
    CHECK(arbiter_oracle(2, {{}}) == Names{{"IDLE"}});
    CHECK(arbiter_oracle(2, {{SignalId("rq", {1})}, {SignalId("rel", {0})}, {SignalId("rel", {1})}}) ==
          Names{{"GT[1]"}, {"GT[1]"}, {"IDLE"}});
}
