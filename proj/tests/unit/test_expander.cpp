#include <doctest.h>

#include "csmgen/checker.hpp"
#include "csmgen/exporters.hpp"
#include "csmgen/expander.hpp"
#include "support.hpp"

#include <random>

using namespace csm;
using namespace testing;

namespace {

std::vector<RangeElement> ranges_of(const std::string& prefix) {
    auto m = parse_module("MODULE M(%[N], in %x, out %y) AUTOMATON A STATES (S/y) TRANS " + prefix +
                          " S --{ x }--> S END");
    return m.automata.at(0).transitions.at(0).ranges;
}

Expr sum(std::vector<Expr::Term> terms) {
    Expr e;
    e.terms = std::move(terms);
    return e;
}

std::vector<std::string> state_names(const ConcreteAutomaton& a) {
    std::vector<std::string> out;
    for (const auto& s : a.states)
        out.push_back(s.name);
    return out;
}

Formula refs_shortcut(ShortcutKind k, std::vector<std::string> names, std::optional<std::int64_t> sel = {}) {
    std::vector<Formula> ops;
    for (auto& n : names)
        ops.push_back(Formula::ref(SignalId(n)));
    return Formula::shortcut(k, std::move(ops), sel);
}

const char* message_x = R"(
MODULE X(in %do, out %end, out %m(%y1), out %ack(%y2))
AUTOMATON M
  STATES (IDLE, SEND/m)
  TRANS IDLE --{ do }--> SEND
        SEND --{ rdy }--> IDLE
AUTOMATON S
  STATES (WAIT/rdy, ACK/(ack, end))
  TRANS WAIT --{ 1 }--> ACK
        ACK --{ 1 }--> WAIT
END
)";

Formula rename_formula(const Formula& f, const std::map<SignalId, SignalId>& rho) {
    switch (f.kind()) {
    case Formula::Kind::Ref: {
        auto it = rho.find(f.signal());
        return Formula::ref(it == rho.end() ? f.signal() : it->second);
    }
    case Formula::Kind::Not: return Formula::negate(rename_formula(f.operands()[0], rho));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> ops;
        for (const auto& o : f.operands())
            ops.push_back(rename_formula(o, rho));
        return f.kind() == Formula::Kind::And ? Formula::conj(std::move(ops)) : Formula::disj(std::move(ops));
    }
    default: return f;
    }
}

SystemConfig rename_system(SystemConfig sys, const std::map<SignalId, SignalId>& rho) {
    auto r = [&](const SignalId& s) {
        auto it = rho.find(s);
        return it == rho.end() ? s : it->second;
    };
    for (auto& a : sys.automata) {
        for (auto& st : a.states) {
            for (auto& e : st.emits)
                e = r(e);
            std::sort(st.emits.begin(), st.emits.end());
        }
        for (auto& t : a.transitions)
            t.guard = rename_formula(t.guard, rho);
        std::map<SignalId, std::vector<std::string>> attrs;
        for (auto& [s, v] : a.attributes)
            attrs[r(s)] = v;
        a.attributes = attrs;
    }
    std::set<SignalId> ext;
    for (const auto& s : sys.externals)
        ext.insert(r(s));
    sys.externals = ext;
    return sys;
}

}  // namespace

TEST_CASE("eval_index_expression") {
    CHECK(eval_index_expression(sum({{false, "l", 0}, {false, "", 1}}), {{"l", 1}}) == 2);
    CHECK(eval_index_expression(sum({{false, "N", 0}, {true, "", 2}}), {{"N", 3}}) == 1);
    CHECK(eval_index_expression(Expr::literal(7), {}) == 7);
    CHECK(eval_index_expression(sum({{false, "l", 0}, {true, "", 1}}), {{"l", 0}}) == -1);
    try {
        eval_index_expression(Expr::identifier("q"), {});
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_UNBOUND_ID");
    }
}

TEST_CASE("expand_ranges: products, inequalities and empty ranges") {
    CHECK(expand_ranges(ranges_of("[i=0..1][j=0..1]"), {}).size() == 4);
    auto six = expand_ranges(ranges_of("[i=0..2][j=0..2][i/=j]"), {});
    CHECK(six.size() == 6);
    for (const auto& env : six)
        CHECK(env.at("i") != env.at("j"));
    CHECK(expand_ranges(ranges_of("[l=0..N-2]"), {{"N", 1}}).empty());

    auto order = expand_ranges(ranges_of("[i=0..1][j=0..2]"), {});
    REQUIRE(order.size() == 6);
    CHECK(order[1].at("i") == 0);
    CHECK(order[1].at("j") == 1);
    CHECK(order[3].at("i") == 1);

    auto lists = expand_ranges(ranges_of("[i=0, 3..4]"), {});
    REQUIRE(lists.size() == 3);
    CHECK(lists[1].at("i") == 3);

    auto dependent = expand_ranges(ranges_of("[i=0..2][j=i..2]"), {});
    CHECK(dependent.size() == 6);
}

TEST_CASE("expand_states: state vectors and emission mapping") {
    auto counter = only(expand_builtin("COUNTER", 3));
    CHECK(state_names(counter) == std::vector<std::string>{"UNDER", "s[0]", "s[1]", "s[2]", "OVER"});
    CHECK(counter.state("s[2]").emits == std::vector<SignalId>{SignalId("c", {2})});
    CHECK(counter.state("UNDER").emits == std::vector<SignalId>{"under"});

    auto arbiter = only(expand_builtin("ARBITER", 2));
    CHECK(state_names(arbiter) == std::vector<std::string>{"IDLE", "GT[0]", "GT[1]"});

    auto m = load_builtin("COUNTER");
    auto sys = expand_module(m, {{"N", 2}}, "C", {"i", "d", "u", "dummy", "c0", "c1"});
    CHECK(only(sys).state("OVER").emits.empty());
    CHECK(only(sys).state("s[1]").emits == std::vector<SignalId>{"c1"});
}

TEST_CASE("emitting a vector element outside its range") {
    auto m = parse_module("MODULE M(%[N], in %x, out %c[0..N-1]) AUTOMATON A STATES [l=0..N-1] (s[l]/c[l+1]) "
                          "TRANS [l=0..N-1] s[l] --{ x }--> s[l] END");
    try {
        expand_module(m, {{"N", 2}});
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_INDEX_OUT_OF_RANGE");
    }
}

TEST_CASE("state references outside the state vector") {
    auto m = parse_module("MODULE M(%[N], in %x, out %y) AUTOMATON A STATES [l=0..N-1] (s[l]/y) "
                          "TRANS [l=0..N-1] s[l] --{ x }--> s[l+1] END");
    try {
        expand_module(m, {{"N", 2}});
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_INDEX_OUT_OF_RANGE");
    }
    auto unknown = parse_module("MODULE M(in %x, out %y) AUTOMATON A STATES (S/y) TRANS S --{ x }--> T END");
    try {
        expand_module(unknown, {});
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_UNKNOWN_STATE");
    }
}

TEST_CASE("rewrite_shortcut examples") {
    CHECK(rewrite_shortcut(refs_shortcut(ShortcutKind::Eps, {"a", "b"})).str() == "~a*~b");
    CHECK(rewrite_shortcut(refs_shortcut(ShortcutKind::Single, {"a", "b"})).str() == "a*~b + ~a*b");
    CHECK(rewrite_shortcut(refs_shortcut(ShortcutKind::Single, {"a", "b", "c"}, 1)).str() == "~a*b*~c");
    CHECK(rewrite_shortcut(refs_shortcut(ShortcutKind::Any, {"a", "b"})).str() == "a + b");
    CHECK(rewrite_shortcut(refs_shortcut(ShortcutKind::All, {"a", "b"})).str() == "a*b");
}

TEST_CASE("rewrite_shortcut error cases") {
    try {
        rewrite_shortcut(refs_shortcut(ShortcutKind::Eps, {}));
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_EMPTY_SHORTCUT_SET");
    }
    try {
        rewrite_shortcut(refs_shortcut(ShortcutKind::Single, {"a", "b"}, 2));
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_INDEX_OUT_OF_RANGE");
    }
}

TEST_CASE("shortcut semantics match their set definitions exhaustively") {
    for (int size = 1; size <= 4; ++size) {
        std::vector<std::string> names;
        for (int i = 0; i < size; ++i)
            names.push_back("c" + std::to_string(i));
        for (unsigned mask = 0; mask < (1u << size); ++mask) {
            Valuation v{"unrelated"};
            int hits = 0;
            for (int i = 0; i < size; ++i)
                if (mask >> i & 1) {
                    v.insert(SignalId(names[i]));
                    ++hits;
                }
            CHECK(eval_formula(rewrite_shortcut(refs_shortcut(ShortcutKind::Eps, names)), v) == (hits == 0));
            CHECK(eval_formula(rewrite_shortcut(refs_shortcut(ShortcutKind::Any, names)), v) == (hits > 0));
            CHECK(eval_formula(rewrite_shortcut(refs_shortcut(ShortcutKind::All, names)), v) == (hits == size));
            CHECK(eval_formula(rewrite_shortcut(refs_shortcut(ShortcutKind::Single, names)), v) == (hits == 1));
            for (int j = 0; j < size; ++j)
                CHECK(eval_formula(rewrite_shortcut(refs_shortcut(ShortcutKind::SingleN, names, j)), v) ==
                      (mask == (1u << j)));
        }
    }
}

TEST_CASE("expand_transitions counts") {
    CHECK(only(expand_builtin("COUNTER", 3)).transitions.size() == 11);
    CHECK(only(expand_builtin("ARBITER", 2)).transitions.size() == 7);

    auto m = load_builtin("SET_COUNTER");
    auto binding = bind_instance(m, default_instance(m, {{"N", 4}}));
    const auto& a = m.automata.at(0);
    auto states = expand_states(a, m, binding);
    std::span<const TransitionAst> last(&a.transitions.back(), 1);
    CHECK(expand_transitions(last, m, binding, states).size() == 16);
}

TEST_CASE("size laws for N in 1..8") {
    for (std::int64_t n = 1; n <= 8; ++n) {
        CAPTURE(n);
        auto counter = only(expand_builtin("COUNTER", n));
        CHECK(counter.states.size() == std::size_t(n + 2));
        CHECK(counter.transitions.size() == std::size_t(3 * n + 2));
        CHECK(only(expand_builtin("NEW_COUNTER", n)).states.size() == std::size_t(n + 3));
        auto arbiter = only(expand_builtin("ARBITER", n));
        CHECK(arbiter.states.size() == std::size_t(n + 1));
        CHECK(arbiter.transitions.size() == std::size_t(3 * n + 1));

        auto det = load_builtin("DETERMINISTIC_COUNTER");
        auto binding = bind_instance(det, default_instance(det, {{"N", n}}));
        const auto& rules = det.automata.at(0).transitions;
        auto states = expand_states(det.automata.at(0), det, binding);
        auto ineq = std::find_if(rules.begin(), rules.end(), [](const TransitionAst& t) {
            return std::any_of(t.ranges.begin(), t.ranges.end(),
                               [](const RangeElement& r) { return std::holds_alternative<Inequality>(r); });
        });
        REQUIRE(ineq != rules.end());
        CHECK(expand_transitions(std::span(&*ineq, 1), det, binding, states).size() == std::size_t(n * n - n));
    }
}

TEST_CASE("identical concrete transitions are merged") {
    auto m = parse_module("MODULE M(in %x, out %y) AUTOMATON A STATES (S/y, T) "
                          "TRANS [i=0..3] S --{ x }--> S S --{ ~x }--> S S --{ x }--> T END");
    auto a = only(expand_module(m, {}));
    CHECK(a.transitions.size() == 3);
    CHECK(a.initial == "S");
}

TEST_CASE("instantiate a two-automaton module with internal signals and attributes") {
    auto x = parse_module(message_x);
    REQUIRE(check_module(x).empty());
    auto decl = parse_sys("INSTANCE MES_G(do_ML, end_ML, getM(a_e,typ), repM(seq)):X").instances.at(0);
    auto automata = instantiate_module(x, decl);
    REQUIRE(automata.size() == 2);
    CHECK(automata[0].name == "MES_G.M");
    CHECK(automata[1].name == "MES_G.S");
    CHECK(automata[1].state("WAIT").emits == std::vector<SignalId>{"MES_G__rdy"});
    CHECK(automata[0].transitions.at(1).guard.str() == "MES_G__rdy");
    CHECK(automata[0].transitions.at(0).guard.str() == "do_ML");
    CHECK(automata[1].state("ACK").emits == std::vector<SignalId>{"end_ML", "repM"});
    CHECK(automata[0].attributes.at("getM") == std::vector<std::string>{"a_e", "typ"});
    CHECK(automata[1].attributes.at("repM") == std::vector<std::string>{"seq"});

    auto sys = parse_sys("EXTERNAL do_ML\nINSTANCE MES_G(do_ML, end_ML, getM(a_e,typ), repM(seq)):X\n"
                         "MES.REQ:MES_G.M\n");
    auto config = expand_system(sys, {x});
    REQUIRE(config.automata.size() == 2);
    CHECK(config.automata[0].name == "MES.REQ");
    CHECK(config.find("MES_G.S"));
}

TEST_CASE("header-only modules cannot be expanded") {
    auto x = load_builtin("X");
    try {
        expand_module(x, {});
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_HEADER_ONLY");
    }
    auto sys = parse_sys("EXTERNAL do_ML\nINSTANCE MES_G(do_ML, end_ML, getM(a_e,typ), repM(seq)):X\n");
    CHECK_THROWS_AS(expand_system(sys, builtin_library()), DiagnosticError);
}

TEST_CASE("two counter instances keep disjoint state spaces") {
    auto sys = parse_sys("EXTERNAL inc, dec\n"
                         "INSTANCE C1(2, inc, dec, u1, o1, a0, a1):COUNTER\n"
                         "INSTANCE C2(2, o1, u1, u2, o2, b0, b1):COUNTER\n");
    auto config = expand_system(sys, builtin_library());
    REQUIRE(config.automata.size() == 2);
    CHECK(config.automata[0].name == "C1.AUTOMATON");
    CHECK(config.automata[1].name == "C2.AUTOMATON");
    CHECK(config.automata[1].state("s[0]").emits == std::vector<SignalId>{"b0"});
    CHECK(config.automata[1].transitions.at(1).guard.str() == "u1*~o1");
}

TEST_CASE("a constant input becomes a constant in every guard") {
    auto m = load_builtin("COUNTER");
    auto sys = expand_module(m, {{"N", 2}}, "C", {"_0", "dec", "under", "over", "c0", "c1"});
    for (const auto& t : only(sys).transitions)
        for (const auto& s : formula_signals(t.guard))
            CHECK(s.name != "inc");
    CHECK(only(sys).transitions.at(1).guard.str() == "dec*~0");
    CHECK(sys.externals == std::set<SignalId>{"dec"});
}

TEST_CASE("expand_system examples") {
    auto one = expand_system(parse_sys("EXTERNAL inc, dec\nINSTANCE C(2, inc, dec, under, over, c0, c1):COUNTER\n"),
                             builtin_library());
    REQUIRE(one.automata.size() == 1);
    CHECK(one.automata[0].states.size() == 4);
    CHECK(one.externals == std::set<SignalId>{"inc", "dec"});

    auto empty = expand_system(SystemAst{}, builtin_library());
    CHECK(empty.automata.empty());

    try {
        expand_system(parse_sys("INSTANCE A(1, x):NOPE"), builtin_library());
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(e.diagnostics().at(0).code == "E_UNKNOWN_MODULE");
    }
}

TEST_CASE("generation rules across instances") {
    try {
        expand_system(parse_sys("EXTERNAL inc\nINSTANCE C(2, inc, dec, u, o, c0, c1):COUNTER\n"), builtin_library());
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(codes_of(e.diagnostics()) == std::set<std::string>{"E_INPUT_NOT_GENERATED"});
        CHECK(e.diagnostics().at(0).subject == "dec");
    }
    try {
        expand_system(parse_sys("EXTERNAL inc, dec, o\nINSTANCE C(2, inc, dec, u, o, c0, c1):COUNTER\n"),
                      builtin_library());
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(codes_of(e.diagnostics()) == std::set<std::string>{"E_OUTPUT_GENERATED_OUTSIDE"});
    }
    try {
        expand_system(parse_sys("EXTERNAL inc, dec\nINSTANCE C(2, inc, dec, u, o, c0, c1):COUNTER\n"
                                "Q.A:C.NOPE\n"),
                      builtin_library());
        FAIL("expected an error");
    } catch (const DiagnosticError& e) {
        CHECK(codes_of(e.diagnostics()) == std::set<std::string>{"E_UNKNOWN_AUTOMATON"});
    }
}

TEST_CASE("partially read vector inputs give per-element warnings") {
    auto m = parse_module("MODULE P(%[N], in %x[0..N-1], out %y) AUTOMATON A STATES (S/y) "
                          "TRANS S --{ x[0] }--> S END");
    REQUIRE(check_module(m).empty());
    auto sys = expand_module(m, {{"N", 3}});
    REQUIRE(sys.warnings.size() == 2);
    CHECK(sys.warnings[0].code == "E_INPUT_UNUSED");
    CHECK_FALSE(sys.warnings[0].is_error());
    CHECK(sys.warnings[0].subject == "x[1]");
    CHECK(expand_builtin("ARBITER", 3).warnings.empty());
}

TEST_CASE("property: renaming actuals commutes with instantiation") {
    std::mt19937 rng(3);
    for (const char* name : {"COUNTER", "SET_COUNTER", "DETERMINISTIC_COUNTER", "ARBITER", "NEW_COUNTER"}) {
        auto m = load_builtin(name);
        for (std::int64_t n = 1; n <= 3; ++n) {
            CAPTURE(name);
            CAPTURE(n);
            auto base_decl = default_instance(m, {{"N", n}}, "I");
            auto base = expand_module(m, {{"N", n}}, "I");
            std::vector<std::string> renamed;
            std::map<SignalId, SignalId> rho;
            for (std::size_t k = m.numeric_params.size(); k < base_decl.actuals.size(); ++k) {
                const auto& s = base_decl.actuals[k].signal;
                SignalId target("r" + std::to_string(rng() % 1000) + "_" + std::to_string(k));
                rho[s] = target;
                renamed.push_back(target.str());
            }
            auto direct = expand_module(m, {{"N", n}}, "I", renamed);
            CHECK(direct == rename_system(base, rho));
        }
    }
}

TEST_CASE("expansion is deterministic") {
    for (const char* name : {"COUNTER", "DETERMINISTIC_COUNTER", "SWITCH"}) {
        auto a = emit_flat(expand_builtin(name, 3));
        auto b = emit_flat(expand_builtin(name, 3));
        CHECK(a == b);
    }
}
