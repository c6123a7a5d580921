#include "csmgen/parser.hpp"

#include "csmgen/lexer.hpp"

#include <set>

namespace csm {

namespace {

struct SyntaxError {
    Diagnostic diag;
};

class Parser {
public:
    Parser(std::string_view text, bool restricted) : restricted_(restricted) {
        tokens_ = tokenize(text, &diags_);
    }

    Diagnostics take_diagnostics() { return std::move(diags_); }

    // ---------------------------------------------------------------- library

    std::vector<ModuleAst> library() {
        std::vector<ModuleAst> modules;
        while (!at(TokenKind::End)) {
            try {
                if (!peek().is_keyword("MODULE"))
                    fail({"MODULE"});
                modules.push_back(module());
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover({"MODULE"});
            }
        }
        return modules;
    }

    // ----------------------------------------------------------------- system

    SystemAst system() {
        SystemAst sys;
        sys.pos = peek().pos;
        bool framed = false;
        if (peek().is_keyword("SYSTEM")) {
            framed = true;
            advance();
            if (at(TokenKind::Ident))
                sys.name = advance().text;
        }
        while (!at(TokenKind::End)) {
            try {
                const Token& t = peek();
                if (t.is_keyword("INSTANCE")) {
                    sys.instances.push_back(instance());
                } else if (t.is_keyword("EXTERNAL")) {
                    advance();
                    auto sigs = concrete_signal_list();
                    sys.external_signals.insert(sys.external_signals.end(), sigs.begin(), sigs.end());
                } else if (t.kind == TokenKind::Ident) {
                    sys.automaton_aliases.push_back(alias());
                } else if (t.is_keyword("END") && framed) {
                    advance();
                    if (!at(TokenKind::End))
                        fail({"end of input"});
                    break;
                } else {
                    fail({"INSTANCE", "EXTERNAL", "automaton alias", framed ? "END" : "end of input"});
                }
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover({"INSTANCE", "EXTERNAL", "END"});
                if (peek().is_keyword("END")) {
                    advance();
                    break;
                }
            }
        }
        check_system(sys);
        return sys;
    }

    // ------------------------------------------------------------------- flat

    FlatAst flat() {
        FlatAst out;
        try {
            if (peek().is_keyword("EXTERNAL")) {
                advance();
                out.external_signals = concrete_signal_list();
            }
            while (peek().is_keyword("AUTOMATON"))
                out.automata.push_back(automaton(/*qualified=*/true));
            if (!at(TokenKind::End))
                fail({"AUTOMATON", "end of input"});
        } catch (const SyntaxError& e) {
            diags_.push_back(e.diag);
        }
        return out;
    }

private:
    // ---------------------------------------------------------------- helpers

    const Token& peek(std::size_t k = 0) const {
        std::size_t i = pos_ + k;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at(TokenKind kind, std::size_t k = 0) const { return peek(k).kind == kind; }
    const Token& advance() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1)
            ++pos_;
        return t;
    }

    bool accept(TokenKind kind) {
        if (!at(kind))
            return false;
        advance();
        return true;
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case TokenKind::Ident: return "identifier '" + t.text + "'";
        case TokenKind::Keyword: return "keyword '" + t.text + "'";
        case TokenKind::Number: return "number " + t.text;
        case TokenKind::End: return "end of input";
        case TokenKind::Error: return "invalid input '" + t.text + "'";
        default: return std::string(token_kind_name(t.kind));
        }
    }

    [[noreturn]] void fail(std::initializer_list<std::string_view> expected) {
        std::string msg = "expected ";
        std::size_t i = 0;
        for (auto e : expected) {
            if (i)
                msg += i + 1 == expected.size() ? " or " : ", ";
            msg += e;
            ++i;
        }
        msg += " but found " + describe(peek());
        throw SyntaxError{make_error(codes::parse, std::move(msg), peek().pos, peek().text)};
    }

    [[noreturn]] void fail_at(const Token& t, std::string msg) {
        throw SyntaxError{make_error(codes::parse, std::move(msg), t.pos, t.text)};
    }

    const Token& expect(TokenKind kind) {
        if (!at(kind))
            fail({token_kind_name(kind)});
        return advance();
    }

    void expect_keyword(std::string_view kw) {
        if (!peek().is_keyword(kw))
            fail({kw});
        advance();
    }

    std::string identifier() { return expect(TokenKind::Ident).text; }

    // Names of automata may reuse keywords, e.g. `AUTOMATON AUTOMATON`.
    std::string name_part() {
        if (at(TokenKind::Ident) || at(TokenKind::Keyword))
            return advance().text;
        fail({"identifier"});
    }

    std::string qualified_name() {
        std::string name = name_part();
        while (at(TokenKind::Dot)) {
            advance();
            name += "." + name_part();
        }
        return name;
    }

    void recover(std::initializer_list<std::string_view> sync) {
        advance();  // always make progress
        while (!at(TokenKind::End)) {
            for (auto kw : sync)
                if (peek().is_keyword(kw))
                    return;
            advance();
        }
    }

    // ------------------------------------------------------------ expressions

    Expr expression() {
        Expr e;
        e.pos = peek().pos;
        e.terms.push_back(expr_atom(false));
        while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
            bool negative = advance().kind == TokenKind::Minus;
            e.terms.push_back(expr_atom(negative));
        }
        return e;
    }

    Expr::Term expr_atom(bool negative) {
        if (at(TokenKind::Number))
            return Expr::Term{negative, {}, advance().number};
        if (at(TokenKind::Ident)) {
            if (restricted_)
                fail_at(peek(), "index identifiers are not allowed in a flat listing");
            return Expr::Term{negative, advance().text, 0};
        }
        fail({"identifier", "number"});
    }

    Range range() {
        Range r;
        r.pos = peek().pos;
        r.low = expression();
        if (accept(TokenKind::DotDot))
            r.high = expression();
        return r;
    }

    std::vector<Range> range_list() {
        std::vector<Range> out{range()};
        while (accept(TokenKind::Comma))
            out.push_back(range());
        return out;
    }

    std::vector<Expr> indices() {
        expect(TokenKind::LBracket);
        std::vector<Expr> out{expression()};
        while (accept(TokenKind::Comma))
            out.push_back(expression());
        expect(TokenKind::RBracket);
        return out;
    }

    // `[` IDENT (`=` | `/=`) starts a range element rather than indices.
    bool at_range_element() const {
        return at(TokenKind::LBracket) && at(TokenKind::Ident, 1) &&
               (at(TokenKind::Equals, 2) || at(TokenKind::NotEquals, 2));
    }

    IndexRange index_range() {
        IndexRange r;
        r.pos = expect(TokenKind::LBracket).pos;
        r.id = identifier();
        expect(TokenKind::Equals);
        r.ranges = range_list();
        expect(TokenKind::RBracket);
        return r;
    }

    std::vector<RangeElement> range_elements() {
        std::vector<RangeElement> out;
        while (at_range_element()) {
            if (restricted_)
                fail_at(peek(), "index ranges are not allowed in a flat listing");
            if (at(TokenKind::NotEquals, 2)) {
                Inequality q;
                q.pos = advance().pos;
                q.id = identifier();
                advance();
                q.rhs = expression();
                expect(TokenKind::RBracket);
                out.emplace_back(std::move(q));
            } else {
                out.emplace_back(index_range());
            }
        }
        return out;
    }

    // ---------------------------------------------------------------- signals

    SignalRef signal_ref(bool allow_ranges) {
        SignalRef s;
        s.pos = peek().pos;
        s.name = identifier();
        if (at(TokenKind::LBracket) && !at_range_element())
            s.indices = indices();
        if (allow_ranges) {
            while (at_range_element()) {
                if (at(TokenKind::NotEquals, 2))
                    fail_at(peek(), "inequalities are not allowed inside a signal set");
                s.ranges.push_back(index_range());
            }
        }
        return s;
    }

    SignalId concrete_signal() {
        SignalId id(identifier());
        if (accept(TokenKind::LBracket)) {
            do {
                id.indices.push_back(expect(TokenKind::Number).number);
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RBracket);
        }
        return id;
    }

    std::vector<SignalId> concrete_signal_list() {
        std::vector<SignalId> out{concrete_signal()};
        while (accept(TokenKind::Comma))
            out.push_back(concrete_signal());
        return out;
    }

    // --------------------------------------------------------------- formulas

    Guard formula() {
        SourcePos at_pos = peek().pos;
        std::vector<Guard> terms{term()};
        while (accept(TokenKind::Plus))
            terms.push_back(term());
        return combine(Guard::Kind::Or, std::move(terms), at_pos);
    }

    Guard term() {
        SourcePos at_pos = peek().pos;
        std::vector<Guard> factors{factor()};
        while (accept(TokenKind::Star))
            factors.push_back(factor());
        return combine(Guard::Kind::And, std::move(factors), at_pos);
    }

    static Guard combine(Guard::Kind kind, std::vector<Guard> parts, SourcePos pos) {
        if (parts.size() == 1)
            return std::move(parts.front());
        Guard g;
        g.kind = kind;
        g.pos = pos;
        for (auto& p : parts) {
            if (p.kind == kind)
                g.operands.insert(g.operands.end(), p.operands.begin(), p.operands.end());
            else
                g.operands.push_back(std::move(p));
        }
        return g;
    }

    Guard factor() {
        Guard g;
        g.pos = peek().pos;
        const Token& t = peek();
        if (t.kind == TokenKind::Tilde) {
            advance();
            g.kind = Guard::Kind::Not;
            g.operands.push_back(factor());
            return g;
        }
        if (t.kind == TokenKind::LParen) {
            advance();
            Guard inner = formula();
            expect(TokenKind::RParen);
            return inner;
        }
        if (t.kind == TokenKind::Number) {
            if (t.number != 0 && t.number != 1)
                fail_at(t, "only the constants 0 and 1 may appear in a formula");
            g.kind = t.number == 1 ? Guard::Kind::True : Guard::Kind::False;
            advance();
            return g;
        }
        if (t.kind == TokenKind::Keyword &&
            (t.text == "eps" || t.text == "any" || t.text == "all" || t.text == "single")) {
            if (restricted_)
                fail_at(t, "shortcut formulas are not allowed in a flat listing");
            return shortcut();
        }
        if (t.kind == TokenKind::Ident) {
            g.kind = Guard::Kind::Ref;
            g.signal = signal_ref(false);
            return g;
        }
        fail({"signal", "'~'", "'('", "constant", "shortcut"});
    }

    Guard shortcut() {
        Guard g;
        g.pos = peek().pos;
        g.kind = Guard::Kind::Shortcut;
        std::string kw = advance().text;
        g.shortcut = kw == "eps"   ? ShortcutKind::Eps
                     : kw == "any" ? ShortcutKind::Any
                     : kw == "all" ? ShortcutKind::All
                                   : ShortcutKind::Single;
        if (kw == "single" && at(TokenKind::LBracket)) {
            advance();
            g.selector = expression();
            expect(TokenKind::RBracket);
            g.shortcut = ShortcutKind::SingleN;
        }
        expect(TokenKind::LParen);
        g.set.push_back(signal_ref(true));
        while (accept(TokenKind::Comma))
            g.set.push_back(signal_ref(true));
        expect(TokenKind::RParen);
        return g;
    }

    // -------------------------------------------------------------- automata

    StateRef state_ref() {
        StateRef r;
        r.pos = peek().pos;
        r.name = identifier();
        if (at(TokenKind::LBracket) && !at_range_element())
            r.indices = indices();
        return r;
    }

    StateDecl state_decl() {
        StateDecl s;
        s.pos = peek().pos;
        s.name = identifier();
        if (at(TokenKind::LBracket))
            s.indices = indices();
        if (accept(TokenKind::Slash)) {
            if (accept(TokenKind::LParen)) {
                s.emits.push_back(signal_ref(false));
                while (accept(TokenKind::Comma))
                    s.emits.push_back(signal_ref(false));
                expect(TokenKind::RParen);
            } else {
                s.emits.push_back(signal_ref(false));
            }
        }
        return s;
    }

    StateGroup state_group() {
        StateGroup g;
        g.pos = peek().pos;
        g.ranges = range_elements();
        expect(TokenKind::LParen);
        g.states.push_back(state_decl());
        while (accept(TokenKind::Comma))
            g.states.push_back(state_decl());
        expect(TokenKind::RParen);
        return g;
    }

    TransitionAst transition() {
        TransitionAst t;
        t.pos = peek().pos;
        t.ranges = range_elements();
        t.source = state_ref();
        expect(TokenKind::ArrowOpen);
        t.guard = formula();
        expect(TokenKind::ArrowClose);
        t.target = state_ref();
        return t;
    }

    AutomatonAst automaton(bool qualified) {
        AutomatonAst a;
        a.pos = peek().pos;
        expect_keyword("AUTOMATON");
        a.name = qualified ? qualified_name() : name_part();
        while (true) {
            const Token& t = peek();
            if (t.is_keyword("STATES")) {
                advance();
                do {
                    a.state_groups.push_back(state_group());
                } while (at(TokenKind::LParen) || at_range_element());
            } else if (t.is_keyword("init")) {
                advance();
                if (a.initial)
                    fail_at(t, "initial state declared twice in automaton " + a.name);
                a.initial = state_ref();
            } else if (t.is_keyword("TRANS")) {
                advance();
                do {
                    a.transitions.push_back(transition());
                } while (at(TokenKind::Ident) || at_range_element());
            } else if (t.is_keyword("ATTRS") && restricted_) {
                advance();
                SignalAttributes attrs;
                attrs.pos = peek().pos;
                attrs.signal = concrete_signal();
                expect(TokenKind::LParen);
                attrs.attributes.push_back(identifier());
                while (accept(TokenKind::Comma))
                    attrs.attributes.push_back(identifier());
                expect(TokenKind::RParen);
                a.attributes.push_back(std::move(attrs));
            } else {
                break;
            }
        }
        if (a.state_groups.empty())
            fail({"STATES"});
        return a;
    }

    // ---------------------------------------------------------------- modules

    FormalSignal formal_signal() {
        FormalSignal f;
        f.pos = peek().pos;
        if (peek().is_keyword("in"))
            f.qualifier = Qualifier::In;
        else if (peek().is_keyword("out"))
            f.qualifier = Qualifier::Out;
        else
            fail({"'%['", "in", "out"});
        advance();
        expect(TokenKind::Percent);
        f.name = identifier();
        if (accept(TokenKind::LBracket)) {
            f.dims = range_list();
            expect(TokenKind::RBracket);
            if (at(TokenKind::LParen))
                fail_at(peek(), "vector formal %" + f.name + " cannot carry attributes");
        } else if (accept(TokenKind::LParen)) {
            do {
                expect(TokenKind::Percent);
                f.attributes.push_back(identifier());
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RParen);
        }
        return f;
    }

    ModuleAst module() {
        ModuleAst m;
        m.pos = peek().pos;
        expect_keyword("MODULE");
        m.name = identifier();
        if (accept(TokenKind::LParen)) {
            do {
                if (at(TokenKind::PercentBracket)) {
                    const Token& start = advance();
                    if (!m.formal_signals.empty())
                        fail_at(start, "module parameters must precede signal formals");
                    NumericParam p{identifier(), start.pos};
                    expect(TokenKind::RBracket);
                    m.numeric_params.push_back(std::move(p));
                } else {
                    m.formal_signals.push_back(formal_signal());
                }
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RParen);
        }
        while (peek().is_keyword("AUTOMATON"))
            m.automata.push_back(automaton(false));
        if (!peek().is_keyword("END"))
            fail({"AUTOMATON", "END"});
        advance();
        return m;
    }

    // ----------------------------------------------------------------- system

    Actual actual() {
        Actual a;
        a.pos = peek().pos;
        const Token& t = peek();
        a.text = t.text;
        switch (t.kind) {
        case TokenKind::Number:
            a.kind = Actual::Kind::Number;
            a.number = advance().number;
            return a;
        case TokenKind::Const0: advance(); a.kind = Actual::Kind::Const0; return a;
        case TokenKind::Const1: advance(); a.kind = Actual::Kind::Const1; return a;
        case TokenKind::Keyword:
            if (t.text == "dummy") {
                advance();
                a.kind = Actual::Kind::Dummy;
                return a;
            }
            break;
        case TokenKind::Ident: {
            a.kind = Actual::Kind::Signal;
            a.signal.name = advance().text;
            if (accept(TokenKind::LBracket)) {
                a.text += "[";
                do {
                    if (a.signal.indices.size())
                        a.text += ",";
                    const Token& n = expect(TokenKind::Number);
                    a.signal.indices.push_back(n.number);
                    a.text += n.text;
                    if (accept(TokenKind::DotDot)) {
                        a.vector_range = true;
                        a.text += ".." + expect(TokenKind::Number).text;
                    }
                } while (accept(TokenKind::Comma));
                expect(TokenKind::RBracket);
                a.text += "]";
            }
            if (accept(TokenKind::LParen)) {
                do {
                    a.attributes.push_back(identifier());
                } while (accept(TokenKind::Comma));
                expect(TokenKind::RParen);
            }
            return a;
        }
        default: break;
        }
        fail({"number", "signal", "'_0'", "'_1'", "dummy"});
    }

    InstanceDeclaration instance() {
        InstanceDeclaration d;
        d.pos = peek().pos;
        expect_keyword("INSTANCE");
        d.instance_name = identifier();
        if (accept(TokenKind::LParen)) {
            d.actuals.push_back(actual());
            while (accept(TokenKind::Comma))
                d.actuals.push_back(actual());
            expect(TokenKind::RParen);
        }
        expect(TokenKind::Colon);
        d.module_name = identifier();
        return d;
    }

    AutomatonAlias alias() {
        AutomatonAlias a;
        a.pos = peek().pos;
        a.alias = qualified_name();
        expect(TokenKind::Colon);
        a.instance = identifier();
        expect(TokenKind::Dot);
        a.automaton = name_part();
        return a;
    }

    void check_system(const SystemAst& sys) {
        std::set<std::string> names;
        for (const auto& inst : sys.instances)
            if (!names.insert(inst.instance_name).second)
                diags_.push_back(make_error(codes::dup_instance,
                                            "instance " + inst.instance_name + " declared twice",
                                            inst.pos, inst.instance_name));
        for (const auto& a : sys.automaton_aliases)
            if (!names.count(a.instance))
                diags_.push_back(make_error(codes::unknown_instance,
                                            "alias " + a.alias + " refers to undeclared instance " +
                                                a.instance,
                                            a.pos, a.instance));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Diagnostics diags_;
    bool restricted_;
};

}  // namespace

LibraryParse parse_library(std::string_view text) {
    Parser p(text, false);
    LibraryParse out;
    out.modules = p.library();
    out.diagnostics = p.take_diagnostics();
    return out;
}

SystemParse parse_system(std::string_view text) {
    Parser p(text, false);
    SystemParse out;
    out.system = p.system();
    out.diagnostics = p.take_diagnostics();
    return out;
}

FlatParse parse_flat(std::string_view text) {
    Parser p(text, true);
    FlatParse out;
    out.flat = p.flat();
    out.diagnostics = p.take_diagnostics();
    return out;
}

}  // namespace csm
