#include "csmgen/lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>

namespace csm {

namespace {

constexpr std::array<std::string_view, 18> kKeywords = {
    "in",     "out",    "init",      "dummy", "eps",   "any",    "all",      "single",   "MODULE",
    "AUTOMATON", "STATES", "TRANS", "END",   "SYSTEM", "INSTANCE", "EXTERNAL", "INIT", "ATTRS"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    Lexer(std::string_view text, Diagnostics* diags) : text_(text), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            if (at_end()) {
                out.push_back(Token{TokenKind::End, "", 0, pos()});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    bool at_end() const { return i_ >= text_.size(); }
    char peek(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(i_, s.size()) == s; }
    SourcePos pos() const { return SourcePos{line_, col_}; }

    void advance(std::size_t bytes = 1) {
        for (std::size_t k = 0; k < bytes && !at_end(); ++k) {
            char c = text_[i_++];
            if (c == '\n') {
                ++line_;
                col_ = 1;
            } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
                ++col_;  // count code points, not continuation bytes
            }
        }
    }

    void skip_blank() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    Token make(TokenKind kind, std::size_t bytes, SourcePos at) {
        Token t{kind, std::string(text_.substr(i_, bytes)), 0, at};
        advance(bytes);
        return t;
    }

    Token next() {
        SourcePos at = pos();
        char c = peek();

        if (is_ident_start(c)) {
            std::size_t n = 0;
            while (is_ident_char(peek(n)))
                ++n;
            Token t = make(TokenKind::Ident, n, at);
            if (is_keyword(t.text)) {
                t.kind = TokenKind::Keyword;
                if (t.text == "INIT")
                    t.text = "init";
            }
            return t;
        }
        if (is_digit(c)) {
            std::size_t n = 0;
            while (is_digit(peek(n)))
                ++n;
            Token t = make(TokenKind::Number, n, at);
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
            if (ec != std::errc{})
                return error(at, t.text, "number out of range: " + t.text);
            return t;
        }
        if (c == '_') {
            if ((peek(1) == '0' || peek(1) == '1') && !is_ident_char(peek(2)))
                return make(peek(1) == '0' ? TokenKind::Const0 : TokenKind::Const1, 2, at);
            advance();
            return error(at, "_", "identifiers must start with a letter");
        }
        if (starts_with("--{"))
            return make(TokenKind::ArrowOpen, 3, at);
        if (starts_with("}-->"))
            return make(TokenKind::ArrowClose, 4, at);
        if (starts_with("%["))
            return make(TokenKind::PercentBracket, 2, at);
        if (starts_with(".."))
            return make(TokenKind::DotDot, 2, at);
        if (starts_with("/="))
            return make(TokenKind::NotEquals, 2, at);
        if (starts_with("\xC2\xAC")) {  // ¬
            Token t = make(TokenKind::Tilde, 2, at);
            return t;
        }
        if (starts_with("\xCE\xB5")) {  // ε
            Token t = make(TokenKind::Keyword, 2, at);
            t.text = "eps";
            return t;
        }
        if (starts_with("\xE2\x89\xA0"))  // ≠
            return make(TokenKind::NotEquals, 3, at);

        switch (c) {
        case '%': return make(TokenKind::Percent, 1, at);
        case '[': return make(TokenKind::LBracket, 1, at);
        case ']': return make(TokenKind::RBracket, 1, at);
        case '(': return make(TokenKind::LParen, 1, at);
        case ')': return make(TokenKind::RParen, 1, at);
        case ',': return make(TokenKind::Comma, 1, at);
        case '.': return make(TokenKind::Dot, 1, at);
        case ':': return make(TokenKind::Colon, 1, at);
        case '=': return make(TokenKind::Equals, 1, at);
        case '/': return make(TokenKind::Slash, 1, at);
        case '*': return make(TokenKind::Star, 1, at);
        case '+': return make(TokenKind::Plus, 1, at);
        case '-': return make(TokenKind::Minus, 1, at);
        case '~': return make(TokenKind::Tilde, 1, at);
        default: break;
        }

        // Consume one whole code point so columns stay aligned.
        std::size_t len = 1;
        auto lead = static_cast<unsigned char>(c);
        if (lead >= 0xF0)
            len = 4;
        else if (lead >= 0xE0)
            len = 3;
        else if (lead >= 0xC0)
            len = 2;
        std::string lexeme(text_.substr(i_, len));
        advance(len);
        return error(at, lexeme, "illegal character '" + lexeme + "'");
    }

    Token error(SourcePos at, std::string lexeme, std::string message) {
        if (diags_)
            diags_->push_back(make_error(codes::lex, std::move(message), at, lexeme));
        return Token{TokenKind::Error, std::move(lexeme), 0, at};
    }

    std::string_view text_;
    Diagnostics* diags_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

bool is_keyword(std::string_view word) {
    for (auto kw : kKeywords)
        if (kw == word)
            return true;
    return false;
}

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Percent: return "'%'";
    case TokenKind::PercentBracket: return "'%['";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::DotDot: return "'..'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Equals: return "'='";
    case TokenKind::NotEquals: return "'/='";
    case TokenKind::Slash: return "'/'";
    case TokenKind::ArrowOpen: return "'--{'";
    case TokenKind::ArrowClose: return "'}-->'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Tilde: return "'~'";
    case TokenKind::Const0: return "'_0'";
    case TokenKind::Const1: return "'_1'";
    case TokenKind::Error: return "invalid token";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view text, Diagnostics* diags) {
    return Lexer(text, diags).run();
}

}  // namespace csm
