#pragma once

#include "csmgen/diagnostic.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace csm {

enum class TokenKind {
    Ident,
    Number,
    Keyword,
    Percent,         // %
    PercentBracket,  // %[
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Dot,
    DotDot,
    Colon,
    Equals,
    NotEquals,  // /= or ≠
    Slash,
    ArrowOpen,   // --{
    ArrowClose,  // }-->
    Star,
    Plus,
    Minus,
    Tilde,  // ~ or ¬
    Const0,  // _0
    Const1,  // _1
    Error,
    End,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // identifier / keyword spelling, or the lexeme
    std::int64_t number = 0;
    SourcePos pos;

    bool is_keyword(std::string_view kw) const { return kind == TokenKind::Keyword && text == kw; }
};

bool is_keyword(std::string_view word);

/// Splits UTF-8 text into tokens. The result always ends with an End token;
/// illegal characters become Error tokens and an E_LEX diagnostic.
std::vector<Token> tokenize(std::string_view text, Diagnostics* diags = nullptr);

}  // namespace csm
