#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "guard/result.hpp"

namespace guard::sql {

enum class TokenType {
    Keyword,
    Identifier,
    QuotedIdentifier,
    StringLiteral,
    Number,
    Symbol,
    Comment,
};

struct Token {
    TokenType type = TokenType::Symbol;
    std::string text;      // raw lexeme, byte-exact slice of the input
    std::string norm;      // keywords/identifiers: uppercase; quoted identifiers:
                           // inner text, case preserved; literals: body without quotes
    std::size_t offset = 0;

    bool is_keyword(std::string_view kw) const {
        return type == TokenType::Keyword && norm == kw;
    }
    bool is_word() const {
        return type == TokenType::Keyword || type == TokenType::Identifier ||
               type == TokenType::QuotedIdentifier;
    }
    bool is_name() const {
        return type == TokenType::Identifier || type == TokenType::QuotedIdentifier;
    }
    bool is_symbol(char c) const {
        return type == TokenType::Symbol && text.size() == 1 && text[0] == c;
    }
};

bool is_sql_keyword(std::string_view upper);

// Splits one statement into tokens. String literals ('' escape) and comments
// (-- and /* */) are single opaque tokens. Whitespace is skipped; token
// offsets allow byte-exact reconstruction of everything that isn't whitespace.
Result<std::vector<Token>> tokenize(std::string_view text);

}  // namespace guard::sql
