#include "guard/sql/tokens.hpp"

#include <cctype>
#include <unordered_set>

#include "guard/ids.hpp"

namespace guard::sql {

namespace {

const std::unordered_set<std::string_view>& keyword_set() {
    static const std::unordered_set<std::string_view> kKeywords = {
        // statement verbs
        "SELECT", "INSERT", "UPDATE", "DELETE", "MERGE", "CREATE", "ALTER", "DROP", "TRUNCATE",
        "RENAME", "COMMENT", "GRANT", "REVOKE", "CALL", "EXECUTE", "COMMIT", "ROLLBACK",
        "SAVEPOINT", "SET", "WITH", "EXPLAIN", "LOCK", "ANALYZE", "AUDIT",
        // object types
        "PROCEDURE", "FUNCTION", "PACKAGE", "BODY", "TRIGGER", "TABLE", "VIEW", "INDEX",
        "SEQUENCE", "SYNONYM", "TYPE", "USER", "ROLE", "SESSION", "SYSTEM", "DATABASE",
        "TABLESPACE", "DIRECTORY", "MATERIALIZED", "COLUMN", "CONSTRAINT",
        // clause structure
        "FROM", "WHERE", "GROUP", "BY", "HAVING", "ORDER", "UNION", "INTERSECT", "MINUS",
        "DISTINCT", "ALL", "AS", "INTO", "VALUES", "JOIN", "INNER", "OUTER", "LEFT", "RIGHT",
        "FULL", "CROSS", "NATURAL", "ON", "USING", "TO", "OR", "REPLACE", "AND", "NOT", "NULL",
        "IS", "IN", "EXISTS", "BETWEEN", "LIKE", "CASE", "WHEN", "THEN", "ELSE", "MATCHED",
        "CONNECT", "START", "LIMIT", "OFFSET", "RETURNING", "FOR", "OF", "ADD", "MODIFY",
        "PRIMARY", "KEY", "FOREIGN", "REFERENCES", "CHECK", "UNIQUE", "DEFAULT", "CASCADE",
        "IDENTIFIED", "COMPILE", "ENABLE", "DISABLE", "GLOBAL", "TEMPORARY", "PUBLIC",
        // PL/SQL block structure
        "DECLARE", "BEGIN", "END", "EXCEPTION", "IF", "ELSIF", "LOOP", "WHILE", "RETURN",
        "WRAPPED",
    };
    return kKeywords;
}

bool is_word_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$' || c == '#';
}

}  // namespace

bool is_sql_keyword(std::string_view upper) {
    return keyword_set().contains(upper);
}

Result<std::vector<Token>> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();

    while (i < n) {
        const char c = text[i];
        const char next = (i + 1 < n) ? text[i + 1] : '\0';

        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }

        // -- line comment (runs to end of line, newline excluded)
        if (c == '-' && next == '-') {
            const std::size_t start = i;
            while (i < n && text[i] != '\n') {
                ++i;
            }
            out.push_back({TokenType::Comment, std::string(text.substr(start, i - start)), "", start});
            continue;
        }

        // /* block comment */
        if (c == '/' && next == '*') {
            const std::size_t start = i;
            i += 2;
            bool closed = false;
            while (i < n) {
                if (text[i] == '*' && i + 1 < n && text[i + 1] == '/') {
                    i += 2;
                    closed = true;
                    break;
                }
                ++i;
            }
            if (!closed) {
                return make_error(Errc::unterminated_comment,
                                  "unterminated /* comment at byte " + std::to_string(start));
            }
            out.push_back({TokenType::Comment, std::string(text.substr(start, i - start)), "", start});
            continue;
        }

        // q'X...X' alternative quoting: the delimiter after q' pairs with
        // itself (or its bracket partner) immediately before the final '
        if ((c == 'q' || c == 'Q') && next == '\'' && i + 2 < n) {
            const std::size_t start = i;
            const char open = text[i + 2];
            char close = open;
            if (open == '[') close = ']';
            else if (open == '(') close = ')';
            else if (open == '{') close = '}';
            else if (open == '<') close = '>';
            i += 3;
            std::string body;
            bool closed = false;
            while (i < n) {
                if (text[i] == close && i + 1 < n && text[i + 1] == '\'') {
                    i += 2;
                    closed = true;
                    break;
                }
                body += text[i];
                ++i;
            }
            if (!closed) {
                return make_error(Errc::unterminated_string,
                                  "unterminated q-quoted literal at byte " + std::to_string(start));
            }
            out.push_back(
                {TokenType::StringLiteral, std::string(text.substr(start, i - start)), body, start});
            continue;
        }

        // '...' string literal, '' escapes a quote
        if (c == '\'') {
            const std::size_t start = i;
            ++i;
            std::string body;
            bool closed = false;
            while (i < n) {
                if (text[i] == '\'') {
                    if (i + 1 < n && text[i + 1] == '\'') {
                        body += '\'';
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                body += text[i];
                ++i;
            }
            if (!closed) {
                return make_error(Errc::unterminated_string,
                                  "unterminated string literal at byte " + std::to_string(start));
            }
            out.push_back(
                {TokenType::StringLiteral, std::string(text.substr(start, i - start)), body, start});
            continue;
        }

        // "..." quoted identifier, "" escapes a quote
        if (c == '"') {
            const std::size_t start = i;
            ++i;
            std::string body;
            bool closed = false;
            while (i < n) {
                if (text[i] == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        body += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                body += text[i];
                ++i;
            }
            if (!closed) {
                return make_error(Errc::unterminated_string,
                                  "unterminated quoted identifier at byte " + std::to_string(start));
            }
            out.push_back({TokenType::QuotedIdentifier, std::string(text.substr(start, i - start)),
                           body, start});
            continue;
        }

        if (is_word_start(c)) {
            const std::size_t start = i;
            while (i < n && is_word_char(text[i])) {
                ++i;
            }
            std::string raw(text.substr(start, i - start));
            std::string upper = ascii_upper(raw);
            const TokenType type =
                is_sql_keyword(upper) ? TokenType::Keyword : TokenType::Identifier;
            out.push_back({type, std::move(raw), std::move(upper), start});
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
                ++i;
            }
            if (i < n && text[i] == '.' && i + 1 < n &&
                std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    ++i;
                }
            }
            if (i < n && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    i = j;
                    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
                        ++i;
                    }
                }
            }
            std::string raw(text.substr(start, i - start));
            out.push_back({TokenType::Number, raw, raw, start});
            continue;
        }

        out.push_back({TokenType::Symbol, std::string(1, c), std::string(1, c), i});
        ++i;
    }

    return out;
}

}  // namespace guard::sql
