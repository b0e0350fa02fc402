#include "guard/sql/script.hpp"

#include <cctype>

namespace guard::sql {

namespace {

std::size_t skip_blank(std::string_view s, std::size_t i) {
    const std::size_t n = s.size();
    while (i < n) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '-' && i + 1 < n && s[i + 1] == '-') {
            i += 2;
            while (i < n && s[i] != '\n') ++i;
        } else if (c == '/' && i + 1 < n && s[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(s[i] == '*' && s[i + 1] == '/')) ++i;
            i = (i + 1 < n) ? i + 2 : n;
        } else {
            break;
        }
    }
    return i;
}

std::string read_word(std::string_view s, std::size_t& i) {
    std::string w;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '#') {
            w.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            ++i;
        } else {
            break;
        }
    }
    return w;
}

bool is_unit_word(const std::string& w) {
    return w == "PROCEDURE" || w == "FUNCTION" || w == "PACKAGE" || w == "TRIGGER" ||
           w == "TYPE";
}

// Does the text starting here open a PL/SQL unit (';' kept inside,
// terminated by a '/' line)? Bare unit texts — including wrapped
// headers — count too.
bool opens_plsql(std::string_view rest) {
    std::size_t i = skip_blank(rest, 0);
    std::string w = read_word(rest, i);
    if (w == "DECLARE" || w == "BEGIN" || is_unit_word(w)) {
        return true;
    }
    if (w != "CREATE") {
        return false;
    }
    i = skip_blank(rest, i);
    w = read_word(rest, i);
    if (w == "OR") {
        i = skip_blank(rest, i);
        read_word(rest, i);  // REPLACE
        i = skip_blank(rest, i);
        w = read_word(rest, i);
    }
    return is_unit_word(w);
}

bool is_line_space(char c) {
    return c == ' ' || c == '\t' || c == '\r';
}

}  // namespace

std::vector<Segment> split_script(std::string_view script) {
    std::vector<Segment> out;
    const std::size_t n = script.size();
    std::size_t start = 0;
    while (start < n) {
        const bool plsql = opens_plsql(script.substr(start));
        std::size_t i = start;
        std::size_t line_start = start;
        std::size_t end = n;
        std::size_t term_begin = n;
        std::size_t term_end = n;
        bool found = false;
        while (i < n && !found) {
            const char c = script[i];
            if (c == '\n') {
                line_start = ++i;
            } else if (c == '-' && i + 1 < n && script[i + 1] == '-') {
                i += 2;
                while (i < n && script[i] != '\n') ++i;
            } else if (c == '/' && i + 1 < n && script[i + 1] == '*') {
                i += 2;
                while (i + 1 < n && !(script[i] == '*' && script[i + 1] == '/')) ++i;
                i = (i + 1 < n) ? i + 2 : n;
            } else if (c == '\'' || c == '"') {
                const char quote = c;
                ++i;
                while (i < n) {
                    if (script[i] == quote) {
                        if (i + 1 < n && script[i + 1] == quote) {
                            i += 2;  // doubled quote stays inside
                            continue;
                        }
                        ++i;
                        break;
                    }
                    ++i;
                }
            } else if (!plsql && c == ';') {
                std::size_t j = i + 1;
                while (j < n && is_line_space(script[j])) ++j;
                if (j >= n || script[j] == '\n') {
                    end = i;
                    term_begin = i;
                    term_end = (j < n) ? j + 1 : j;
                    found = true;
                } else {
                    ++i;  // mid-line ';' stays inside the statement
                }
            } else if (plsql && c == '/') {
                bool solo = true;
                for (std::size_t k = line_start; k < i; ++k) {
                    if (!is_line_space(script[k])) {
                        solo = false;
                        break;
                    }
                }
                std::size_t j = i + 1;
                if (solo) {
                    while (j < n && script[j] != '\n') {
                        if (!is_line_space(script[j])) {
                            solo = false;
                            break;
                        }
                        ++j;
                    }
                }
                if (solo) {
                    end = line_start;
                    term_begin = line_start;
                    term_end = (j < n) ? j + 1 : n;
                    found = true;
                } else {
                    ++i;
                }
            } else {
                ++i;
            }
        }
        if (!found) {
            end = n;
            term_begin = n;
            term_end = n;
        }
        out.push_back({std::string(script.substr(start, end - start)),
                       std::string(script.substr(term_begin, term_end - term_begin))});
        start = term_end;
    }
    return out;
}

bool is_blank(std::string_view text) {
    return skip_blank(text, 0) == text.size();
}

}  // namespace guard::sql
