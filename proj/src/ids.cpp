#include "guard/ids.hpp"

#include <cctype>

namespace guard {

std::string_view to_string(ObjectType type) {
    switch (type) {
        case ObjectType::Procedure: return "PROCEDURE";
        case ObjectType::Function: return "FUNCTION";
        case ObjectType::Package: return "PACKAGE";
        case ObjectType::PackageBody: return "PACKAGE_BODY";
        case ObjectType::Trigger: return "TRIGGER";
        case ObjectType::Table: return "TABLE";
        case ObjectType::View: return "VIEW";
        case ObjectType::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::optional<ObjectType> object_type_from(std::string_view text) {
    std::string up = ascii_upper(text);
    for (char& c : up) {
        if (c == ' ') c = '_';
    }
    if (up == "PROCEDURE") return ObjectType::Procedure;
    if (up == "FUNCTION") return ObjectType::Function;
    if (up == "PACKAGE") return ObjectType::Package;
    if (up == "PACKAGE_BODY") return ObjectType::PackageBody;
    if (up == "TRIGGER") return ObjectType::Trigger;
    if (up == "TABLE") return ObjectType::Table;
    if (up == "VIEW") return ObjectType::View;
    if (up == "UNKNOWN") return ObjectType::Unknown;
    return std::nullopt;
}

std::string to_string(const ObjectRef& ref) {
    std::string out = ref.owner;
    out += '.';
    out += ref.name;
    out += " (";
    out += to_string(ref.type);
    out += ')';
    return out;
}

std::string ascii_upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_valid_unquoted_identifier(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) {
        return false;
    }
    for (char c : s) {
        const auto uc = static_cast<unsigned char>(c);
        if (!std::isalnum(uc) && c != '_' && c != '$' && c != '#') {
            return false;
        }
    }
    return true;
}

std::optional<std::string> parse_identifier(std::string_view token) {
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
        std::string inner(token.substr(1, token.size() - 2));
        if (inner.empty() || inner.find('"') != std::string::npos) {
            return std::nullopt;
        }
        return inner;
    }
    if (!is_valid_unquoted_identifier(token)) {
        return std::nullopt;
    }
    return ascii_upper(token);
}

}  // namespace guard
