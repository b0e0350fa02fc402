#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace guard {

enum class ObjectType {
    Procedure,
    Function,
    Package,
    PackageBody,
    Trigger,
    Table,
    View,
    Unknown,
};

std::string_view to_string(ObjectType type);

// Accepts both "PACKAGE_BODY" and "PACKAGE BODY" spellings, case-insensitive.
std::optional<ObjectType> object_type_from(std::string_view text);

// Normalized (owner, type, name) triple identifying a database object.
// Owner and name are stored uppercase unless they came from a quoted
// identifier, in which case the original case is preserved.
struct ObjectRef {
    std::string owner;
    ObjectType type = ObjectType::Unknown;
    std::string name;

    auto operator<=>(const ObjectRef&) const = default;
};

std::string to_string(const ObjectRef& ref);

std::string ascii_upper(std::string_view s);
std::string ascii_lower(std::string_view s);

// Unquoted identifiers: letter first, then letters, digits, _, $, #.
bool is_valid_unquoted_identifier(std::string_view s);

// Parses an identifier as written on an admin/CLI surface: either a bare
// unquoted identifier (normalized uppercase) or a double-quoted one
// (case preserved, quotes stripped). Empty / malformed input -> nullopt.
std::optional<std::string> parse_identifier(std::string_view token);

}  // namespace guard
