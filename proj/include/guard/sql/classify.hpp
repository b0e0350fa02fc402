#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "guard/ids.hpp"
#include "guard/result.hpp"
#include "guard/sql/tokens.hpp"

namespace guard::sql {

enum class StatementClass {
    Ddl,
    Dml,
    Query,
    SessionCtrl,
    Other,
};

std::string_view to_string(StatementClass cls);

// Classified form of one SQL statement. On tokenizer failure or empty input
// the statement comes back as Other with no targets and `error` set; it is
// never silently treated as DDL.
struct ParsedStatement {
    std::string raw;
    StatementClass cls = StatementClass::Other;
    std::string verb;                           // uppercase, empty when none
    std::vector<ObjectRef> targets;
    std::vector<std::string> dictionary_refs;   // subset of the configured dictionary set
    bool is_or_replace = false;
    std::optional<Error> error;

    bool operator==(const ParsedStatement&) const = default;
};

const std::set<std::string>& default_dictionary_views();  // USER_/ALL_/DBA_SOURCE

// Classifies one statement. Unqualified object names get owner=default_schema.
// The extractor is keyword-driven and deliberately over-extracts table names;
// a false positive can only deny, never allow.
ParsedStatement classify(std::string_view text, std::string_view default_schema,
                         const std::set<std::string>& dictionary_views = default_dictionary_views());

}  // namespace guard::sql
