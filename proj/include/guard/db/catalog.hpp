#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guard/ids.hpp"
#include "guard/result.hpp"
#include "guard/sql/classify.hpp"
#include "guard/time_util.hpp"

namespace guard::db {

struct CatalogObject {
    ObjectRef ref;
    std::string source;  // unit text from the type keyword onward
    bool wrapped = false;
    Timestamp created_at{};
    bool operator==(const CatalogObject&) const = default;
};

struct DbUser {
    std::string name;
    bool is_dba = false;
    std::string default_schema;
    bool operator==(const DbUser&) const = default;
};

// users.tsv: name <TAB> is_dba 0|1 <TAB> default_schema, one per line;
// names normalized uppercase and unique
Result<std::vector<DbUser>> load_users(const std::filesystem::path& path);

struct ExecResult {
    std::vector<std::vector<std::string>> rows;  // non-empty only for queries
    bool operator==(const ExecResult&) const = default;
};

// Mock backend: holds object sources and answers statements that passed
// the policy. DML touches no data — admission is the subject here, not
// storage. Statements apply strictly in arrival order.
class Catalog {
public:
    Result<ExecResult> execute(const sql::ParsedStatement& stmt, const DbUser& user);

    // rows of (name, type, line number, text); USER_SOURCE scopes to the
    // session user's default schema, ALL_/DBA_SOURCE see everything
    Result<std::vector<std::vector<std::string>>> query_source_view(
        std::string_view view, const DbUser& user,
        const std::optional<std::string>& name_filter) const;

    // bootstrap installation, bypassing statement handling
    void install(CatalogObject obj);

    std::optional<CatalogObject> find(const ObjectRef& ref) const;
    std::vector<CatalogObject> objects() const;

private:
    Result<ExecResult> execute_create(const sql::ParsedStatement& stmt);
    Result<ExecResult> execute_drop(const sql::ParsedStatement& stmt);

    mutable std::mutex mu_;
    std::map<ObjectRef, CatalogObject> objects_;
};

}  // namespace guard::db
