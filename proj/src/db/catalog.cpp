#include "guard/db/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "guard/sql/tokens.hpp"

namespace guard::db {

namespace {

bool is_unit_type(ObjectType t) {
    switch (t) {
        case ObjectType::Procedure:
        case ObjectType::Function:
        case ObjectType::Package:
        case ObjectType::PackageBody:
        case ObjectType::Trigger:
            return true;
        default:
            return false;
    }
}

std::vector<std::string> split_lines(std::string_view source) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= source.size()) {
        const std::size_t pos = source.find('\n', start);
        if (pos == std::string_view::npos) {
            if (start < source.size()) {
                lines.emplace_back(source.substr(start));
            }
            break;
        }
        lines.emplace_back(source.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

struct CreateShape {
    std::size_t source_offset = 0;  // where the unit text starts in raw
    bool wrapped = false;           // WRAPPED marker right after the name
    bool valid = false;
};

// walks CREATE [OR REPLACE] <type keywords> <name chain> [WRAPPED]
CreateShape inspect_create(std::string_view raw) {
    CreateShape shape;
    auto tokens = sql::tokenize(raw);
    if (!tokens.ok()) {
        return shape;
    }
    std::vector<sql::Token> sig;
    for (auto& t : tokens.value()) {
        if (t.type != sql::TokenType::Comment) {
            sig.push_back(std::move(t));
        }
    }
    std::size_t i = 0;
    if (i >= sig.size() || !sig[i].is_keyword("CREATE")) {
        return shape;
    }
    ++i;
    if (i + 1 < sig.size() && sig[i].is_keyword("OR") && sig[i + 1].is_keyword("REPLACE")) {
        i += 2;
    }
    if (i >= sig.size()) {
        return shape;
    }
    shape.source_offset = sig[i].offset;
    shape.valid = true;
    while (i < sig.size() && sig[i].type == sql::TokenType::Keyword) {
        ++i;
    }
    if (i < sig.size() && sig[i].is_name()) {
        ++i;
        while (i + 1 < sig.size() && sig[i].is_symbol('.') && sig[i + 1].is_name()) {
            i += 2;
        }
        if (i < sig.size() && sig[i].is_keyword("WRAPPED")) {
            shape.wrapped = true;
        }
    }
    return shape;
}

// WHERE <ident NAME> = '<literal>' — the only filter shape the mock honors
std::optional<std::string> extract_name_filter(std::string_view raw) {
    auto tokens = sql::tokenize(raw);
    if (!tokens.ok()) {
        return std::nullopt;
    }
    const auto& ts = tokens.value();
    for (std::size_t i = 0; i + 2 < ts.size(); ++i) {
        if (ts[i].is_word() && ts[i].norm == "NAME" && ts[i + 1].is_symbol('=') &&
            ts[i + 2].type == sql::TokenType::StringLiteral) {
            return ts[i + 2].norm;
        }
    }
    return std::nullopt;
}

}  // namespace

Result<std::vector<DbUser>> load_users(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::file_not_found, "cannot read " + path.string());
    }
    std::vector<DbUser> users;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find('\t', start);
            if (pos == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (fields.size() != 3 || fields[0].empty() || fields[2].empty() ||
            (fields[1] != "0" && fields[1] != "1")) {
            return make_error(Errc::corrupt_state,
                              path.string() + ":" + std::to_string(lineno) + ": malformed user");
        }
        DbUser user;
        user.name = ascii_upper(fields[0]);
        user.is_dba = fields[1] == "1";
        user.default_schema = ascii_upper(fields[2]);
        const bool dup = std::any_of(users.begin(), users.end(),
                                     [&](const DbUser& u) { return u.name == user.name; });
        if (dup) {
            return make_error(Errc::corrupt_state,
                              path.string() + ": duplicate user " + user.name);
        }
        users.push_back(std::move(user));
    }
    return users;
}

Result<ExecResult> Catalog::execute(const sql::ParsedStatement& stmt, const DbUser& user) {
    if (stmt.error) {
        return *stmt.error;
    }
    switch (stmt.cls) {
        case sql::StatementClass::Ddl:
            if (stmt.verb == "CREATE") {
                return execute_create(stmt);
            }
            if (stmt.verb == "DROP") {
                return execute_drop(stmt);
            }
            return ExecResult{};  // ALTER & friends: acknowledged, not modeled
        case sql::StatementClass::Query:
            if (!stmt.dictionary_refs.empty()) {
                auto rows = query_source_view(stmt.dictionary_refs.front(), user,
                                              extract_name_filter(stmt.raw));
                if (!rows.ok()) {
                    return rows.error();
                }
                return ExecResult{std::move(rows.value())};
            }
            return ExecResult{};  // stub empty row set
        case sql::StatementClass::Dml:
        case sql::StatementClass::SessionCtrl:
        case sql::StatementClass::Other:
            return ExecResult{};
    }
    return ExecResult{};
}

Result<ExecResult> Catalog::execute_create(const sql::ParsedStatement& stmt) {
    if (stmt.targets.empty() || stmt.targets.front().type == ObjectType::Unknown) {
        return ExecResult{};  // not an object kind the catalog models
    }
    const ObjectRef& ref = stmt.targets.front();
    const CreateShape shape = inspect_create(stmt.raw);
    if (!shape.valid) {
        return ExecResult{};
    }
    std::lock_guard lock(mu_);
    if (!stmt.is_or_replace && objects_.contains(ref)) {
        return make_error(Errc::duplicate_object, to_string(ref) + " already exists");
    }
    CatalogObject obj;
    obj.ref = ref;
    obj.source = std::string(stmt.raw.substr(shape.source_offset));
    obj.wrapped = shape.wrapped;
    obj.created_at = now_utc();
    objects_[ref] = std::move(obj);
    return ExecResult{};
}

Result<ExecResult> Catalog::execute_drop(const sql::ParsedStatement& stmt) {
    if (stmt.targets.empty()) {
        return make_error(Errc::no_such_object, "no object named");
    }
    const ObjectRef& ref = stmt.targets.front();
    std::lock_guard lock(mu_);
    if (ref.type != ObjectType::Unknown) {
        if (objects_.erase(ref) == 0) {
            return make_error(Errc::no_such_object, to_string(ref) + " does not exist");
        }
        return ExecResult{};
    }
    for (auto it = objects_.begin(); it != objects_.end(); ++it) {
        if (it->first.owner == ref.owner && it->first.name == ref.name) {
            objects_.erase(it);
            return ExecResult{};
        }
    }
    return make_error(Errc::no_such_object, to_string(ref) + " does not exist");
}

Result<std::vector<std::vector<std::string>>> Catalog::query_source_view(
    std::string_view view, const DbUser& user,
    const std::optional<std::string>& name_filter) const {
    const bool scoped = view == "USER_SOURCE";
    if (!scoped && view != "ALL_SOURCE" && view != "DBA_SOURCE") {
        return make_error(Errc::unknown_view, std::string(view) + " is not modeled");
    }
    std::vector<const CatalogObject*> units;
    std::lock_guard lock(mu_);
    for (const auto& [ref, obj] : objects_) {
        if (!is_unit_type(ref.type)) {
            continue;
        }
        if (scoped && ref.owner != user.default_schema) {
            continue;
        }
        if (name_filter && ref.name != *name_filter) {
            continue;
        }
        units.push_back(&obj);
    }
    std::sort(units.begin(), units.end(), [](const CatalogObject* a, const CatalogObject* b) {
        return std::tie(a->ref.name, a->ref.type, a->ref.owner) <
               std::tie(b->ref.name, b->ref.type, b->ref.owner);
    });
    std::vector<std::vector<std::string>> rows;
    for (const CatalogObject* obj : units) {
        const std::vector<std::string> lines = split_lines(obj->source);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            rows.push_back({obj->ref.name, std::string(to_string(obj->ref.type)),
                            std::to_string(i + 1), lines[i]});
        }
    }
    return rows;
}

void Catalog::install(CatalogObject obj) {
    std::lock_guard lock(mu_);
    objects_[obj.ref] = std::move(obj);
}

std::optional<CatalogObject> Catalog::find(const ObjectRef& ref) const {
    std::lock_guard lock(mu_);
    auto it = objects_.find(ref);
    if (it == objects_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<CatalogObject> Catalog::objects() const {
    std::lock_guard lock(mu_);
    std::vector<CatalogObject> out;
    out.reserve(objects_.size());
    for (const auto& [ref, obj] : objects_) {
        out.push_back(obj);
    }
    return out;
}

}  // namespace guard::db
