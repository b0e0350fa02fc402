#include "guard/sql/classify.hpp"

#include <algorithm>
#include <array>

namespace guard::sql {

namespace {

constexpr std::array<std::string_view, 8> kDdlVerbs = {
    "CREATE", "ALTER", "DROP", "TRUNCATE", "RENAME", "GRANT", "REVOKE", "COMMENT"};
constexpr std::array<std::string_view, 4> kDmlVerbs = {"INSERT", "UPDATE", "DELETE", "MERGE"};
constexpr std::array<std::string_view, 4> kSessionCtrlVerbs = {"COMMIT", "ROLLBACK", "SAVEPOINT",
                                                              "SET"};

bool contains(const auto& arr, std::string_view v) {
    return std::find(arr.begin(), arr.end(), v) != arr.end();
}

struct NamePart {
    std::string value;  // normalized (upper unless quoted)
};

struct Chain {
    std::vector<NamePart> parts;
    std::size_t next = 0;  // index of first token after the chain
};

// ident (. ident)* starting at sig[i]; empty chain if sig[i] is not a name.
Chain parse_chain(const std::vector<Token>& sig, std::size_t i) {
    Chain chain;
    chain.next = i;
    if (i >= sig.size() || !sig[i].is_name()) {
        return chain;
    }
    chain.parts.push_back({sig[i].norm});
    std::size_t j = i + 1;
    while (j + 1 < sig.size() && sig[j].is_symbol('.') && sig[j + 1].is_name()) {
        chain.parts.push_back({sig[j + 1].norm});
        j += 2;
    }
    chain.next = j;
    return chain;
}

ObjectRef ref_from_chain(const Chain& chain, std::string_view default_schema, ObjectType type) {
    ObjectRef ref;
    ref.type = type;
    const auto& parts = chain.parts;
    if (parts.size() == 1) {
        ref.owner = std::string(default_schema);
        ref.name = parts[0].value;
    } else {
        ref.owner = parts[parts.size() - 2].value;
        ref.name = parts[parts.size() - 1].value;
    }
    return ref;
}

ObjectType type_from_keyword_run(const std::vector<std::string>& run) {
    if (run.empty()) {
        return ObjectType::Unknown;
    }
    if (run.size() >= 2 && run[run.size() - 2] == "PACKAGE" && run.back() == "BODY") {
        return ObjectType::PackageBody;
    }
    const std::string& last = run.back();
    if (last == "PROCEDURE") return ObjectType::Procedure;
    if (last == "FUNCTION") return ObjectType::Function;
    if (last == "PACKAGE") return ObjectType::Package;
    if (last == "TRIGGER") return ObjectType::Trigger;
    if (last == "TABLE") return ObjectType::Table;
    if (last == "VIEW") return ObjectType::View;
    return ObjectType::Unknown;
}

// Consumes consecutive keyword tokens starting at i.
std::vector<std::string> keyword_run(const std::vector<Token>& sig, std::size_t& i) {
    std::vector<std::string> run;
    while (i < sig.size() && sig[i].type == TokenType::Keyword) {
        run.push_back(sig[i].norm);
        ++i;
    }
    return run;
}

std::size_t skip_parens(const std::vector<Token>& sig, std::size_t i) {
    // sig[i] is '('; returns index after the matching ')'
    int depth = 0;
    while (i < sig.size()) {
        if (sig[i].is_symbol('(')) {
            ++depth;
        } else if (sig[i].is_symbol(')')) {
            --depth;
            if (depth == 0) {
                return i + 1;
            }
        }
        ++i;
    }
    return i;
}

class Extractor {
public:
    Extractor(const std::vector<Token>& sig, std::string_view default_schema,
              const std::set<std::string>& dictionary_views, ParsedStatement& out)
        : sig_(sig), schema_(default_schema), dict_(dictionary_views), out_(out) {}

    void add_target(const ObjectRef& ref) {
        if (ref.name.empty()) {
            return;
        }
        if (std::find(out_.targets.begin(), out_.targets.end(), ref) == out_.targets.end()) {
            out_.targets.push_back(ref);
        }
    }

    // A table/view appearing as a data source; also feeds dictionary_refs.
    void add_source(const Chain& chain) {
        if (chain.parts.empty()) {
            return;
        }
        const ObjectRef ref = ref_from_chain(chain, schema_, ObjectType::Unknown);
        add_target(ref);
        if (dict_.contains(ref.name) &&
            std::find(out_.dictionary_refs.begin(), out_.dictionary_refs.end(), ref.name) ==
                out_.dictionary_refs.end()) {
            out_.dictionary_refs.push_back(ref.name);
        }
    }

    // FROM item list: chain [alias] (, chain [alias])*; subqueries skipped,
    // their inner FROMs are picked up by the main scan.
    std::size_t from_list(std::size_t i) {
        std::size_t j = i;
        while (j < sig_.size()) {
            if (sig_[j].is_symbol('(')) {
                j = skip_parens(sig_, j);
            } else if (sig_[j].is_name()) {
                const Chain chain = parse_chain(sig_, j);
                add_source(chain);
                j = chain.next;
            } else {
                break;
            }
            if (j < sig_.size() && sig_[j].is_keyword("AS")) {
                ++j;
            }
            if (j < sig_.size() && sig_[j].type == TokenType::Identifier) {
                ++j;  // alias
            }
            if (j < sig_.size() && sig_[j].is_symbol(',')) {
                ++j;
                continue;
            }
            break;
        }
        return j;
    }

    // Scans the whole statement for source positions (FROM/JOIN/INTO/USING);
    // runs for DML and queries.
    void scan_sources() {
        for (std::size_t i = 0; i < sig_.size(); ++i) {
            const Token& t = sig_[i];
            if (t.type != TokenType::Keyword) {
                continue;
            }
            if (t.norm == "FROM") {
                from_list(i + 1);
            } else if (t.norm == "JOIN" || t.norm == "INTO" || t.norm == "USING") {
                const Chain chain = parse_chain(sig_, i + 1);
                add_source(chain);
            }
        }
    }

    // Object named right after the verb, e.g. UPDATE <table>, DELETE <table>.
    void chain_after(std::size_t i) {
        add_source(parse_chain(sig_, i));
    }

    // First top-level ON clause: GRANT/REVOKE/COMMENT, CREATE INDEX ... ON t.
    void scan_on_clause() {
        int depth = 0;
        for (std::size_t i = 0; i < sig_.size(); ++i) {
            const Token& t = sig_[i];
            if (t.is_symbol('(')) {
                ++depth;
            } else if (t.is_symbol(')')) {
                --depth;
            } else if (depth == 0 && t.is_keyword("ON")) {
                std::size_t j = i + 1;
                const std::vector<std::string> run = keyword_run(sig_, j);
                Chain chain = parse_chain(sig_, j);
                if (chain.parts.empty()) {
                    return;
                }
                // COMMENT ON COLUMN owner.table.column: drop the column part
                if (std::find(run.begin(), run.end(), "COLUMN") != run.end() &&
                    chain.parts.size() >= 2) {
                    chain.parts.pop_back();
                }
                add_target(ref_from_chain(chain, schema_, type_from_keyword_run(run)));
                return;
            }
        }
    }

    void extract_ddl(const std::string& verb) {
        std::size_t i = 1;
        if (verb == "CREATE" && i + 1 < sig_.size() && sig_[i].is_keyword("OR") &&
            sig_[i + 1].is_keyword("REPLACE")) {
            out_.is_or_replace = true;
            i += 2;
        }
        if (verb == "GRANT" || verb == "REVOKE" || verb == "COMMENT") {
            scan_on_clause();
            return;
        }
        if (verb == "RENAME") {
            const Chain from = parse_chain(sig_, i);
            if (!from.parts.empty()) {
                add_target(ref_from_chain(from, schema_, ObjectType::Unknown));
                std::size_t j = from.next;
                if (j < sig_.size() && sig_[j].is_keyword("TO")) {
                    const Chain to = parse_chain(sig_, j + 1);
                    if (!to.parts.empty()) {
                        add_target(ref_from_chain(to, schema_, ObjectType::Unknown));
                    }
                }
            }
            return;
        }
        // CREATE / ALTER / DROP / TRUNCATE: [modifier keywords] <type kw>* <name>
        const std::vector<std::string> run = keyword_run(sig_, i);
        const ObjectType type = type_from_keyword_run(run);
        const Chain chain = parse_chain(sig_, i);
        if (!chain.parts.empty()) {
            add_target(ref_from_chain(chain, schema_, type));
        }
        if (type == ObjectType::Unknown) {
            scan_on_clause();  // CREATE INDEX i ON t and friends
        }
    }

private:
    const std::vector<Token>& sig_;
    std::string_view schema_;
    const std::set<std::string>& dict_;
    ParsedStatement& out_;
};

// For statements starting with WITH: the controlling verb is the first
// top-level SELECT/INSERT/UPDATE/DELETE/MERGE after the CTE list.
std::string with_main_verb(const std::vector<Token>& sig) {
    int depth = 0;
    for (std::size_t i = 1; i < sig.size(); ++i) {
        const Token& t = sig[i];
        if (t.is_symbol('(')) {
            ++depth;
        } else if (t.is_symbol(')')) {
            --depth;
        } else if (depth == 0 && t.type == TokenType::Keyword) {
            if (t.norm == "SELECT" || contains(kDmlVerbs, t.norm)) {
                return t.norm;
            }
        }
    }
    return "";
}

}  // namespace

std::string_view to_string(StatementClass cls) {
    switch (cls) {
        case StatementClass::Ddl: return "DDL";
        case StatementClass::Dml: return "DML";
        case StatementClass::Query: return "QUERY";
        case StatementClass::SessionCtrl: return "SESSION_CTRL";
        case StatementClass::Other: return "OTHER";
    }
    return "OTHER";
}

const std::set<std::string>& default_dictionary_views() {
    static const std::set<std::string> kViews = {"USER_SOURCE", "ALL_SOURCE", "DBA_SOURCE"};
    return kViews;
}

ParsedStatement classify(std::string_view text, std::string_view default_schema,
                         const std::set<std::string>& dictionary_views) {
    ParsedStatement ps;
    ps.raw = std::string(text);

    auto tokens = tokenize(text);
    if (!tokens.ok()) {
        ps.error = make_error(Errc::malformed_statement, tokens.error().message);
        return ps;
    }

    std::vector<Token> sig;
    sig.reserve(tokens.value().size());
    for (auto& t : tokens.value()) {
        if (t.type != TokenType::Comment) {
            sig.push_back(std::move(t));
        }
    }
    if (sig.empty()) {
        ps.error = make_error(Errc::empty_statement, "statement is empty");
        return ps;
    }

    const Token& first = sig[0];
    if (first.type != TokenType::Keyword) {
        return ps;  // OTHER, no verb
    }
    ps.verb = first.norm;

    // Anonymous PL/SQL blocks: opaque, no targets.
    if (ps.verb == "DECLARE" || ps.verb == "BEGIN") {
        return ps;
    }

    if (ps.verb == "WITH") {
        const std::string main = with_main_verb(sig);
        if (main.empty()) {
            return ps;  // OTHER, verb WITH
        }
        ps.verb = main;
    }

    Extractor ex(sig, default_schema, dictionary_views, ps);

    if (contains(kDdlVerbs, ps.verb)) {
        ps.cls = StatementClass::Ddl;
        ex.extract_ddl(ps.verb);
        return ps;
    }
    if (contains(kDmlVerbs, ps.verb)) {
        ps.cls = StatementClass::Dml;
        if (ps.verb == "UPDATE" && sig[0].norm == "UPDATE") {
            ex.chain_after(1);
        } else if (ps.verb == "DELETE" && sig[0].norm == "DELETE" && sig.size() > 1 &&
                   sig[1].is_name()) {
            ex.chain_after(1);  // DELETE t WHERE ... (FROM omitted)
        }
        ex.scan_sources();
        return ps;
    }
    if (ps.verb == "SELECT") {
        ps.cls = StatementClass::Query;
        ex.scan_sources();
        return ps;
    }
    if (contains(kSessionCtrlVerbs, ps.verb)) {
        ps.cls = StatementClass::SessionCtrl;
        return ps;
    }
    return ps;  // OTHER (CALL, EXPLAIN, ...)
}

}  // namespace guard::sql
