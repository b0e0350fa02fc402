#pragma once

#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "guard/policy/model.hpp"
#include "guard/sql/classify.hpp"

namespace guard::policy {

bool is_grant_active(const Grant& g, Timestamp now);

// Can a statement target denote this registry entry? Owner and name must
// match; an unknown type on either side matches anything (the lexer cannot
// always recover types, and guessing open would let statements through).
bool refs_match(const ObjectRef& target, const ObjectRef& registered);

// Read-optimized view over the registry and grant list. Rebuilt on admin
// changes; decide() runs against an immutable snapshot.
class PolicyIndex {
public:
    PolicyIndex() = default;
    PolicyIndex(std::vector<ProtectedObject> registry, std::vector<Grant> grants);

    const std::vector<ProtectedObject>& registry() const { return registry_; }

    // registry entries a target can denote
    std::vector<const ProtectedObject*> lookup(const ObjectRef& target) const;

    bool has_active_grant(std::string_view user, const ObjectRef& registered,
                          Timestamp now) const;

    // user holds an active grant on every registry entry
    bool covered_by_active_grants(std::string_view user, Timestamp now) const;

private:
    std::vector<ProtectedObject> registry_;
    std::vector<Grant> grants_;
    // OWNER \x1f NAME -> registry indices (same name may exist with
    // several types)
    std::unordered_map<std::string, std::vector<std::size_t>> by_owner_name_;
    // GRANTEE \x1f OWNER \x1f TYPE \x1f NAME -> grants
    std::unordered_map<std::string, std::vector<const Grant*>> grants_by_key_;
    // grantee -> registry indices with at least one grant, for a cheap
    // "cannot possibly cover" cut-off
    std::unordered_map<std::string, std::unordered_set<std::size_t>> granted_objects_;
};

// Single authority over allow/kill. Evaluation order is fixed; earlier
// rules win. The caller's privileges (DBA or not) are deliberately not a
// parameter: nobody bypasses the guard.
Decision decide(const sql::ParsedStatement& stmt, std::string_view user, Timestamp now,
                bool enabled, const PolicyIndex& index);

}  // namespace guard::policy
