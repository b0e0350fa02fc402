#include "guard/policy/engine.hpp"

namespace guard::policy {

namespace {

std::string object_key(std::string_view owner, std::string_view name) {
    std::string k;
    k.reserve(owner.size() + name.size() + 1);
    k.append(owner);
    k.push_back('\x1f');
    k.append(name);
    return k;
}

std::string grant_key(std::string_view grantee, const ObjectRef& o) {
    std::string k;
    k.append(grantee);
    k.push_back('\x1f');
    k.append(o.owner);
    k.push_back('\x1f');
    k.append(to_string(o.type));
    k.push_back('\x1f');
    k.append(o.name);
    return k;
}

}  // namespace

bool is_grant_active(const Grant& g, Timestamp now) {
    const Date today = date_of(now);
    if (g.start_date && today < *g.start_date) {
        return false;
    }
    if (g.end_date && today > *g.end_date) {
        return false;
    }
    if (g.start_hour && g.end_hour) {
        const int h = hour_of(now);
        const int s = *g.start_hour;
        const int e = *g.end_hour;
        if (s < e) {
            if (h < s || h >= e) {
                return false;
            }
        } else if (s > e) {
            if (h < s && h >= e) {
                return false;
            }
        } else {
            return false;  // empty window; rejected at creation, dead if it leaks in
        }
    }
    return true;
}

bool refs_match(const ObjectRef& target, const ObjectRef& registered) {
    return target.owner == registered.owner && target.name == registered.name &&
           (target.type == ObjectType::Unknown || registered.type == ObjectType::Unknown ||
            target.type == registered.type);
}

PolicyIndex::PolicyIndex(std::vector<ProtectedObject> registry, std::vector<Grant> grants)
    : registry_(std::move(registry)), grants_(std::move(grants)) {
    for (std::size_t i = 0; i < registry_.size(); ++i) {
        by_owner_name_[object_key(registry_[i].ref.owner, registry_[i].ref.name)].push_back(i);
    }
    for (const Grant& g : grants_) {
        grants_by_key_[grant_key(g.grantee, g.object)].push_back(&g);
        auto it = by_owner_name_.find(object_key(g.object.owner, g.object.name));
        if (it != by_owner_name_.end()) {
            for (std::size_t idx : it->second) {
                if (refs_match(g.object, registry_[idx].ref)) {
                    granted_objects_[g.grantee].insert(idx);
                }
            }
        }
    }
}

std::vector<const ProtectedObject*> PolicyIndex::lookup(const ObjectRef& target) const {
    std::vector<const ProtectedObject*> hits;
    auto it = by_owner_name_.find(object_key(target.owner, target.name));
    if (it == by_owner_name_.end()) {
        return hits;
    }
    for (std::size_t idx : it->second) {
        if (refs_match(target, registry_[idx].ref)) {
            hits.push_back(&registry_[idx]);
        }
    }
    return hits;
}

bool PolicyIndex::has_active_grant(std::string_view user, const ObjectRef& registered,
                                   Timestamp now) const {
    auto it = grants_by_key_.find(grant_key(user, registered));
    if (it == grants_by_key_.end()) {
        return false;
    }
    for (const Grant* g : it->second) {
        if (is_grant_active(*g, now)) {
            return true;
        }
    }
    return false;
}

bool PolicyIndex::covered_by_active_grants(std::string_view user, Timestamp now) const {
    auto it = granted_objects_.find(std::string(user));
    if (it == granted_objects_.end() || it->second.size() < registry_.size()) {
        return false;
    }
    for (const ProtectedObject& po : registry_) {
        if (!has_active_grant(user, po.ref, now)) {
            return false;
        }
    }
    return true;
}

Decision decide(const sql::ParsedStatement& stmt, std::string_view user, Timestamp now,
                bool enabled, const PolicyIndex& index) {
    // 1. The guard's own objects are untouchable, enforcement on or off.
    for (const ObjectRef& t : stmt.targets) {
        if (is_guard_object(t)) {
            return {Verdict::Kill, Reason::GuardObject};
        }
    }
    // 2. Everything else passes while enforcement is off.
    if (!enabled) {
        return {Verdict::Allow, Reason::DisabledPassthrough};
    }
    // 3. Source-dictionary reads require active grants on the whole registry.
    if (!stmt.dictionary_refs.empty() && !index.covered_by_active_grants(user, now)) {
        return {Verdict::Kill, Reason::DictionaryView};
    }
    // 4. DDL/DML on a protected object needs an active grant on it.
    if (stmt.cls == sql::StatementClass::Ddl || stmt.cls == sql::StatementClass::Dml) {
        for (const ObjectRef& t : stmt.targets) {
            for (const ProtectedObject* po : index.lookup(t)) {
                if (!index.has_active_grant(user, po->ref, now)) {
                    return {Verdict::Kill, Reason::ProtectedObject};
                }
            }
        }
    }
    return {Verdict::Allow, Reason::Ok};
}

}  // namespace guard::policy
