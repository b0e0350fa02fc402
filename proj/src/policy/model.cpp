#include "guard/policy/model.hpp"

#include <array>

namespace guard::policy {

std::string_view to_string(Verdict v) {
    return v == Verdict::Allow ? "ALLOW" : "KILL";
}

std::string_view to_string(Reason r) {
    switch (r) {
        case Reason::Ok: return "OK";
        case Reason::DisabledPassthrough: return "DISABLED_PASSTHROUGH";
        case Reason::GuardObject: return "GUARD_OBJECT";
        case Reason::DictionaryView: return "DICTIONARY_VIEW";
        case Reason::ProtectedObject: return "PROTECTED_OBJECT";
    }
    return "OK";
}

const std::vector<ObjectRef>& guard_objects() {
    static const std::vector<ObjectRef> kObjects = {
        {"GUARD", ObjectType::Table, "SECURITY_OBJECT"},
        {"GUARD", ObjectType::Table, "USER_PERMISSION"},
        {"GUARD", ObjectType::Table, "P_CONFIG"},
        {"GUARD", ObjectType::Table, "KILLED_SESSIONS"},
        {"GUARD", ObjectType::Table, "DDL_LOG"},
        {"GUARD", ObjectType::Package, "GUARD_PKG"},
    };
    return kObjects;
}

bool is_guard_object(const ObjectRef& target) {
    if (target.owner != "GUARD") {
        return false;
    }
    for (const ObjectRef& g : guard_objects()) {
        if (g.name == target.name) {
            return true;
        }
    }
    return false;
}

}  // namespace guard::policy
