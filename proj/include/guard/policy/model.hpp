#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "guard/ids.hpp"
#include "guard/time_util.hpp"

namespace guard::policy {

struct ProtectedObject {
    ObjectRef ref;
    Timestamp added_at{};
    bool guard_owned = false;  // part of the guard's own control set, never removable
    bool operator==(const ProtectedObject&) const = default;
};

// A grant is active when the current instant satisfies every limit that is
// set. Dates are inclusive at both ends. Hour windows wrap past midnight:
// start > end means [start, 24) ∪ [0, end).
struct Grant {
    std::string grantee;
    ObjectRef object;
    std::optional<Date> start_date;
    std::optional<Date> end_date;
    std::optional<int> start_hour;  // 0..23, set together with end_hour
    std::optional<int> end_hour;
    bool operator==(const Grant&) const = default;
};

enum class Verdict { Allow, Kill };

enum class Reason {
    Ok,
    DisabledPassthrough,
    GuardObject,
    DictionaryView,
    ProtectedObject,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Reason r);

struct Decision {
    Verdict verdict = Verdict::Allow;
    Reason reason = Reason::Ok;
    bool operator==(const Decision&) const = default;
};

struct GuardConfig {
    bool enabled = true;
    std::string password_salt;    // hex
    std::string password_digest;  // hex SHA-256(salt || password)
    std::set<std::string> dictionary_views;
    bool operator==(const GuardConfig&) const = default;
};

// The guard's own control objects. Statements touching any of them are
// killed no matter who sent them and even while enforcement is off.
const std::vector<ObjectRef>& guard_objects();

// Owner GUARD plus one of the control names, any type: lexing cannot
// always recover the type, so the name alone condemns.
bool is_guard_object(const ObjectRef& target);

}  // namespace guard::policy
