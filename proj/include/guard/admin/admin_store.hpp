#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "guard/policy/engine.hpp"
#include "guard/policy/model.hpp"
#include "guard/result.hpp"

namespace guard::admin {

struct AdminState {
    policy::GuardConfig config;
    std::vector<policy::ProtectedObject> registry;
    std::vector<policy::Grant> grants;
    std::uint64_t version = 0;
};

// Delivers a freshly generated password out of band (console, file drop).
// Runs before the new digest is persisted; an error here aborts the reset.
using PasswordNotifier = std::function<Result<void>(std::string_view password)>;

// Default notification sink: one UTF-8 text file per event in outbox_dir
// with recipient / password / issued_at lines.
PasswordNotifier outbox_notifier(std::filesystem::path outbox_dir, std::string recipient);

// Owns the protection state: registry, grants, configuration, admin
// credential. Every mutation is validated, applied to a copy, and written
// out atomically (temp file + rename, trailing content digest) before it
// becomes visible — a torn write can never be loaded, it is refused as
// corrupt instead of silently repaired.
class AdminStore {
public:
    // requires all three state files, intact; anything less is an error
    static Result<std::unique_ptr<AdminStore>> open(const std::filesystem::path& dir);

    // creates the state directory with the guard's own objects registered
    static Result<std::unique_ptr<AdminStore>> initialize(const std::filesystem::path& dir,
                                                          std::string_view password);

    AdminStore(const AdminStore&) = delete;
    AdminStore& operator=(const AdminStore&) = delete;

    std::shared_ptr<const AdminState> state() const;
    // rebuilt lazily when the state version moves
    std::shared_ptr<const policy::PolicyIndex> policy_index() const;

    Result<void> verify_password(std::string_view password) const;
    // failed verifications since start, for diagnostics
    std::uint64_t bad_password_count() const { return bad_password_count_.load(); }

    Result<void> set_security(std::string_view password, bool enabled);
    Result<void> set_password(std::string_view old_password, std::string_view new_password);
    // generated password goes through notify first; on success returns it
    Result<std::string> reset_password(const PasswordNotifier& notify);

    Result<void> add_object(const ObjectRef& ref);
    Result<void> add_objects(const std::vector<ObjectRef>& refs);
    // guard-owned entries refuse removal; grants on the object stay behind
    // but are inert until something with the same triple is re-added
    Result<void> remove_object(const ObjectRef& ref);

    Result<void> grant_permission(const policy::Grant& grant);
    Result<void> grant_many(const std::vector<policy::Grant>& grants);
    // drops every grant this grantee holds on the object
    Result<void> revoke_permission(std::string_view grantee, const ObjectRef& object);

    static constexpr std::size_t kMinPasswordLength = 8;

private:
    AdminStore() = default;

    Result<void> commit(AdminState next);

    std::filesystem::path dir_;
    // write_mu_ serializes whole read-modify-write cycles; mu_ only guards
    // the published pointer so readers never wait on disk I/O
    std::mutex write_mu_;
    mutable std::mutex mu_;
    std::shared_ptr<const AdminState> current_;
    mutable std::shared_ptr<const policy::PolicyIndex> index_cache_;
    mutable std::uint64_t index_version_ = 0;
    mutable std::atomic<std::uint64_t> bad_password_count_{0};
};

}  // namespace guard::admin
