#include "guard/admin/admin_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "guard/admin/password.hpp"
#include "guard/sql/classify.hpp"

namespace guard::admin {

namespace {

constexpr const char* kRegistryFile = "security_object.tsv";
constexpr const char* kGrantsFile = "user_permission.tsv";
constexpr const char* kConfigFile = "p_config.tsv";
constexpr std::string_view kDigestPrefix = "#sha256=";

std::string tsv_escape(std::string_view field) {
    std::string out;
    out.reserve(field.size());
    for (char c : field) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::optional<std::string> tsv_unescape(std::string_view field) {
    std::string out;
    out.reserve(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (field[i] != '\\') {
            out.push_back(field[i]);
            continue;
        }
        if (++i == field.size()) {
            return std::nullopt;
        }
        switch (field[i]) {
            case '\\': out.push_back('\\'); break;
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            default: return std::nullopt;
        }
    }
    return out;
}

std::string tsv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) {
            out.push_back('\t');
        }
        out += tsv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// body + "#sha256=<digest of body>\n", written to a temp file and renamed
// into place so a crash leaves either the old file or the new one
Result<void> write_state_file(const std::filesystem::path& path, const std::string& body) {
    std::string content = body;
    content.append(kDigestPrefix);
    content.append(sha256_hex(body));
    content.push_back('\n');

    const std::filesystem::path tmp = path.string() + ".tmp";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (fd < 0) {
        return make_error(Errc::storage_failure,
                          "cannot create " + tmp.string() + ": " + std::strerror(errno));
    }
    std::size_t off = 0;
    while (off < content.size()) {
        const ssize_t n = ::write(fd, content.data() + off, content.size() - off);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            ::close(fd);
            ::unlink(tmp.c_str());
            return make_error(Errc::storage_failure, "write failed for " + tmp.string());
        }
        off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
        ::unlink(tmp.c_str());
        return make_error(Errc::storage_failure, "fsync failed for " + tmp.string());
    }
    if (::rename(tmp.c_str(), path.c_str()) != 0) {
        ::unlink(tmp.c_str());
        return make_error(Errc::storage_failure, "rename failed for " + path.string());
    }
    const int dir_fd = ::open(path.parent_path().c_str(), O_RDONLY | O_DIRECTORY);
    if (dir_fd >= 0) {
        ::fsync(dir_fd);
        ::close(dir_fd);
    }
    return {};
}

// verifies the digest trailer and hands back the body
Result<std::string> read_state_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return make_error(Errc::storage_failure, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();

    if (content.empty() || content.back() != '\n') {
        return make_error(Errc::corrupt_state, path.string() + ": missing digest trailer");
    }
    content.pop_back();
    const std::size_t line_start = content.rfind('\n') + 1;  // 0 if single line
    const std::string_view last(content.data() + line_start, content.size() - line_start);
    if (!last.starts_with(kDigestPrefix)) {
        return make_error(Errc::corrupt_state, path.string() + ": missing digest trailer");
    }
    const std::string_view digest = last.substr(kDigestPrefix.size());
    const std::string body = content.substr(0, line_start);
    if (sha256_hex(body) != digest) {
        return make_error(Errc::corrupt_state, path.string() + ": digest mismatch");
    }
    return body;
}

Result<std::vector<std::vector<std::string>>> parse_rows(const std::filesystem::path& path,
                                                         const std::string& body,
                                                         std::size_t fields_expected) {
    std::vector<std::vector<std::string>> rows;
    for (std::string_view line : split(body, '\n')) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> row;
        for (std::string_view field : split(line, '\t')) {
            auto value = tsv_unescape(field);
            if (!value) {
                return make_error(Errc::corrupt_state, path.string() + ": bad field escape");
            }
            row.push_back(std::move(*value));
        }
        if (row.size() != fields_expected) {
            return make_error(Errc::corrupt_state, path.string() + ": wrong field count");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string opt_date_str(const std::optional<Date>& d) {
    return d ? format_date(*d) : "-";
}

std::string opt_hour_str(const std::optional<int>& h) {
    return h ? std::to_string(*h) : "-";
}

bool parse_opt_date(const std::string& s, std::optional<Date>& out) {
    if (s == "-") {
        out.reset();
        return true;
    }
    auto d = parse_date(s);
    if (!d) {
        return false;
    }
    out = *d;
    return true;
}

bool parse_opt_hour(const std::string& s, std::optional<int>& out) {
    if (s == "-") {
        out.reset();
        return true;
    }
    if (s.empty() || s.size() > 2 ||
        !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return false;
    }
    const int v = std::stoi(s);
    if (v < 0 || v > 23) {
        return false;
    }
    out = v;
    return true;
}

std::string registry_body(const AdminState& st) {
    std::string body;
    for (const auto& po : st.registry) {
        body += tsv_row({po.ref.owner, std::string(to_string(po.ref.type)), po.ref.name,
                         format_timestamp(po.added_at), po.guard_owned ? "1" : "0"});
    }
    return body;
}

std::string grants_body(const AdminState& st) {
    std::string body;
    for (const auto& g : st.grants) {
        body += tsv_row({g.grantee, g.object.owner, std::string(to_string(g.object.type)),
                         g.object.name, opt_date_str(g.start_date), opt_date_str(g.end_date),
                         opt_hour_str(g.start_hour), opt_hour_str(g.end_hour)});
    }
    return body;
}

std::string config_body(const AdminState& st) {
    std::string views;
    for (const auto& v : st.config.dictionary_views) {
        if (!views.empty()) {
            views.push_back(',');
        }
        views += v;
    }
    std::string body;
    body += tsv_row({"enabled", st.config.enabled ? "1" : "0"});
    body += tsv_row({"salt", st.config.password_salt});
    body += tsv_row({"digest", st.config.password_digest});
    body += tsv_row({"dictionary_views", views});
    body += tsv_row({"version", std::to_string(st.version)});
    return body;
}

Result<void> validate_object(const ObjectRef& ref) {
    if (ref.owner.empty() || ref.name.empty()) {
        return make_error(Errc::invalid_identifier, "owner and name are required");
    }
    if (ref.type == ObjectType::Unknown) {
        return make_error(Errc::invalid_type, "object type is required");
    }
    return {};
}

bool same_object(const ObjectRef& a, const ObjectRef& b) {
    return a.owner == b.owner && a.type == b.type && a.name == b.name;
}

Result<void> validate_grant_shape(const policy::Grant& g) {
    if (g.grantee.empty()) {
        return make_error(Errc::invalid_identifier, "grantee is required");
    }
    if (g.start_hour.has_value() != g.end_hour.has_value()) {
        return make_error(Errc::invalid_window, "start_hour and end_hour must be set together");
    }
    if (g.start_hour) {
        if (*g.start_hour < 0 || *g.start_hour > 23 || *g.end_hour < 0 || *g.end_hour > 23) {
            return make_error(Errc::invalid_window, "hours must be in 0..23");
        }
        if (*g.start_hour == *g.end_hour) {
            return make_error(Errc::invalid_window, "hour window cannot be empty");
        }
    }
    if (g.start_date && g.end_date && *g.end_date < *g.start_date) {
        return make_error(Errc::invalid_window, "end_date precedes start_date");
    }
    return {};
}

}  // namespace

Result<std::unique_ptr<AdminStore>> AdminStore::open(const std::filesystem::path& dir) {
    const auto registry_path = dir / kRegistryFile;
    const auto grants_path = dir / kGrantsFile;
    const auto config_path = dir / kConfigFile;
    if (!std::filesystem::exists(registry_path) || !std::filesystem::exists(grants_path) ||
        !std::filesystem::exists(config_path)) {
        return make_error(Errc::not_initialized, "state files missing in " + dir.string());
    }

    auto state = std::make_shared<AdminState>();

    auto config_file = read_state_file(config_path);
    if (!config_file.ok()) {
        return config_file.error();
    }
    auto config_rows = parse_rows(config_path, config_file.value(), 2);
    if (!config_rows.ok()) {
        return config_rows.error();
    }
    bool have_enabled = false, have_salt = false, have_digest = false, have_version = false,
         have_views = false;
    for (const auto& row : config_rows.value()) {
        const std::string& key = row[0];
        const std::string& value = row[1];
        if (key == "enabled" && (value == "0" || value == "1")) {
            state->config.enabled = value == "1";
            have_enabled = true;
        } else if (key == "salt") {
            state->config.password_salt = value;
            have_salt = true;
        } else if (key == "digest") {
            state->config.password_digest = value;
            have_digest = true;
        } else if (key == "dictionary_views") {
            for (std::string_view v : split(value, ',')) {
                if (!v.empty()) {
                    state->config.dictionary_views.insert(std::string(v));
                }
            }
            have_views = true;
        } else if (key == "version") {
            try {
                state->version = std::stoull(value);
            } catch (...) {
                return make_error(Errc::corrupt_state, config_path.string() + ": bad version");
            }
            have_version = true;
        } else {
            return make_error(Errc::corrupt_state,
                              config_path.string() + ": unknown key " + key);
        }
    }
    if (!have_enabled || !have_salt || !have_digest || !have_version || !have_views) {
        return make_error(Errc::corrupt_state, config_path.string() + ": missing keys");
    }

    auto registry_file = read_state_file(registry_path);
    if (!registry_file.ok()) {
        return registry_file.error();
    }
    auto registry_rows = parse_rows(registry_path, registry_file.value(), 5);
    if (!registry_rows.ok()) {
        return registry_rows.error();
    }
    for (const auto& row : registry_rows.value()) {
        policy::ProtectedObject po;
        po.ref.owner = row[0];
        const auto type = object_type_from(row[1]);
        const auto added = parse_timestamp(row[3]);
        if (!type || *type == ObjectType::Unknown || !added ||
            (row[4] != "0" && row[4] != "1")) {
            return make_error(Errc::corrupt_state,
                              registry_path.string() + ": malformed row");
        }
        po.ref.type = *type;
        po.ref.name = row[2];
        po.added_at = *added;
        po.guard_owned = row[4] == "1";
        state->registry.push_back(std::move(po));
    }
    for (const ObjectRef& g : policy::guard_objects()) {
        const bool seeded = std::any_of(
            state->registry.begin(), state->registry.end(),
            [&](const auto& po) { return same_object(po.ref, g) && po.guard_owned; });
        if (!seeded) {
            return make_error(Errc::corrupt_state,
                              registry_path.string() + ": control set incomplete");
        }
    }

    auto grants_file = read_state_file(grants_path);
    if (!grants_file.ok()) {
        return grants_file.error();
    }
    auto grant_rows = parse_rows(grants_path, grants_file.value(), 8);
    if (!grant_rows.ok()) {
        return grant_rows.error();
    }
    for (const auto& row : grant_rows.value()) {
        policy::Grant g;
        g.grantee = row[0];
        g.object.owner = row[1];
        const auto type = object_type_from(row[2]);
        if (!type || !parse_opt_date(row[4], g.start_date) ||
            !parse_opt_date(row[5], g.end_date) || !parse_opt_hour(row[6], g.start_hour) ||
            !parse_opt_hour(row[7], g.end_hour)) {
            return make_error(Errc::corrupt_state, grants_path.string() + ": malformed row");
        }
        g.object.type = *type;
        g.object.name = row[3];
        if (!validate_grant_shape(g).ok()) {
            return make_error(Errc::corrupt_state, grants_path.string() + ": malformed row");
        }
        // grants may reference removed objects: removal leaves them inert
        state->grants.push_back(std::move(g));
    }

    std::unique_ptr<AdminStore> store(new AdminStore);
    store->dir_ = dir;
    store->current_ = std::move(state);
    return store;
}

Result<std::unique_ptr<AdminStore>> AdminStore::initialize(const std::filesystem::path& dir,
                                                           std::string_view password) {
    if (password.size() < kMinPasswordLength) {
        return make_error(Errc::weak_password,
                          "password must be at least " + std::to_string(kMinPasswordLength) +
                              " characters");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        return make_error(Errc::storage_failure, "cannot create " + dir.string());
    }
    for (const char* name : {kRegistryFile, kGrantsFile, kConfigFile}) {
        if (std::filesystem::exists(dir / name)) {
            return make_error(Errc::already_initialized,
                              (dir / name).string() + " already exists");
        }
    }

    AdminState next;
    next.config.enabled = true;
    next.config.password_salt = random_hex(16);
    next.config.password_digest = password_digest(next.config.password_salt, password);
    next.config.dictionary_views = sql::default_dictionary_views();
    const Timestamp now = now_utc();
    for (const ObjectRef& g : policy::guard_objects()) {
        next.registry.push_back({g, now, true});
    }

    std::unique_ptr<AdminStore> store(new AdminStore);
    store->dir_ = dir;
    store->current_ = std::make_shared<AdminState>();
    if (auto r = store->commit(std::move(next)); !r.ok()) {
        return r.error();
    }
    return store;
}

std::shared_ptr<const AdminState> AdminStore::state() const {
    std::lock_guard lock(mu_);
    return current_;
}

std::shared_ptr<const policy::PolicyIndex> AdminStore::policy_index() const {
    std::lock_guard lock(mu_);
    if (!index_cache_ || index_version_ != current_->version) {
        index_cache_ =
            std::make_shared<policy::PolicyIndex>(current_->registry, current_->grants);
        index_version_ = current_->version;
    }
    return index_cache_;
}

Result<void> AdminStore::verify_password(std::string_view password) const {
    std::shared_ptr<const AdminState> st = state();
    if (!verify_digest(st->config.password_salt, st->config.password_digest, password)) {
        bad_password_count_.fetch_add(1);
        return make_error(Errc::bad_password, "password rejected");
    }
    return {};
}

// caller holds write_mu_; files are written before the pointer swap so a
// failed persist leaves the published state untouched
Result<void> AdminStore::commit(AdminState next) {
    next.version = next.version + 1;
    auto state = std::make_shared<AdminState>(std::move(next));
    if (auto r = write_state_file(dir_ / kRegistryFile, registry_body(*state)); !r.ok()) {
        return r;
    }
    if (auto r = write_state_file(dir_ / kGrantsFile, grants_body(*state)); !r.ok()) {
        return r;
    }
    if (auto r = write_state_file(dir_ / kConfigFile, config_body(*state)); !r.ok()) {
        return r;
    }
    std::lock_guard lock(mu_);
    current_ = std::move(state);
    return {};
}

Result<void> AdminStore::set_security(std::string_view password, bool enabled) {
    std::lock_guard op_lock(write_mu_);
    if (auto r = verify_password(password); !r.ok()) {
        return r;
    }
    AdminState next = *state();
    next.config.enabled = enabled;
    return commit(std::move(next));
}

Result<void> AdminStore::set_password(std::string_view old_password,
                                      std::string_view new_password) {
    std::lock_guard op_lock(write_mu_);
    if (auto r = verify_password(old_password); !r.ok()) {
        return r;
    }
    if (new_password.size() < kMinPasswordLength) {
        return make_error(Errc::weak_password,
                          "password must be at least " + std::to_string(kMinPasswordLength) +
                              " characters");
    }
    AdminState next = *state();
    next.config.password_salt = random_hex(16);
    next.config.password_digest = password_digest(next.config.password_salt, new_password);
    return commit(std::move(next));
}

Result<std::string> AdminStore::reset_password(const PasswordNotifier& notify) {
    std::lock_guard op_lock(write_mu_);
    const std::string password = generate_password();
    // deliver first: if the new password cannot reach the operator the old
    // one must keep working
    if (auto r = notify(password); !r.ok()) {
        return make_error(Errc::notify_failure,
                          "password not delivered: " + r.error().message);
    }
    AdminState next = *state();
    next.config.password_salt = random_hex(16);
    next.config.password_digest = password_digest(next.config.password_salt, password);
    if (auto r = commit(std::move(next)); !r.ok()) {
        return r.error();
    }
    return password;
}

Result<void> AdminStore::add_object(const ObjectRef& ref) {
    return add_objects({ref});
}

Result<void> AdminStore::add_objects(const std::vector<ObjectRef>& refs) {
    std::lock_guard op_lock(write_mu_);
    AdminState next = *state();
    const Timestamp now = now_utc();
    for (const ObjectRef& ref : refs) {
        if (auto r = validate_object(ref); !r.ok()) {
            return r;
        }
        const bool dup = std::any_of(next.registry.begin(), next.registry.end(),
                                     [&](const auto& po) { return same_object(po.ref, ref); });
        if (dup) {
            return make_error(Errc::duplicate_object, to_string(ref) + " is already protected");
        }
        next.registry.push_back({ref, now, false});
    }
    return commit(std::move(next));
}

Result<void> AdminStore::remove_object(const ObjectRef& ref) {
    std::lock_guard op_lock(write_mu_);
    AdminState next = *state();
    auto it = std::find_if(next.registry.begin(), next.registry.end(),
                           [&](const auto& po) { return same_object(po.ref, ref); });
    if (it == next.registry.end()) {
        return make_error(Errc::not_found, to_string(ref) + " is not protected");
    }
    if (it->guard_owned) {
        return make_error(Errc::guard_object_immutable,
                          to_string(ref) + " belongs to the guard and cannot be removed");
    }
    next.registry.erase(it);  // grants on it stay behind, inert
    return commit(std::move(next));
}

Result<void> AdminStore::grant_permission(const policy::Grant& grant) {
    return grant_many({grant});
}

Result<void> AdminStore::grant_many(const std::vector<policy::Grant>& grants) {
    std::lock_guard op_lock(write_mu_);
    AdminState next = *state();
    for (const policy::Grant& grant : grants) {
        if (auto r = validate_grant_shape(grant); !r.ok()) {
            return r;
        }
        const bool known =
            std::any_of(next.registry.begin(), next.registry.end(),
                        [&](const auto& po) { return same_object(po.ref, grant.object); });
        if (!known) {
            return make_error(Errc::object_not_protected,
                              to_string(grant.object) + " is not protected");
        }
        const bool dup = std::any_of(next.grants.begin(), next.grants.end(), [&](const auto& g) {
            return g.grantee == grant.grantee && same_object(g.object, grant.object);
        });
        if (dup) {
            return make_error(Errc::duplicate_grant,
                              grant.grantee + " already holds a grant on " +
                                  to_string(grant.object));
        }
        next.grants.push_back(grant);
    }
    return commit(std::move(next));
}

PasswordNotifier outbox_notifier(std::filesystem::path outbox_dir, std::string recipient) {
    return [outbox_dir = std::move(outbox_dir),
            recipient = std::move(recipient)](std::string_view password) -> Result<void> {
        std::error_code ec;
        std::filesystem::create_directories(outbox_dir, ec);
        if (ec) {
            return make_error(Errc::storage_failure, "cannot create " + outbox_dir.string());
        }
        const Timestamp issued = now_utc();
        static std::atomic<std::uint64_t> seq{0};
        const std::filesystem::path path =
            outbox_dir / ("reset-" + std::to_string(issued.time_since_epoch().count()) + "-" +
                          std::to_string(seq.fetch_add(1)) + ".txt");
        std::string body;
        body += "recipient: " + recipient + "\n";
        body += "password: " + std::string(password) + "\n";
        body += "issued_at: " + format_timestamp(issued) + "\n";

        const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0600);
        if (fd < 0) {
            return make_error(Errc::storage_failure, "cannot create " + path.string());
        }
        std::size_t off = 0;
        while (off < body.size()) {
            const ssize_t n = ::write(fd, body.data() + off, body.size() - off);
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                ::close(fd);
                return make_error(Errc::storage_failure, "write failed for " + path.string());
            }
            off += static_cast<std::size_t>(n);
        }
        const bool synced = ::fsync(fd) == 0;
        ::close(fd);
        if (!synced) {
            return make_error(Errc::storage_failure, "fsync failed for " + path.string());
        }
        return {};
    };
}

Result<void> AdminStore::revoke_permission(std::string_view grantee, const ObjectRef& object) {
    std::lock_guard op_lock(write_mu_);
    AdminState next = *state();
    const std::size_t before = next.grants.size();
    std::erase_if(next.grants, [&](const auto& g) {
        return g.grantee == grantee && same_object(g.object, object);
    });
    if (next.grants.size() == before) {
        return make_error(Errc::grant_not_found,
                          std::string(grantee) + " holds no grant on " + to_string(object));
    }
    return commit(std::move(next));
}

}  // namespace guard::admin
