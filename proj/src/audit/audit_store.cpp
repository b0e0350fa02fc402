#include "guard/audit/audit_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "guard/audit/csv.hpp"

namespace guard::audit {

namespace {

constexpr const char* kKilledFile = "killed_sessions.csv";
constexpr const char* kDdlFile = "ddl_log.csv";
constexpr const char* kKilledHeader = "session_id,user,statement,reason,killed_at";
constexpr const char* kDdlHeader = "session_id,user,statement,verdict,logged_at";

Result<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return make_error(Errc::storage_failure, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty()) {
        return false;
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) {
        return false;
    }
    out = v;
    return true;
}

// Opens for append, writing the header first if the file is new. Repairs a
// torn tail by truncating to the last complete record.
Result<int> open_log(const std::filesystem::path& path, const char* header,
                     CsvParse& parsed) {
    const bool existed = std::filesystem::exists(path);
    if (existed) {
        auto data = read_file(path);
        if (!data.ok()) {
            return data.error();
        }
        parsed = parse_csv(data.value());
        if (parsed.consumed < data.value().size()) {
            if (::truncate(path.c_str(), static_cast<off_t>(parsed.consumed)) != 0) {
                return make_error(Errc::storage_failure,
                                  "cannot repair torn tail of " + path.string());
            }
        }
        if (!parsed.records.empty()) {
            const std::string joined = csv_line(parsed.records.front());
            if (joined != std::string(header) + "\n") {
                return make_error(Errc::corrupt_state,
                                  path.string() + ": unexpected header line");
            }
            parsed.records.erase(parsed.records.begin());
        }
    }
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) {
        return make_error(Errc::storage_failure,
                          "cannot open " + path.string() + ": " + std::strerror(errno));
    }
    if (!existed || (parsed.records.empty() && parsed.consumed == 0)) {
        const std::string line = std::string(header) + "\n";
        if (::write(fd, line.data(), line.size()) != static_cast<ssize_t>(line.size()) ||
            ::fsync(fd) != 0) {
            ::close(fd);
            return make_error(Errc::storage_failure, "cannot initialize " + path.string());
        }
    }
    return fd;
}

Result<void> append_line(int fd, const std::string& line, const char* what) {
    std::size_t off = 0;
    while (off < line.size()) {
        const ssize_t n = ::write(fd, line.data() + off, line.size() - off);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            return make_error(Errc::storage_failure,
                              std::string("write failed for ") + what + ": " +
                                  std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        return make_error(Errc::storage_failure,
                          std::string("fsync failed for ") + what + ": " +
                              std::strerror(errno));
    }
    return {};
}

}  // namespace

const char* AuditStore::killed_header() { return kKilledHeader; }
const char* AuditStore::ddl_header() { return kDdlHeader; }

Result<std::unique_ptr<AuditStore>> AuditStore::open(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        return make_error(Errc::storage_failure, "cannot create " + dir.string());
    }

    std::unique_ptr<AuditStore> store_ptr(new AuditStore);
    AuditStore& store = *store_ptr;
    store.dir_ = dir;

    CsvParse killed_parsed;
    auto killed_fd = open_log(dir / kKilledFile, kKilledHeader, killed_parsed);
    if (!killed_fd.ok()) {
        return killed_fd.error();
    }
    store.killed_fd_ = killed_fd.value();
    for (const auto& rec : killed_parsed.records) {
        KilledSessionRecord k;
        auto ts = rec.size() == 5 ? parse_timestamp(rec[4]) : std::nullopt;
        if (rec.size() != 5 || !parse_u64(rec[0], k.session_id) || !ts) {
            return make_error(Errc::corrupt_state,
                              std::string(kKilledFile) + ": malformed record");
        }
        k.user = rec[1];
        k.statement = rec[2];
        k.reason = rec[3];
        k.killed_at = *ts;
        store.killed_ids_.insert(k.session_id);
        store.killed_.push_back(std::move(k));
    }

    CsvParse ddl_parsed;
    auto ddl_fd = open_log(dir / kDdlFile, kDdlHeader, ddl_parsed);
    if (!ddl_fd.ok()) {
        return ddl_fd.error();
    }
    store.ddl_fd_ = ddl_fd.value();
    for (const auto& rec : ddl_parsed.records) {
        DdlLogRecord d;
        auto ts = rec.size() == 5 ? parse_timestamp(rec[4]) : std::nullopt;
        if (rec.size() != 5 || !parse_u64(rec[0], d.session_id) || !ts) {
            return make_error(Errc::corrupt_state, std::string(kDdlFile) + ": malformed record");
        }
        d.user = rec[1];
        d.statement = rec[2];
        d.verdict = rec[3];
        d.logged_at = *ts;
        store.ddl_.push_back(std::move(d));
    }

    return store_ptr;
}

AuditStore::~AuditStore() {
    if (killed_fd_ >= 0) ::close(killed_fd_);
    if (ddl_fd_ >= 0) ::close(ddl_fd_);
}

Result<void> AuditStore::record_killed(const KilledSessionRecord& rec) {
    std::lock_guard lock(mu_);
    if (killed_ids_.contains(rec.session_id)) {
        return make_error(Errc::duplicate_session,
                          "session " + std::to_string(rec.session_id) + " already recorded");
    }
    const std::string line =
        csv_line({std::to_string(rec.session_id), rec.user, rec.statement, rec.reason,
                  format_timestamp(rec.killed_at)});
    if (auto r = append_line(killed_fd_, line, kKilledFile); !r.ok()) {
        return r;
    }
    killed_ids_.insert(rec.session_id);
    killed_.push_back(rec);
    return {};
}

Result<void> AuditStore::record_ddl(const DdlLogRecord& rec) {
    std::lock_guard lock(mu_);
    const std::string line =
        csv_line({std::to_string(rec.session_id), rec.user, rec.statement, rec.verdict,
                  format_timestamp(rec.logged_at)});
    if (auto r = append_line(ddl_fd_, line, kDdlFile); !r.ok()) {
        return r;
    }
    ddl_.push_back(rec);
    return {};
}

std::vector<KilledSessionRecord> AuditStore::killed() const {
    std::lock_guard lock(mu_);
    return killed_;
}

std::vector<DdlLogRecord> AuditStore::ddl_log() const {
    std::lock_guard lock(mu_);
    return ddl_;
}

std::uint64_t AuditStore::max_session_id() const {
    std::lock_guard lock(mu_);
    std::uint64_t max_id = 0;
    for (const auto& k : killed_) {
        max_id = std::max(max_id, k.session_id);
    }
    for (const auto& d : ddl_) {
        max_id = std::max(max_id, d.session_id);
    }
    return max_id;
}

std::string AuditStore::export_killed(std::optional<Date> from, std::optional<Date> to) const {
    std::lock_guard lock(mu_);
    std::vector<const KilledSessionRecord*> rows;
    rows.reserve(killed_.size());
    for (const auto& k : killed_) {
        const Date day = date_of(k.killed_at);
        if (from && day < *from) continue;
        if (to && day > *to) continue;
        rows.push_back(&k);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
        return a->killed_at < b->killed_at;
    });
    std::string out = std::string(kKilledHeader) + "\n";
    for (const auto* k : rows) {
        out += csv_line({std::to_string(k->session_id), k->user, k->statement, k->reason,
                         format_timestamp(k->killed_at)});
    }
    return out;
}

}  // namespace guard::audit
