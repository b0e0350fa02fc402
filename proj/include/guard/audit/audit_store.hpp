#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "guard/result.hpp"
#include "guard/time_util.hpp"

namespace guard::audit {

struct KilledSessionRecord {
    std::uint64_t session_id = 0;
    std::string user;
    std::string statement;
    std::string reason;  // GUARD_OBJECT / DICTIONARY_VIEW / PROTECTED_OBJECT
    Timestamp killed_at{};
    bool operator==(const KilledSessionRecord&) const = default;
};

struct DdlLogRecord {
    std::uint64_t session_id = 0;
    std::string user;
    std::string statement;
    std::string verdict;  // ALLOW / KILL
    Timestamp logged_at{};
    bool operator==(const DdlLogRecord&) const = default;
};

// Append-only CSV files, one for kill records and one for the DDL trail.
// The on-disk bytes are the export format — export is a filtered copy, not
// a conversion. Every append is fsynced before the caller proceeds, so a
// record either survives a crash whole or not at all; a torn final line is
// cut off on open. Appends from concurrent sessions are serialized here.
class AuditStore {
public:
    static Result<std::unique_ptr<AuditStore>> open(const std::filesystem::path& dir);

    AuditStore(const AuditStore&) = delete;
    AuditStore& operator=(const AuditStore&) = delete;
    ~AuditStore();

    // fails with duplicate_session if the id was already recorded
    Result<void> record_killed(const KilledSessionRecord& rec);
    Result<void> record_ddl(const DdlLogRecord& rec);

    std::vector<KilledSessionRecord> killed() const;
    std::vector<DdlLogRecord> ddl_log() const;

    // highest session id seen in either file; session numbering resumes
    // above it so exports never collide across restarts
    std::uint64_t max_session_id() const;

    // header + rows with killed_at on a UTC date inside [from, to], both
    // ends inclusive, unset end = open; rows ordered by killed_at
    std::string export_killed(std::optional<Date> from, std::optional<Date> to) const;

    static const char* killed_header();
    static const char* ddl_header();

private:
    AuditStore() = default;

    std::filesystem::path dir_;
    mutable std::mutex mu_;
    int killed_fd_ = -1;
    int ddl_fd_ = -1;
    std::vector<KilledSessionRecord> killed_;
    std::unordered_set<std::uint64_t> killed_ids_;
    std::vector<DdlLogRecord> ddl_;
};

}  // namespace guard::audit
