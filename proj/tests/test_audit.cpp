#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "guard/audit/audit_store.hpp"
#include "guard/audit/csv.hpp"
#include "support/temp_dir.hpp"

using namespace guard;
using namespace guard::audit;
using guard::test::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void append_raw(const std::filesystem::path& p, std::string_view bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::app);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

KilledSessionRecord killed_rec(std::uint64_t id, std::string user, std::string stmt,
                               std::string reason, Timestamp at) {
    return {id, std::move(user), std::move(stmt), std::move(reason), at};
}

}  // namespace

TEST_CASE("csv escaping round-trips hostile fields") {
    const std::vector<std::string> fields = {
        "plain", "with,comma", "with \"quotes\"", "line\nbreak", "cr\rhere", "", "trailing "};
    const std::string line = csv_line(fields);
    const CsvParse parsed = parse_csv(line);
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.records[0] == fields);
    CHECK(parsed.consumed == line.size());

    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("csv parser stops at a torn tail") {
    const std::string whole = csv_line({"1", "a"}) + csv_line({"2", "b"});
    SUBCASE("line missing its newline") {
        const CsvParse p = parse_csv(whole + "3,half");
        CHECK(p.records.size() == 2);
        CHECK(p.consumed == whole.size());
    }
    SUBCASE("unbalanced quote spans to EOF") {
        const CsvParse p = parse_csv(whole + "3,\"chopped\n");
        CHECK(p.records.size() == 2);
        CHECK(p.consumed == whole.size());
    }
}

TEST_CASE("fresh store writes headers and starts empty") {
    TempDir td;
    auto store = AuditStore::open(td.path());
    REQUIRE(store.ok());
    CHECK(store.value()->killed().empty());
    CHECK(store.value()->ddl_log().empty());
    CHECK(store.value()->max_session_id() == 0);
    CHECK(slurp(td.path() / "killed_sessions.csv") ==
          std::string(AuditStore::killed_header()) + "\n");
    CHECK(slurp(td.path() / "ddl_log.csv") == std::string(AuditStore::ddl_header()) + "\n");
}

TEST_CASE("records survive a close and reopen byte-identical") {
    TempDir td;
    const Timestamp t1 = make_timestamp(2026, 5, 1, 9, 30, 0);
    const Timestamp t2 = make_timestamp(2026, 5, 2, 23, 59, 59);
    const KilledSessionRecord k1 =
        killed_rec(7, "SYS", "DROP PACKAGE hr.emp_actions;", "PROTECTED_OBJECT", t1);
    // statement with every character csv needs to defend against
    const KilledSessionRecord k2 =
        killed_rec(8, "SCOTT", "SELECT 'a,b'\n  FROM \"T\";\r\n", "DICTIONARY_VIEW", t2);
    const DdlLogRecord d1 = {7, "SYS", "DROP PACKAGE hr.emp_actions;", "KILL", t1};
    const DdlLogRecord d2 = {9, "HR", "CREATE TABLE t (x NUMBER);", "ALLOW", t2};

    {
        auto store = AuditStore::open(td.path());
        REQUIRE(store.ok());
        REQUIRE(store.value()->record_killed(k1).ok());
        REQUIRE(store.value()->record_killed(k2).ok());
        REQUIRE(store.value()->record_ddl(d1).ok());
        REQUIRE(store.value()->record_ddl(d2).ok());
    }
    auto store = AuditStore::open(td.path());
    REQUIRE(store.ok());
    const auto killed = store.value()->killed();
    REQUIRE(killed.size() == 2);
    CHECK(killed[0] == k1);
    CHECK(killed[1] == k2);
    const auto ddl = store.value()->ddl_log();
    REQUIRE(ddl.size() == 2);
    CHECK(ddl[0] == d1);
    CHECK(ddl[1] == d2);
    CHECK(store.value()->max_session_id() == 9);
}

TEST_CASE("appends hit the disk before the call returns") {
    TempDir td;
    auto store = AuditStore::open(td.path());
    REQUIRE(store.ok());
    const auto rec = killed_rec(1, "U", "DROP TABLE x;", "PROTECTED_OBJECT",
                                make_timestamp(2026, 1, 1));
    REQUIRE(store.value()->record_killed(rec).ok());
    // read the file out from under the still-open store
    const std::string on_disk = slurp(td.path() / "killed_sessions.csv");
    const CsvParse p = parse_csv(on_disk);
    REQUIRE(p.records.size() == 2);  // header + row
    CHECK(p.records[1][0] == "1");
    CHECK(p.records[1][2] == "DROP TABLE x;");
}

TEST_CASE("a session id can only be killed once, restarts included") {
    TempDir td;
    {
        auto store = AuditStore::open(td.path());
        REQUIRE(store.ok());
        const auto rec = killed_rec(3, "U", "s", "GUARD_OBJECT", make_timestamp(2026, 1, 1));
        REQUIRE(store.value()->record_killed(rec).ok());
        const auto again = store.value()->record_killed(rec);
        REQUIRE(!again.ok());
        CHECK(again.error().code == Errc::duplicate_session);
    }
    auto store = AuditStore::open(td.path());
    REQUIRE(store.ok());
    const auto rec = killed_rec(3, "U", "other", "GUARD_OBJECT", make_timestamp(2026, 1, 2));
    CHECK(store.value()->record_killed(rec).error().code == Errc::duplicate_session);
    // but the ddl trail is many-per-session
    REQUIRE(store.value()->record_ddl({3, "U", "a", "ALLOW", make_timestamp(2026, 1, 1)}).ok());
    REQUIRE(store.value()->record_ddl({3, "U", "b", "KILL", make_timestamp(2026, 1, 1)}).ok());
}

TEST_CASE("max session id spans both files") {
    TempDir td;
    auto store = AuditStore::open(td.path());
    REQUIRE(store.ok());
    REQUIRE(store.value()
                ->record_killed(killed_rec(4, "U", "s", "GUARD_OBJECT", make_timestamp(2026, 1, 1)))
                .ok());
    REQUIRE(store.value()->record_ddl({11, "U", "s", "ALLOW", make_timestamp(2026, 1, 1)}).ok());
    CHECK(store.value()->max_session_id() == 11);
}

TEST_CASE("torn tail is cut off on open and appends continue cleanly") {
    TempDir td;
    const auto rec = killed_rec(1, "U", "DROP TABLE x;", "PROTECTED_OBJECT",
                                make_timestamp(2026, 1, 1));
    {
        auto store = AuditStore::open(td.path());
        REQUIRE(store.ok());
        REQUIRE(store.value()->record_killed(rec).ok());
    }
    const auto file = td.path() / "killed_sessions.csv";
    const std::string intact = slurp(file);
    append_raw(file, "2,U,\"half a stat");  // interrupted mid-append

    auto store = AuditStore::open(td.path());
    REQUIRE(store.ok());
    REQUIRE(store.value()->killed().size() == 1);
    CHECK(store.value()->killed()[0] == rec);
    CHECK(slurp(file) == intact);  // repaired in place

    const auto rec2 = killed_rec(2, "U", "again", "GUARD_OBJECT", make_timestamp(2026, 1, 2));
    REQUIRE(store.value()->record_killed(rec2).ok());
    auto reread = AuditStore::open(td.path());
    REQUIRE(reread.ok());
    CHECK(reread.value()->killed().size() == 2);
}

TEST_CASE("a tampered header is refused, not repaired") {
    TempDir td;
    { REQUIRE(AuditStore::open(td.path()).ok()); }
    std::ofstream out(td.path() / "ddl_log.csv", std::ios::binary | std::ios::trunc);
    out << "who,what,when\n";
    out.close();
    auto store = AuditStore::open(td.path());
    REQUIRE(!store.ok());
    CHECK(store.error().code == Errc::corrupt_state);
}

TEST_CASE("a record that does not parse back is refused") {
    TempDir td;
    { REQUIRE(AuditStore::open(td.path()).ok()); }
    append_raw(td.path() / "killed_sessions.csv", "not_a_number,U,s,GUARD_OBJECT,bad_time\n");
    auto store = AuditStore::open(td.path());
    REQUIRE(!store.ok());
    CHECK(store.error().code == Errc::corrupt_state);
}

TEST_CASE("export filters by kill date, inclusive, and keeps time order") {
    TempDir td;
    auto opened = AuditStore::open(td.path());
    REQUIRE(opened.ok());
    AuditStore& store = *opened.value();
    const Timestamp d1 = make_timestamp(2026, 3, 1, 10, 0, 0);
    const Timestamp d2 = make_timestamp(2026, 3, 2, 0, 0, 0);
    const Timestamp d3 = make_timestamp(2026, 3, 3, 23, 59, 59);
    REQUIRE(store.record_killed(killed_rec(1, "A", "s1", "GUARD_OBJECT", d2)).ok());
    REQUIRE(store.record_killed(killed_rec(2, "B", "s2", "PROTECTED_OBJECT", d1)).ok());
    REQUIRE(store.record_killed(killed_rec(3, "C", "s3", "DICTIONARY_VIEW", d3)).ok());

    const auto rows_of = [](const std::string& csv) {
        CsvParse p = parse_csv(csv);
        REQUIRE(!p.records.empty());
        CHECK(csv_line(p.records[0]) == std::string(AuditStore::killed_header()) + "\n");
        p.records.erase(p.records.begin());
        return p.records;
    };

    SUBCASE("no filter exports everything, ordered by killed_at") {
        const auto rows = rows_of(store.export_killed({}, {}));
        REQUIRE(rows.size() == 3);
        CHECK(rows[0][0] == "2");
        CHECK(rows[1][0] == "1");
        CHECK(rows[2][0] == "3");
    }
    SUBCASE("both bounds inclusive") {
        const auto rows = rows_of(store.export_killed(make_date(2026, 3, 2), make_date(2026, 3, 3)));
        REQUIRE(rows.size() == 2);
        CHECK(rows[0][0] == "1");
        CHECK(rows[1][0] == "3");
    }
    SUBCASE("open-ended from") {
        CHECK(rows_of(store.export_killed(make_date(2026, 3, 3), {})).size() == 1);
    }
    SUBCASE("open-ended to") {
        CHECK(rows_of(store.export_killed({}, make_date(2026, 3, 1))).size() == 1);
    }
    SUBCASE("empty window") {
        CHECK(rows_of(store.export_killed(make_date(2027, 1, 1), {})).empty());
    }
}

TEST_CASE("unfiltered export equals the on-disk file") {
    TempDir td;
    auto opened = AuditStore::open(td.path());
    REQUIRE(opened.ok());
    AuditStore& store = *opened.value();
    REQUIRE(store
                .record_killed(killed_rec(1, "A", "line\nbreak,comma", "GUARD_OBJECT",
                                          make_timestamp(2026, 3, 1, 8, 0, 0)))
                .ok());
    REQUIRE(store
                .record_killed(killed_rec(2, "B", "plain", "PROTECTED_OBJECT",
                                          make_timestamp(2026, 3, 1, 9, 0, 0)))
                .ok());
    CHECK(store.export_killed({}, {}) == slurp(td.path() / "killed_sessions.csv"));
}
