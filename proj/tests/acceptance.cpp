// Acceptance gate. Each numbered criterion runs end to end against a fresh
// server or store and prints exactly one PASS/FAIL line; the exit status is
// the number of failures. No test framework on purpose — this is the release
// checklist, meant to be read top to bottom.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "guard/admin/admin_store.hpp"
#include "guard/audit/audit_store.hpp"
#include "guard/db/catalog.hpp"
#include "guard/net/client.hpp"
#include "guard/net/config.hpp"
#include "guard/net/server.hpp"
#include "guard/policy/engine.hpp"
#include "guard/policy/model.hpp"
#include "guard/sql/classify.hpp"
#include "guard/time_util.hpp"
#include "guard/wraptool/wrap.hpp"
#include "support/corpus.hpp"
#include "support/naive_oracle.hpp"
#include "support/process.hpp"
#include "support/temp_dir.hpp"

namespace {

using guard::ObjectRef;
using guard::ObjectType;
using guard::Timestamp;
using guard::net::SqlClient;
using guard::net::StatementReply;

constexpr const char* kPw = "acceptance-pass-1";

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void ensure(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

template <typename T>
T take(guard::Result<T> r, const std::string& what) {
    if (!r.ok()) throw Failure(what + ": " + r.error().message);
    return std::move(r).value();
}

void must(const guard::Result<void>& r, const std::string& what) {
    if (!r.ok()) throw Failure(what + ": " + r.error().message);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Failure("cannot write " + p.string());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// In-process proxy over a freshly initialized state directory; three users,
// SYS being the resident DBA adversary.
struct World {
    guard::test::TempDir td{"accept"};
    std::filesystem::path pwfile;
    std::unique_ptr<guard::net::Server> server;

    World() {
        (void)take(guard::admin::AdminStore::initialize(td / "state", kPw), "initialize");
        write_file(td / "users.tsv", "sys\t1\tsys\nscott\t0\tscott\nhr\t0\thr\n");
        pwfile = td / "pw.txt";
        write_file(pwfile, std::string(kPw) + "\n");
        guard::net::ServerConfig cfg;
        cfg.state_dir = td / "state";
        cfg.users_file = td / "users.tsv";
        server = take(guard::net::Server::start(cfg), "server start");
    }

    SqlClient sql(const std::string& user) {
        return take(SqlClient::connect("127.0.0.1", server->data_port(), user),
                    "connect " + user);
    }

    guard::net::AdminClient admin() {
        return take(guard::net::AdminClient::connect("127.0.0.1", server->admin_port(), kPw),
                    "admin connect");
    }

    void control(guard::net::AdminClient& a, const std::string& cmd,
                 const std::string& want) {
        const std::string got = take(a.command(cmd), cmd);
        ensure(got == want, cmd + " -> \"" + got + "\", want \"" + want + "\"");
    }
};

StatementReply run_stmt(SqlClient& c, const std::string& stmt) {
    return take(c.exec(stmt), "exec " + stmt);
}

const char* kEmpActionsInstallSource = "PACKAGE emp_actions AS\n"
                                       "    PROCEDURE raise_salary (emp_id NUMBER,\n"
                                       "                            amount NUMBER);\n"
                                       "    PROCEDURE fire_employee (emp_id NUMBER);\n"
                                       "END emp_actions;\n";

// 1. A protected package plus a DBA session trying to drop it: the session
//    dies with PROTECTED_OBJECT, exactly one kill record lands, and the
//    catalog keeps the package.
void criterion_kill_path() {
    World w;
    w.server->catalog().install({{"HR", ObjectType::Package, "EMP_ACTIONS"},
                                 kEmpActionsInstallSource, false, {}});
    const auto before = w.server->catalog().objects();
    {
        auto a = w.admin();
        w.control(a, "ADD_OBJECT HR PACKAGE EMP_ACTIONS", "OK added");
    }

    auto sys = w.sql("sys");
    const std::uint64_t sid = sys.session_id();
    const std::string stmt = "DROP PACKAGE hr.emp_actions;";
    const auto reply = run_stmt(sys, stmt);
    ensure(reply.kind == StatementReply::Kind::Kill, "expected a KILL reply");
    ensure(reply.message == "PROTECTED_OBJECT", "kill reason was " + reply.message);
    ensure(sys.closed(), "client should treat the session as closed");
    ensure(!sys.exec("SELECT 1 FROM dual;").ok(), "connection stayed usable after the kill");

    const auto killed = w.server->audit().killed();
    ensure(killed.size() == 1, "killed_sessions rows: " + std::to_string(killed.size()));
    ensure(killed[0].session_id == sid, "kill recorded against the wrong session");
    ensure(killed[0].user == "SYS" && killed[0].statement == stmt &&
               killed[0].reason == "PROTECTED_OBJECT",
           "kill record fields are wrong");
    ensure(w.server->catalog().objects() == before, "the drop reached the catalog");
}

// 2. Granting SCOTT turns the same statement into an allowed, executed,
//    ALLOW-audited drop.
void criterion_grant_path() {
    World w;
    w.server->catalog().install({{"HR", ObjectType::Package, "EMP_ACTIONS"},
                                 kEmpActionsInstallSource, false, {}});
    auto a = w.admin();
    w.control(a, "ADD_OBJECT HR PACKAGE EMP_ACTIONS", "OK added");
    w.control(a, "GRANT SCOTT HR PACKAGE EMP_ACTIONS", "OK granted");

    auto scott = w.sql("scott");
    const std::string stmt = "DROP PACKAGE hr.emp_actions;";
    const auto reply = run_stmt(scott, stmt);
    ensure(reply.kind == StatementReply::Kind::Ok, "grantee's drop should come back OK");
    ensure(run_stmt(scott, "COMMIT;").kind == StatementReply::Kind::Ok,
           "session should stay open after an allowed statement");
    ensure(!w.server->catalog().find({"HR", ObjectType::Package, "EMP_ACTIONS"}).has_value(),
           "the drop never reached the catalog");

    const auto ddl = w.server->audit().ddl_log();
    ensure(ddl.size() == 1, "ddl_log rows: " + std::to_string(ddl.size()));
    ensure(ddl[0].user == "SCOTT" && ddl[0].statement == stmt && ddl[0].verdict == "ALLOW",
           "ddl_log row fields are wrong");
    ensure(w.server->audit().killed().empty(), "nothing should have been killed");
}

// 3. The guard's own objects stay lethal while enforcement is switched off,
//    and the admin surface refuses to unprotect them.
void criterion_self_protection() {
    World w;
    auto a = w.admin();
    w.control(a, "ADD_OBJECT HR TABLE EMP", "OK added");
    w.control(a, "SET_SECURITY off", "OK security=off");

    {
        // prove the passthrough is real before relying on it
        auto sys = w.sql("sys");
        const auto allowed = run_stmt(sys, "DROP TABLE hr.emp;");
        ensure(allowed.kind != StatementReply::Kind::Kill,
               "disabled mode still enforced the registry");
    }
    for (const char* user : {"sys", "scott"}) {
        auto c = w.sql(user);
        const auto reply = run_stmt(c, "DROP TABLE guard.ddl_log;");
        ensure(reply.kind == StatementReply::Kind::Kill && reply.message == "GUARD_OBJECT",
               std::string(user) + ": dropping guard.ddl_log must kill even when disabled");
    }

    const guard::test::RunResult res = guard::test::run_process(
        {GUARDCTL_BIN, "--port", std::to_string(w.server->admin_port()), "--password-file",
         w.pwfile.string(), "remove-object", "GUARD", "TABLE", "P_CONFIG"});
    ensure(res.exit_code == 1,
           "guardctl remove-object on a guard table exited " + std::to_string(res.exit_code));
    ensure((res.out + res.err).find("guard_object_immutable") != std::string::npos,
           "guardctl reply did not name guard_object_immutable: " + res.out + res.err);
}

// 4. Dictionary views kill the ungranted; a fully granted user sees only the
//    obfuscated text of a package installed through create_wrapped.
void criterion_dictionary_shield() {
    World w;
    (void)take(guard::wraptool::create_wrapped(w.server->catalog(),
                                               guard::test::kEmpActionsSpec, "HR"),
               "create_wrapped");
    auto a = w.admin();
    w.control(a, "ADD_OBJECT HR PACKAGE EMP_ACTIONS", "OK added");

    const std::string probe = "SELECT text FROM USER_SOURCE WHERE name = 'EMP_ACTIONS';";
    {
        auto scott = w.sql("scott");
        const auto reply = run_stmt(scott, probe);
        ensure(reply.kind == StatementReply::Kind::Kill && reply.message == "DICTIONARY_VIEW",
               "ungranted dictionary probe survived");
    }

    for (const char* grant : {"GRANT HR GUARD TABLE SECURITY_OBJECT",
                              "GRANT HR GUARD TABLE USER_PERMISSION",
                              "GRANT HR GUARD TABLE P_CONFIG",
                              "GRANT HR GUARD TABLE KILLED_SESSIONS",
                              "GRANT HR GUARD TABLE DDL_LOG",
                              "GRANT HR GUARD PACKAGE GUARD_PKG",
                              "GRANT HR HR PACKAGE EMP_ACTIONS"}) {
        w.control(a, grant, "OK granted");
    }

    auto hr = w.sql("hr");
    const auto reply = run_stmt(hr, probe);
    ensure(reply.kind == StatementReply::Kind::Rows, "granted probe should return rows");
    ensure(!reply.rows.empty() && reply.rows[0].size() == 4, "source row shape is wrong");
    ensure(reply.rows[0][3] == "PACKAGE EMP_ACTIONS WRAPPED",
           "first text line was \"" + reply.rows[0][3] + "\"");
    for (const auto& row : reply.rows) {
        ensure(row[3].find("raise_salary") == std::string::npos,
               "dictionary leaked plain source: " + row[3]);
    }
}

// 5. wrap/unwrap is a byte-exact involution over the fixture corpus and a
//    pile of generated units; triggers and anonymous blocks refuse.
void criterion_wrap_round_trip() {
    using guard::wraptool::looks_wrapped;
    using guard::wraptool::unwrap_unit;
    using guard::wraptool::wrap_unit;

    for (const char* src : {guard::test::kEmpActionsSpec, guard::test::kEmpActionsBody,
                            "procedure p as begin null; end;",
                            "CREATE OR REPLACE FUNCTION f RETURN NUMBER AS BEGIN RETURN 42; "
                            "END;"}) {
        const auto wrapped = take(wrap_unit(src), "wrap fixture");
        const std::string text = wrapped.to_text();
        ensure(looks_wrapped(text), "wrapped output not recognized as wrapped");
        ensure(take(unwrap_unit(text), "unwrap fixture") == src,
               "fixture did not round trip byte for byte");
    }

    auto trig = wrap_unit(guard::test::kTriggerUnit);
    ensure(!trig.ok() && trig.error().code == guard::Errc::trigger_not_wrappable,
           "a trigger must refuse to wrap");
    for (const char* block :
         {guard::test::kBlockStructureListing, guard::test::kCreateWrappedBlock}) {
        auto r = wrap_unit(block);
        ensure(!r.ok() && r.error().code == guard::Errc::anonymous_block_not_wrappable,
               "an anonymous block must refuse to wrap");
    }
    for (const char* other : {guard::test::kWrapSyntaxListing, guard::test::kCallListing,
                              guard::test::kDictionaryQueryListing}) {
        ensure(!wrap_unit(other).ok(), "a non-unit wrapped without complaint");
    }
    ensure(looks_wrapped(guard::test::kWrappedOutputListing),
           "the canonical wrapped sample is not recognized");

    std::mt19937 rng(77);
    int rounds = 0;
    for (int i = 0; i < 120; ++i) {
        const std::string src = guard::test::generate_unit(rng, i);
        const auto wrapped = take(wrap_unit(src), "wrap generated unit");
        ensure(take(unwrap_unit(wrapped.to_text()), "unwrap generated unit") == src,
               "generated unit " + std::to_string(i) + " did not round trip");
        ++rounds;
    }
    ensure(rounds >= 100, "property run too small: " + std::to_string(rounds));
}

std::string workload_statement(int tpl, int i) {
    const std::string n = std::to_string(i);
    switch (tpl) {
        case 0: return "CREATE TABLE scott.w" + n + " (x NUMBER);";
        case 1: return "DROP PACKAGE hr.emp_actions /* s" + n + " */;";
        case 2: return "ALTER TABLE hr.emp ADD (c" + n + " NUMBER);";
        case 3: return "ALTER TABLE guard.p_config ADD (x" + n + " NUMBER);";
        case 4: return "TRUNCATE TABLE pay.scratch_" + n + ";";
        case 5: return "INSERT INTO hr.emp VALUES (" + n + ");";
        case 6: return "DELETE FROM guard.killed_sessions WHERE id = " + n + ";";
        case 7: return "UPDATE free.notes SET x = " + n + ";";
        case 8: return "SELECT text FROM user_source /* s" + n + " */;";
        case 9: return "SELECT * FROM hr.emp WHERE id = " + n + ";";
        case 10: return "COMMIT /* s" + n + " */;";
        default: return "BEGIN NULL; END; /* b" + n + " */";
    }
}

// 6. 1,000 mixed statements from three users: ddl_log ends up with exactly
//    one row per DDL statement, verdicts agreeing with the naive oracle, and
//    the kill ledger matches the observed kills.
void criterion_ddl_log_completeness() {
    World w;
    {
        auto a = w.admin();
        w.control(a, "ADD_OBJECT HR TABLE EMP", "OK added");
        w.control(a, "ADD_OBJECT HR PACKAGE EMP_ACTIONS", "OK added");
        w.control(a, "ADD_OBJECT PAY PROCEDURE RUN_CYCLE", "OK added");
        w.control(a, "GRANT SCOTT HR TABLE EMP", "OK granted");
        w.control(a, "GRANT HR HR PACKAGE EMP_ACTIONS", "OK granted");
    }

    // mirror of the server's policy inputs, fed to the oracle
    std::vector<guard::policy::ProtectedObject> registry;
    for (const ObjectRef& r : guard::policy::guard_objects()) registry.push_back({r, {}, true});
    registry.push_back({{"HR", ObjectType::Table, "EMP"}, {}, false});
    registry.push_back({{"HR", ObjectType::Package, "EMP_ACTIONS"}, {}, false});
    registry.push_back({{"PAY", ObjectType::Procedure, "RUN_CYCLE"}, {}, false});
    const std::vector<guard::policy::Grant> grants = {
        {"SCOTT", {"HR", ObjectType::Table, "EMP"}, {}, {}, {}, {}},
        {"HR", {"HR", ObjectType::Package, "EMP_ACTIONS"}, {}, {}, {}, {}},
    };

    struct DdlExpect {
        std::string user, stmt, verdict;
    };
    struct KillExpect {
        std::string user, stmt, reason;
    };
    std::vector<DdlExpect> want_ddl;
    std::vector<KillExpect> want_kills;
    std::set<std::string> raws;

    const std::array<std::string, 3> users = {"SYS", "SCOTT", "HR"};
    std::map<std::string, std::optional<SqlClient>> clients;

    std::mt19937 rng(4242);
    for (int i = 0; i < 1000; ++i) {
        const std::string& user = users[rng() % users.size()];
        const std::string stmt = workload_statement(static_cast<int>(rng() % 12), i);
        ensure(raws.insert(stmt).second, "workload generated a duplicate statement");

        const auto ps = guard::sql::classify(stmt, user);
        ensure(!ps.error.has_value(), "workload statement failed to classify: " + stmt);
        guard::test::OracleStatement os;
        os.is_ddl = ps.cls == guard::sql::StatementClass::Ddl;
        os.is_dml = ps.cls == guard::sql::StatementClass::Dml;
        os.targets = ps.targets;
        os.dictionary_refs = ps.dictionary_refs;
        const auto want =
            guard::test::naive_decide(os, user, guard::now_utc(), true, registry, grants);

        auto& slot = clients[user];
        if (!slot.has_value()) slot.emplace(w.sql(user));
        const auto reply = run_stmt(*slot, stmt);

        if (want.verdict == guard::policy::Verdict::Kill) {
            ensure(reply.kind == StatementReply::Kind::Kill,
                   user + " should have been killed for: " + stmt);
            ensure(reply.message == std::string(guard::policy::to_string(want.reason)),
                   "kill reason for \"" + stmt + "\" was " + reply.message);
            want_kills.push_back({user, stmt, reply.message});
            slot.reset();  // the server hung up; reconnect on next use
        } else {
            ensure(reply.kind != StatementReply::Kind::Kill,
                   user + " was killed unexpectedly for: " + stmt);
        }
        if (os.is_ddl) {
            want_ddl.push_back(
                {user, stmt,
                 want.verdict == guard::policy::Verdict::Kill ? "KILL" : "ALLOW"});
        }
    }

    const auto log = w.server->audit().ddl_log();
    ensure(log.size() == want_ddl.size(),
           "ddl_log has " + std::to_string(log.size()) + " rows, workload issued " +
               std::to_string(want_ddl.size()) + " DDL statements");
    std::map<std::string, const guard::audit::DdlLogRecord*> ddl_by_stmt;
    for (const auto& rec : log) {
        ensure(ddl_by_stmt.emplace(rec.statement, &rec).second,
               "statement logged twice: " + rec.statement);
    }
    for (const auto& e : want_ddl) {
        const auto it = ddl_by_stmt.find(e.stmt);
        ensure(it != ddl_by_stmt.end(), "ddl_log is missing: " + e.stmt);
        ensure(it->second->user == e.user && it->second->verdict == e.verdict,
               "ddl_log row disagrees with the oracle for: " + e.stmt);
    }

    const auto killed = w.server->audit().killed();
    ensure(killed.size() == want_kills.size(),
           "killed_sessions has " + std::to_string(killed.size()) + " rows, observed " +
               std::to_string(want_kills.size()) + " kills");
    std::map<std::string, const guard::audit::KilledSessionRecord*> kill_by_stmt;
    for (const auto& rec : killed) {
        ensure(kill_by_stmt.emplace(rec.statement, &rec).second,
               "kill recorded twice: " + rec.statement);
    }
    for (const auto& e : want_kills) {
        const auto it = kill_by_stmt.find(e.stmt);
        ensure(it != kill_by_stmt.end(), "killed_sessions is missing: " + e.stmt);
        ensure(it->second->user == e.user && it->second->reason == e.reason,
               "kill row disagrees with the observed kill for: " + e.stmt);
    }
}

// 7. The engine against the naive oracle over the full combinatorial grid,
//    then both hour-window shapes brute forced around the clock.
void criterion_decision_oracle() {
    const Timestamp now = guard::now_utc();
    const std::array<std::string, 3> users = {"SYS", "SCOTT", "HR"};
    const std::array<ObjectRef, 4> objects = {{
        {"HR", ObjectType::Package, "EMP_ACTIONS"},
        {"HR", ObjectType::Table, "EMP"},
        {"PAY", ObjectType::Procedure, "RUN_CYCLE"},
        {"APP", ObjectType::View, "V_ORDERS"},
    }};
    struct VerbCase {
        const char* verb;
        guard::sql::StatementClass cls;
    };
    const std::array<VerbCase, 6> verbs = {{
        {"CREATE", guard::sql::StatementClass::Ddl},
        {"DROP", guard::sql::StatementClass::Ddl},
        {"UPDATE", guard::sql::StatementClass::Dml},
        {"DELETE", guard::sql::StatementClass::Dml},
        {"SELECT", guard::sql::StatementClass::Query},
        {"COMMIT", guard::sql::StatementClass::SessionCtrl},
    }};

    std::vector<guard::policy::ProtectedObject> registry;
    for (const ObjectRef& o : objects) registry.push_back({o, {}, false});

    int combos = 0;
    for (const std::string& user : users) {
        for (const ObjectRef& obj : objects) {
            for (const bool granted : {false, true}) {
                std::vector<guard::policy::Grant> grants;
                if (granted) grants.push_back({user, obj, {}, {}, {}, {}});
                const guard::policy::PolicyIndex index(registry, grants);
                for (const bool enabled : {false, true}) {
                    for (const VerbCase& vc : verbs) {
                        for (const bool guard_target : {false, true}) {
                            const ObjectRef target =
                                guard_target
                                    ? ObjectRef{"GUARD", ObjectType::Unknown, "DDL_LOG"}
                                    : obj;
                            guard::sql::ParsedStatement ps;
                            ps.raw = std::string(vc.verb) + " probe";
                            ps.verb = vc.verb;
                            ps.cls = vc.cls;
                            ps.targets = {target};
                            const auto got =
                                guard::policy::decide(ps, user, now, enabled, index);

                            guard::test::OracleStatement os;
                            os.is_ddl = vc.cls == guard::sql::StatementClass::Ddl;
                            os.is_dml = vc.cls == guard::sql::StatementClass::Dml;
                            os.targets = {target};
                            const auto want = guard::test::naive_decide(os, user, now, enabled,
                                                                        registry, grants);
                            ensure(got == want,
                                   "disagreement: user=" + user + " object=" +
                                       guard::to_string(obj) + " granted=" +
                                       (granted ? "y" : "n") + " enabled=" +
                                       (enabled ? "y" : "n") + " verb=" + vc.verb +
                                       " guard_target=" + (guard_target ? "y" : "n"));
                            ++combos;
                        }
                    }
                }
            }
        }
    }
    ensure(combos == 3 * 4 * 2 * 2 * 6 * 2,
           "grid size was " + std::to_string(combos) + ", want 576");

    for (const auto& window : std::vector<std::pair<int, int>>{{9, 17}, {22, 6}}) {
        const int s = window.first;
        const int e = window.second;
        guard::policy::Grant g{"SCOTT", objects[1], {}, {}, s, e};
        for (int h = 0; h < 24; ++h) {
            const Timestamp at = guard::make_timestamp(2026, 3, 10, h, 29, 5);
            const bool open = guard::policy::is_grant_active(g, at);
            const bool expected = s < e ? (h >= s && h < e) : (h >= s || h < e);
            const std::string tag = "window (" + std::to_string(s) + "," +
                                    std::to_string(e) + ") hour " + std::to_string(h);
            ensure(open == expected, tag + ": engine disagrees with the closed form");
            ensure(open == guard::test::naive_grant_active(g, at),
                   tag + ": engine disagrees with the oracle");
        }
    }
}

// 8. 10,000 protected objects and 1,000 grants: median decide() stays at or
//    under a millisecond, and the enabled proxy keeps >= 90% of the
//    disabled proxy's loopback throughput over 10,000 statements.
void criterion_performance() {
    guard::test::TempDir td{"accept-perf"};
    auto store = take(guard::admin::AdminStore::initialize(td / "state", kPw), "initialize");

    std::vector<ObjectRef> refs;
    refs.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        refs.push_back(
            {"S" + std::to_string(i % 97), ObjectType::Table, "OBJ_" + std::to_string(i)});
    }
    must(store->add_objects(refs), "add_objects");
    std::vector<guard::policy::Grant> grants;
    grants.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
        // 9973 is coprime to 10000, so every granted object is distinct
        grants.push_back(
            {"U" + std::to_string(i % 50), refs[(i * 9973) % 10000], {}, {}, {}, {}});
    }
    must(store->grant_many(grants), "grant_many");
    {
        const auto snap = store->state();
        ensure(snap->registry.size() == 10000 + guard::policy::guard_objects().size(),
               "registry row count is off");
        ensure(snap->grants.size() == 1000, "grant row count is off");
    }

    const auto index = store->policy_index();
    const Timestamp now = guard::now_utc();
    std::mt19937 rng(918273);
    std::vector<guard::sql::ParsedStatement> pool;
    std::vector<std::string> pool_user;
    pool.reserve(1000);
    for (int k = 0; k < 1000; ++k) {
        guard::sql::ParsedStatement ps;
        const ObjectRef& target = refs[rng() % refs.size()];
        switch (k % 4) {
            case 0:
                ps.cls = guard::sql::StatementClass::Ddl;
                ps.verb = "DROP";
                ps.targets = {target};
                break;
            case 1:
                ps.cls = guard::sql::StatementClass::Dml;
                ps.verb = "INSERT";
                ps.targets = {{target.owner, ObjectType::Unknown, target.name}};
                break;
            case 2:
                ps.cls = guard::sql::StatementClass::Query;
                ps.verb = "SELECT";
                ps.dictionary_refs = {"USER_SOURCE"};
                break;
            default:
                ps.cls = guard::sql::StatementClass::Ddl;
                ps.verb = "DROP";
                ps.targets = {{"FREE", ObjectType::Table, "NADA_" + std::to_string(k)}};
                break;
        }
        ps.raw = "probe " + std::to_string(k);
        pool.push_back(std::move(ps));
        pool_user.push_back("U" + std::to_string(k % 50));
    }

    std::vector<long long> ns(pool.size());
    int allowed = 0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto d = guard::policy::decide(pool[k], pool_user[k], now, true, *index);
        const auto t1 = std::chrono::steady_clock::now();
        ns[k] = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        if (d.verdict == guard::policy::Verdict::Allow) ++allowed;
    }
    std::nth_element(ns.begin(), ns.begin() + ns.size() / 2, ns.end());
    const long long median = ns[ns.size() / 2];
    ensure(median <= 1'000'000,
           "median decide() latency " + std::to_string(median) + " ns exceeds 1 ms");
    ensure(allowed > 0 && allowed < static_cast<int>(pool.size()),
           "latency pool should mix verdicts");
    store.reset();  // hand the state directory over to the server

    write_file(td / "users.tsv", "scott\t0\tscott\n");
    guard::net::ServerConfig cfg;
    cfg.state_dir = td / "state";
    cfg.users_file = td / "users.tsv";
    auto server = take(guard::net::Server::start(cfg), "server start");

    std::vector<std::string> stmts;
    stmts.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        stmts.push_back(i % 2 == 0
                            ? "SELECT x FROM q.t" + std::to_string(i % 7) + " WHERE k = 1;"
                            : "UPDATE q.n SET a = " + std::to_string(i % 5) + ";");
    }
    const auto run_all = [&]() {
        auto c = take(SqlClient::connect("127.0.0.1", server->data_port(), "scott"),
                      "throughput connect");
        const auto t0 = std::chrono::steady_clock::now();
        for (const std::string& s : stmts) {
            const auto r = take(c.exec(s), "throughput exec");
            if (r.kind == StatementReply::Kind::Kill) {
                throw Failure("throughput statement killed: " + s);
            }
        }
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(t1 - t0).count();
    };

    const auto set_mode = [&](bool on) {
        auto a = take(guard::net::AdminClient::connect("127.0.0.1", server->admin_port(), kPw),
                      "admin connect");
        const std::string want = on ? "OK security=on" : "OK security=off";
        const std::string got =
            take(a.command(on ? "SET_SECURITY on" : "SET_SECURITY off"), "SET_SECURITY");
        ensure(got == want, "SET_SECURITY -> " + got);
    };

    // Interleave the modes so clock-speed drift and cache warm-up land on
    // both sides equally; a one-sided ordering charges the whole ramp-up to
    // whichever mode happens to run first.
    (void)run_all();  // warm up sockets and allocator
    double enabled_s = 1e9;
    double disabled_s = 1e9;
    for (int round = 0; round < 4; ++round) {
        set_mode(true);
        enabled_s = std::min(enabled_s, run_all());
        set_mode(false);
        disabled_s = std::min(disabled_s, run_all());
    }

    const double ratio = disabled_s / enabled_s;  // = throughput_enabled / throughput_disabled
    std::ostringstream msg;
    msg << "enabled " << enabled_s << " s vs disabled " << disabled_s
        << " s over 10,000 statements (throughput ratio " << ratio << ", need >= 0.9)";
    ensure(enabled_s <= disabled_s / 0.9, msg.str());
    server->stop();
}

// 9. SIGKILL mid-workload, then reopen: registry, grants, password and every
//    acknowledged audit row are intact, session ids resume above the old
//    ceiling, and a truncated state file is refused outright.
void criterion_durability() {
    guard::test::TempDir td{"accept-crash"};
    const auto state = td / "state";
    const auto conf = td / "guard.conf";
    const auto pw = td / "pw.txt";
    write_file(td / "users.tsv", "sys\t1\tsys\nscott\t0\tscott\n");
    write_file(pw, std::string(kPw) + "\n");
    write_file(conf, "data_port=0\nadmin_port=0\nstate_dir=" + state.string() +
                         "\nusers_file=" + (td / "users.tsv").string() +
                         "\noutbox_dir=" + (td / "outbox").string() + "\n");
    {
        const auto init = guard::test::run_process(
            {GUARDD_BIN, "--config", conf.string(), "--init", "--password-file", pw.string()});
        ensure(init.exit_code == 0, "guardd --init failed: " + init.err);
    }

    struct DdlExpect {
        std::string user, stmt, verdict;
    };
    std::vector<DdlExpect> acked_ddl;
    const std::string kill_stmt = "DROP PACKAGE hr.emp_actions;";
    std::uint64_t killed_sid = 0;

    guard::test::Daemon first({GUARDD_BIN, "--config", conf.string()}, td / "first.log");
    const auto ports = first.wait_for_ports();
    const int data_port = ports.first;
    const int admin_port = ports.second;
    {
        auto a = take(guard::net::AdminClient::connect("127.0.0.1", admin_port, kPw),
                      "admin connect");
        for (const char* cmd : {"ADD_OBJECT HR TABLE EMP", "ADD_OBJECT HR PACKAGE EMP_ACTIONS"}) {
            ensure(take(a.command(cmd), cmd) == "OK added", std::string(cmd) + " not acknowledged");
        }
        ensure(take(a.command("GRANT SCOTT HR TABLE EMP"), "grant") == "OK granted",
               "grant not acknowledged");
    }
    {
        auto sys = take(SqlClient::connect("127.0.0.1", data_port, "sys"), "sys connect");
        const std::string create = "CREATE TABLE hr.keep (x NUMBER);";
        ensure(run_stmt(sys, create).kind == StatementReply::Kind::Ok,
               "setup create not acknowledged");
        acked_ddl.push_back({"SYS", create, "ALLOW"});
    }
    {
        auto sys = take(SqlClient::connect("127.0.0.1", data_port, "sys"), "sys connect");
        killed_sid = sys.session_id();
        const auto reply = run_stmt(sys, kill_stmt);
        ensure(reply.kind == StatementReply::Kind::Kill &&
                   reply.message == "PROTECTED_OBJECT",
               "setup kill did not happen");
        acked_ddl.push_back({"SYS", kill_stmt, "KILL"});
    }

    // flood DDL until the floor disappears; only acknowledged statements count
    std::vector<std::string> flood_acked;
    std::thread flood([&flood_acked, data_port] {
        auto c = SqlClient::connect("127.0.0.1", data_port, "scott");
        if (!c.ok()) return;
        auto cli = std::move(c.value());
        for (int i = 0;; ++i) {
            const std::string s = "CREATE TABLE scott.f" + std::to_string(i) + " (x NUMBER);";
            auto r = cli.exec(s);
            if (!r.ok() || r.value().kind != StatementReply::Kind::Ok) break;
            flood_acked.push_back(s);
        }
    });
    std::this_thread::sleep_for(std::chrono::milliseconds(250));
    first.kill_hard();  // SIGKILL: no shutdown path gets to run
    flood.join();
    ensure(!flood_acked.empty(), "the flood never got an acknowledgement");

    std::uint64_t resume_floor = 0;
    {
        auto st = take(guard::admin::AdminStore::open(state), "reopen admin state");
        const auto snap = st->state();
        const auto have = [&](const ObjectRef& r) {
            return std::any_of(snap->registry.begin(), snap->registry.end(),
                               [&](const auto& po) { return po.ref == r; });
        };
        ensure(have({"HR", ObjectType::Table, "EMP"}), "registry lost HR.EMP");
        ensure(have({"HR", ObjectType::Package, "EMP_ACTIONS"}),
               "registry lost HR.EMP_ACTIONS");
        ensure(std::any_of(snap->grants.begin(), snap->grants.end(),
                           [](const guard::policy::Grant& g) {
                               return g.grantee == "SCOTT" &&
                                      g.object == ObjectRef{"HR", ObjectType::Table, "EMP"};
                           }),
               "the SCOTT grant is gone");
        must(st->verify_password(kPw), "password no longer verifies");

        auto au = take(guard::audit::AuditStore::open(state), "reopen audit state");
        const auto killed = au->killed();
        int hits = 0;
        for (const auto& rec : killed) {
            if (rec.session_id != killed_sid) continue;
            ++hits;
            ensure(rec.user == "SYS" && rec.statement == kill_stmt &&
                       rec.reason == "PROTECTED_OBJECT",
                   "the kill record came back damaged");
        }
        ensure(hits == 1, "kill record count for the crashed run: " + std::to_string(hits));

        const auto log = au->ddl_log();
        std::map<std::string, const guard::audit::DdlLogRecord*> by_stmt;
        for (const auto& rec : log) {
            ensure(by_stmt.emplace(rec.statement, &rec).second,
                   "ddl row duplicated: " + rec.statement);
        }
        for (const auto& e : acked_ddl) {
            const auto it = by_stmt.find(e.stmt);
            ensure(it != by_stmt.end(), "acknowledged ddl row missing: " + e.stmt);
            ensure(it->second->user == e.user && it->second->verdict == e.verdict,
                   "acknowledged ddl row damaged: " + e.stmt);
        }
        for (const std::string& s : flood_acked) {
            const auto it = by_stmt.find(s);
            ensure(it != by_stmt.end(), "acknowledged flood row missing: " + s);
            ensure(it->second->verdict == "ALLOW", "flood row verdict damaged: " + s);
        }
        resume_floor = au->max_session_id();
    }

    guard::test::Daemon second({GUARDD_BIN, "--config", conf.string()}, td / "second.log");
    const auto ports2 = second.wait_for_ports();
    {
        auto scott = take(SqlClient::connect("127.0.0.1", ports2.first, "scott"),
                          "scott reconnect");
        ensure(scott.session_id() > resume_floor,
               "session ids must resume above " + std::to_string(resume_floor) + ", got " +
                   std::to_string(scott.session_id()));
        ensure(run_stmt(scott, "ALTER TABLE hr.emp ADD (z NUMBER);").kind ==
                   StatementReply::Kind::Ok,
               "the surviving grant should still allow DDL");
    }
    {
        auto sys = take(SqlClient::connect("127.0.0.1", ports2.first, "sys"), "sys reconnect");
        const auto reply = run_stmt(sys, kill_stmt);
        ensure(reply.kind == StatementReply::Kind::Kill &&
                   reply.message == "PROTECTED_OBJECT",
               "the surviving registry should still kill");
    }
    ensure(second.terminate_and_wait() == 0, "clean shutdown after restart");

    const auto victim = state / "p_config.tsv";
    const std::string bytes = slurp(victim);
    ensure(bytes.size() > 8, "state file unexpectedly small");
    write_file(victim, bytes.substr(0, bytes.size() / 2));
    const auto refused = guard::test::run_process({GUARDD_BIN, "--config", conf.string()});
    ensure(refused.exit_code == 1,
           "a torn state file must refuse with exit 1, got " +
               std::to_string(refused.exit_code));
    ensure(refused.err.find("corrupt_state") != std::string::npos,
           "stderr should name corrupt_state: " + refused.err);
}

struct Criterion {
    int number;
    const char* label;
    double budget_s;
    void (*run)();
};

}  // namespace

int main() {
    const std::array<Criterion, 9> criteria = {{
        {1, "kill path", 1.0, criterion_kill_path},
        {2, "grant path", 1.0, criterion_grant_path},
        {3, "self-protection", 10.0, criterion_self_protection},
        {4, "dictionary shield", 10.0, criterion_dictionary_shield},
        {5, "wrap round-trip", 5.0, criterion_wrap_round_trip},
        {6, "ddl-log completeness", 30.0, criterion_ddl_log_completeness},
        {7, "decision-oracle equivalence", 10.0, criterion_decision_oracle},
        {8, "performance under load", 120.0, criterion_performance},
        {9, "state durability", 30.0, criterion_durability},
    }};

    // One throwaway world before any clock starts: dynamic linking, first
    // fsyncs and first sockets are process-lifetime costs, not part of any
    // criterion's budget.
    try {
        World warmup;
        (void)warmup.sql("sys");
    } catch (...) {
        // if this is broken the criteria will say so on their own lines
    }

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        try {
            c.run();
        } catch (const std::exception& e) {
            detail = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (detail.empty() && elapsed > c.budget_s) {
            std::ostringstream over;
            over << "finished but took " << elapsed << " s, budget " << c.budget_s << " s";
            detail = over.str();
        }
        if (detail.empty()) {
            std::printf("PASS criterion %d: %s (%.2fs)\n", c.number, c.label, elapsed);
        } else {
            std::printf("FAIL criterion %d: %s: %s (%.2fs)\n", c.number, c.label,
                        detail.c_str(), elapsed);
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures;
}
