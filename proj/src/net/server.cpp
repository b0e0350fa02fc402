#include "guard/net/server.hpp"

#include <fcntl.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "guard/net/wire.hpp"
#include "guard/policy/engine.hpp"
#include "guard/sql/classify.hpp"
#include "guard/sql/script.hpp"

namespace guard::net {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) words.push_back(s.substr(i, j - i));
        i = j;
    }
    return words;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::string err_reply(Errc code, std::string_view message) {
    std::string out = "ERR ";
    out += errc_token(code);
    if (!message.empty()) {
        out += ' ';
        out += one_line(message);
    }
    out += '\n';
    return out;
}

std::string err_reply(const Error& e) { return err_reply(e.code, e.message); }

// last words before closing: failure only means the client left first
void say(Conn& conn, std::string_view data) { (void)conn.send_all(data); }

// Loads the bootstrap script into the catalog, policy not consulted: this
// is the backend's own content, present before the proxy fronts it.
Result<void> seed_catalog(db::Catalog& catalog, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::file_not_found, "cannot read seed script " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string script = buf.str();

    const db::DbUser bootstrap{"SYS", true, "SYS"};
    std::size_t n = 0;
    for (const sql::Segment& seg : sql::split_script(script)) {
        ++n;
        if (sql::is_blank(seg.text)) continue;
        const sql::ParsedStatement stmt = sql::classify(seg.text, bootstrap.default_schema);
        if (stmt.error) {
            return make_error(stmt.error->code, "seed statement " + std::to_string(n) +
                                                    ": " + stmt.error->message);
        }
        if (auto r = catalog.execute(stmt, bootstrap); !r.ok()) {
            return make_error(r.error().code, "seed statement " + std::to_string(n) + ": " +
                                                  r.error().message);
        }
    }
    return {};
}

}  // namespace

Result<std::unique_ptr<Server>> Server::start(const ServerConfig& cfg) {
    std::unique_ptr<Server> srv(new Server);
    srv->cfg_ = cfg;

    auto admin = admin::AdminStore::open(cfg.state_dir);
    if (!admin.ok()) return admin.error();
    srv->admin_ = std::move(admin.value());

    auto audit = audit::AuditStore::open(cfg.state_dir);
    if (!audit.ok()) return audit.error();
    srv->audit_ = std::move(audit.value());

    auto users = db::load_users(cfg.users_file);
    if (!users.ok()) return users.error();
    for (db::DbUser& u : users.value()) {
        srv->users_.emplace(u.name, std::move(u));
    }

    srv->catalog_ = std::make_unique<db::Catalog>();
    if (cfg.seed_sql) {
        if (auto r = seed_catalog(*srv->catalog_, *cfg.seed_sql); !r.ok()) {
            return r.error();
        }
    }

    srv->next_session_.store(srv->audit_->max_session_id() + 1);

    if (::pipe(srv->wake_pipe_) != 0) {
        return make_error(Errc::bind_failure, "pipe failed");
    }

    auto data = Listener::bind_loopback(cfg.data_port);
    if (!data.ok()) return data.error();
    srv->data_listener_ = std::move(data.value());

    auto adm = Listener::bind_loopback(cfg.admin_port);
    if (!adm.ok()) return adm.error();
    srv->admin_listener_ = std::move(adm.value());

    Server* raw = srv.get();
    srv->data_thread_ = std::thread([raw] { raw->accept_loop(raw->data_listener_, false); });
    srv->admin_thread_ = std::thread([raw] { raw->accept_loop(raw->admin_listener_, true); });
    return srv;
}

Server::~Server() { stop(); }

void Server::stop() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopped_) return;
        stopped_ = true;
    }
    stopping_.store(true);
    if (wake_pipe_[1] >= 0) {
        const char b = 'x';
        [[maybe_unused]] ssize_t n = ::write(wake_pipe_[1], &b, 1);
    }
    if (data_thread_.joinable()) data_thread_.join();
    if (admin_thread_.joinable()) admin_thread_.join();
    data_listener_.close();
    admin_listener_.close();

    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (int fd : live_fds_) {
            ::shutdown(fd, SHUT_RDWR);
        }
        workers.swap(workers_);
    }
    for (std::thread& t : workers) {
        if (t.joinable()) t.join();
    }
    for (int& fd : wake_pipe_) {
        if (fd >= 0) {
            ::close(fd);
            fd = -1;
        }
    }
}

std::vector<Session> Server::sessions() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<Session> out;
    out.reserve(sessions_.size());
    for (const auto& s : sessions_) {
        out.push_back(*s);
    }
    return out;
}

void Server::track(int fd) {
    std::lock_guard<std::mutex> lock(mu_);
    live_fds_.push_back(fd);
}

void Server::untrack(int fd) {
    std::lock_guard<std::mutex> lock(mu_);
    live_fds_.erase(std::remove(live_fds_.begin(), live_fds_.end(), fd), live_fds_.end());
}

void Server::accept_loop(Listener& listener, bool is_admin) {
    while (!stopping_.load()) {
        auto conn = listener.accept(wake_pipe_[0]);
        if (!conn.ok()) {
            if (stopping_.load()) break;
            continue;
        }
        std::lock_guard<std::mutex> lock(mu_);
        if (stopped_) {
            break;
        }
        Conn c = std::move(conn.value());
        if (is_admin) {
            workers_.emplace_back(
                [this](Conn cc) { run_admin_session(std::move(cc)); }, std::move(c));
        } else {
            workers_.emplace_back(
                [this](Conn cc) { run_data_session(std::move(cc)); }, std::move(c));
        }
    }
}

void Server::kill_session(Conn& conn, Session& session, std::string_view statement,
                          std::string_view reason) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (session.state == Session::State::Killed) {
            return;
        }
    }
    const audit::KilledSessionRecord rec{session.id, session.user,
                                         std::string(statement), std::string(reason),
                                         now_utc()};
    if (auto r = audit_->record_killed(rec); !r.ok()) {
        // no record, no kill confirmation: the client only ever learns
        // about a kill that is already on disk
        say(conn, err_reply(r.error()));
        conn.close();
        std::lock_guard<std::mutex> lock(mu_);
        session.state = Session::State::Closed;
        return;
    }
    {
        std::lock_guard<std::mutex> lock(mu_);
        session.state = Session::State::Killed;
    }
    say(conn, "KILL " + std::string(reason) + "\n");
    conn.close();
}

void Server::run_data_session(Conn conn) {
    track(conn.fd());
    const int fd = conn.fd();

    auto line = conn.recv_line(4096);
    if (!line.ok()) {
        untrack(fd);
        return;
    }
    if (!starts_with(line.value(), "AUTH ")) {
        say(conn, err_reply(Errc::protocol_violation, "expected AUTH <user>"));
        untrack(fd);
        return;
    }
    const std::string username = ascii_upper(std::string_view(line.value()).substr(5));
    const auto it = users_.find(username);
    if (it == users_.end()) {
        say(conn, err_reply(Errc::auth_failure, "unknown user " + username));
        untrack(fd);
        return;
    }
    const db::DbUser& user = it->second;

    auto session = std::make_shared<Session>();
    session->id = next_session_.fetch_add(1);
    session->user = user.name;
    session->is_dba = user.is_dba;
    session->connected_at = now_utc();
    {
        std::lock_guard<std::mutex> lock(mu_);
        sessions_.push_back(session);
    }

    const auto set_state = [&](Session::State st) {
        std::lock_guard<std::mutex> lock(mu_);
        if (session->state == Session::State::Open) {
            session->state = st;
        }
    };

    if (!conn.send_all("OK session=" + std::to_string(session->id) + "\n").ok()) {
        set_state(Session::State::Closed);
        untrack(fd);
        return;
    }

    for (;;) {
        auto frame = conn.recv_line(1024);
        if (!frame.ok()) {
            set_state(Session::State::Closed);
            break;
        }
        if (!starts_with(frame.value(), "STMT ")) {
            say(conn, err_reply(Errc::protocol_violation, "expected STMT <nbytes>"));
            set_state(Session::State::Closed);
            break;
        }
        const auto nbytes = parse_u64(std::string_view(frame.value()).substr(5));
        if (!nbytes) {
            say(conn, err_reply(Errc::protocol_violation, "bad byte count"));
            set_state(Session::State::Closed);
            break;
        }
        if (*nbytes > kMaxFrame) {
            say(conn, err_reply(Errc::frame_too_large,
                                "frame of " + std::to_string(*nbytes) +
                                    " bytes exceeds " + std::to_string(kMaxFrame)));
            set_state(Session::State::Closed);
            break;
        }
        auto body = conn.recv_exact(*nbytes);
        if (!body.ok()) {
            set_state(Session::State::Closed);
            break;
        }

        const auto snapshot = admin_->state();
        const auto index = admin_->policy_index();
        const sql::ParsedStatement stmt =
            sql::classify(body.value(), user.default_schema,
                          snapshot->config.dictionary_views);
        if (stmt.error) {
            // unparseable statements are refused, never executed; the
            // session survives its own typos
            if (!conn.send_all(err_reply(*stmt.error)).ok()) {
                set_state(Session::State::Closed);
                break;
            }
            continue;
        }

        const policy::Decision decision = policy::decide(
            stmt, user.name, now_utc(), snapshot->config.enabled, *index);

        if (stmt.cls == sql::StatementClass::Ddl) {
            const audit::DdlLogRecord rec{session->id, user.name, stmt.raw,
                                          std::string(policy::to_string(decision.verdict)),
                                          now_utc()};
            if (auto r = audit_->record_ddl(rec); !r.ok()) {
                // can't audit -> don't touch the catalog
                say(conn, err_reply(r.error()));
                set_state(Session::State::Closed);
                break;
            }
        }

        if (decision.verdict == policy::Verdict::Kill) {
            kill_session(conn, *session, stmt.raw, policy::to_string(decision.reason));
            break;
        }

        auto exec = catalog_->execute(stmt, user);
        std::string reply;
        if (!exec.ok()) {
            reply = err_reply(exec.error());
        } else if (exec.value().rows.empty()) {
            reply = "OK\n";
        } else {
            reply = "ROWS " + std::to_string(exec.value().rows.size()) + "\n";
            for (const auto& row : exec.value().rows) {
                reply += join_row(row);
                reply += '\n';
            }
        }
        if (!conn.send_all(reply).ok()) {
            set_state(Session::State::Closed);
            break;
        }
    }
    untrack(fd);
}

void Server::run_admin_session(Conn conn) {
    track(conn.fd());
    const int fd = conn.fd();

    std::string session_password;
    bool authed = false;
    for (int attempt = 1; attempt <= 3; ++attempt) {
        auto line = conn.recv_line(4096);
        if (!line.ok()) {
            untrack(fd);
            return;
        }
        if (!starts_with(line.value(), "AUTH ")) {
            say(conn, err_reply(Errc::protocol_violation, "expected AUTH <password>"));
            untrack(fd);
            return;
        }
        const std::string password(std::string_view(line.value()).substr(5));
        if (admin_->verify_password(password).ok()) {
            session_password = password;
            authed = true;
            say(conn, "OK\n");
            break;
        }
        if (attempt == 3) {
            say(conn, err_reply(Errc::auth_failure, "too many failures"));
            untrack(fd);
            return;
        }
        say(conn, err_reply(Errc::auth_failure, "bad password"));
    }
    if (!authed) {
        untrack(fd);
        return;
    }

    for (;;) {
        auto line = conn.recv_line();
        if (!line.ok()) break;
        say(conn, handle_admin_command(line.value(), session_password));
    }
    untrack(fd);
}

std::string Server::handle_admin_command(std::string_view line,
                                         std::string& session_password) {
    const std::vector<std::string_view> words = split_ws(line);
    if (words.empty()) {
        return err_reply(Errc::bad_request, "empty command");
    }
    const std::string_view cmd = words[0];

    const auto parse_ref = [&](std::size_t at) -> Result<ObjectRef> {
        const auto owner = parse_identifier(words[at]);
        if (!owner) {
            return make_error(Errc::invalid_identifier,
                              "bad owner " + std::string(words[at]));
        }
        const auto type = object_type_from(words[at + 1]);
        if (!type) {
            return make_error(Errc::invalid_type,
                              "unknown object type " + std::string(words[at + 1]));
        }
        const auto name = parse_identifier(words[at + 2]);
        if (!name) {
            return make_error(Errc::invalid_identifier,
                              "bad name " + std::string(words[at + 2]));
        }
        return ObjectRef{*owner, *type, *name};
    };

    if (cmd == "SET_SECURITY") {
        if (words.size() != 2 || (words[1] != "on" && words[1] != "off")) {
            return err_reply(Errc::bad_request, "usage: SET_SECURITY on|off");
        }
        const bool enabled = words[1] == "on";
        if (auto r = admin_->set_security(session_password, enabled); !r.ok()) {
            return err_reply(r.error());
        }
        return std::string("OK security=") + (enabled ? "on" : "off") + "\n";
    }
    if (cmd == "SET_PASSWORD") {
        if (words.size() != 3) {
            return err_reply(Errc::bad_request, "usage: SET_PASSWORD <old> <new>");
        }
        if (auto r = admin_->set_password(words[1], words[2]); !r.ok()) {
            return err_reply(r.error());
        }
        session_password = std::string(words[2]);
        return "OK password-changed\n";
    }
    if (cmd == "ADD_OBJECT") {
        if (words.size() != 4) {
            return err_reply(Errc::bad_request, "usage: ADD_OBJECT <owner> <type> <name>");
        }
        auto ref = parse_ref(1);
        if (!ref.ok()) return err_reply(ref.error());
        if (auto r = admin_->add_object(ref.value()); !r.ok()) {
            return err_reply(r.error());
        }
        return "OK added\n";
    }
    if (cmd == "REMOVE_OBJECT") {
        if (words.size() != 4) {
            return err_reply(Errc::bad_request,
                             "usage: REMOVE_OBJECT <owner> <type> <name>");
        }
        auto ref = parse_ref(1);
        if (!ref.ok()) return err_reply(ref.error());
        if (auto r = admin_->remove_object(ref.value()); !r.ok()) {
            return err_reply(r.error());
        }
        return "OK removed\n";
    }
    if (cmd == "GRANT") {
        if (words.size() < 5) {
            return err_reply(Errc::bad_request,
                             "usage: GRANT <user> <owner> <type> <name> [start_date=] "
                             "[end_date=] [start_hour=] [end_hour=]");
        }
        const auto grantee = parse_identifier(words[1]);
        if (!grantee) {
            return err_reply(Errc::invalid_identifier, "bad grantee " + std::string(words[1]));
        }
        auto ref = parse_ref(2);
        if (!ref.ok()) return err_reply(ref.error());
        policy::Grant grant{*grantee, ref.value(), {}, {}, {}, {}};
        for (std::size_t i = 5; i < words.size(); ++i) {
            const std::string_view kv = words[i];
            const std::size_t eq = kv.find('=');
            if (eq == std::string_view::npos) {
                return err_reply(Errc::bad_request, "expected key=value, got " + std::string(kv));
            }
            const std::string_view key = kv.substr(0, eq);
            const std::string_view value = kv.substr(eq + 1);
            if (key == "start_date" || key == "end_date") {
                const auto d = parse_date(value);
                if (!d) {
                    return err_reply(Errc::bad_request, "bad date " + std::string(value));
                }
                (key == "start_date" ? grant.start_date : grant.end_date) = *d;
            } else if (key == "start_hour" || key == "end_hour") {
                const auto h = parse_u64(value);
                if (!h || *h > 23) {
                    return err_reply(Errc::invalid_window,
                                     "hour out of range: " + std::string(value));
                }
                (key == "start_hour" ? grant.start_hour : grant.end_hour) =
                    static_cast<int>(*h);
            } else {
                return err_reply(Errc::bad_request, "unknown option " + std::string(key));
            }
        }
        if (auto r = admin_->grant_permission(grant); !r.ok()) {
            return err_reply(r.error());
        }
        return "OK granted\n";
    }
    if (cmd == "REVOKE") {
        if (words.size() != 5) {
            return err_reply(Errc::bad_request, "usage: REVOKE <user> <owner> <type> <name>");
        }
        const auto grantee = parse_identifier(words[1]);
        if (!grantee) {
            return err_reply(Errc::invalid_identifier, "bad grantee " + std::string(words[1]));
        }
        auto ref = parse_ref(2);
        if (!ref.ok()) return err_reply(ref.error());
        if (auto r = admin_->revoke_permission(*grantee, ref.value()); !r.ok()) {
            return err_reply(r.error());
        }
        return "OK revoked\n";
    }
    if (cmd == "EXPORT_KILLED") {
        std::optional<Date> from;
        std::optional<Date> to;
        for (std::size_t i = 1; i < words.size(); ++i) {
            const std::string_view kv = words[i];
            if (starts_with(kv, "from=")) {
                const auto d = parse_date(kv.substr(5));
                if (!d) return err_reply(Errc::bad_request, "bad date " + std::string(kv));
                from = *d;
            } else if (starts_with(kv, "to=")) {
                const auto d = parse_date(kv.substr(3));
                if (!d) return err_reply(Errc::bad_request, "bad date " + std::string(kv));
                to = *d;
            } else {
                return err_reply(Errc::bad_request, "unknown option " + std::string(kv));
            }
        }
        const std::string csv = audit_->export_killed(from, to);
        return "OK " + std::to_string(csv.size()) + "\n" + csv;
    }
    return err_reply(Errc::unknown_command, std::string(cmd));
}

}  // namespace guard::net
