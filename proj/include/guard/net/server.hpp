#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "guard/admin/admin_store.hpp"
#include "guard/audit/audit_store.hpp"
#include "guard/db/catalog.hpp"
#include "guard/net/config.hpp"
#include "guard/net/socket.hpp"
#include "guard/time_util.hpp"

namespace guard::net {

// One client connection on the data port. Ids are monotonic within a run
// and resume above anything already in the audit files, so exported rows
// never collide across restarts.
struct Session {
    enum class State { Open, Killed, Closed };

    std::uint64_t id = 0;
    std::string user;
    bool is_dba = false;
    Timestamp connected_at{};
    State state = State::Open;
};

// The proxy. Listens on two loopback ports: data (AUTH + framed
// statements against the catalog, every one passed through the policy
// first) and admin (password-authenticated control commands). start()
// loads state, users and the optional seed script before accepting
// anything; stop() is idempotent and joins every thread.
class Server {
public:
    static Result<std::unique_ptr<Server>> start(const ServerConfig& cfg);

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;
    ~Server();

    void stop();

    int data_port() const { return data_listener_.port(); }
    int admin_port() const { return admin_listener_.port(); }

    admin::AdminStore& admin_store() { return *admin_; }
    audit::AuditStore& audit() { return *audit_; }
    db::Catalog& catalog() { return *catalog_; }

    std::vector<Session> sessions() const;

private:
    Server() = default;

    void accept_loop(Listener& listener, bool is_admin);
    void run_data_session(Conn conn);
    void run_admin_session(Conn conn);
    std::string handle_admin_command(std::string_view line, std::string& session_password);

    // Kills the session: the record is durable before the client learns
    // anything. A second kill on the same session is a no-op.
    void kill_session(Conn& conn, Session& session, std::string_view statement,
                      std::string_view reason);

    void track(int fd);
    void untrack(int fd);

    ServerConfig cfg_;
    std::unique_ptr<admin::AdminStore> admin_;
    std::unique_ptr<audit::AuditStore> audit_;
    std::unique_ptr<db::Catalog> catalog_;
    std::unordered_map<std::string, db::DbUser> users_;

    Listener data_listener_;
    Listener admin_listener_;
    int wake_pipe_[2] = {-1, -1};
    std::atomic<bool> stopping_{false};
    std::atomic<std::uint64_t> next_session_{1};

    std::thread data_thread_;
    std::thread admin_thread_;

    mutable std::mutex mu_;  // workers_, live_fds_, sessions_, stopped_
    std::vector<std::thread> workers_;
    std::vector<int> live_fds_;
    std::vector<std::shared_ptr<Session>> sessions_;
    bool stopped_ = false;
};

}  // namespace guard::net
