#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guard/net/socket.hpp"
#include "guard/result.hpp"

namespace guard::net {

// Outcome of one framed statement as seen by the client.
struct StatementReply {
    enum class Kind { Ok, Rows, Err, Kill };
    Kind kind = Kind::Ok;
    std::vector<std::vector<std::string>> rows;  // Kind::Rows
    std::string err_token;                       // Kind::Err
    std::string message;                         // Err detail / Kill reason
};

// Data-port client. connect() authenticates; exec() frames one statement
// and parses the reply. A Kill reply ends the session — the server closes
// after sending it, and so do we.
class SqlClient {
public:
    static Result<SqlClient> connect(const std::string& host, int port,
                                     std::string_view user);

    std::uint64_t session_id() const { return session_id_; }
    bool closed() const { return closed_; }
    void close();

    Result<StatementReply> exec(std::string_view stmt);

private:
    SqlClient() = default;

    Conn conn_;
    std::uint64_t session_id_ = 0;
    bool closed_ = false;
};

// Admin-port client. One authenticated connection, one command per call.
class AdminClient {
public:
    static Result<AdminClient> connect(const std::string& host, int port,
                                       std::string_view password);

    // Sends one command line and returns the raw status line, which is
    // either "OK ..." or "ERR <code> <message>".
    Result<std::string> command(std::string_view line);

    // EXPORT_KILLED with optional inclusive date bounds (YYYY-MM-DD).
    Result<std::string> export_killed(std::string_view from = {},
                                      std::string_view to = {});

    void close();

private:
    AdminClient() = default;

    Conn conn_;
};

}  // namespace guard::net
