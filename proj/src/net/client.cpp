#include "guard/net/client.hpp"

#include <charconv>

#include "guard/net/wire.hpp"

namespace guard::net {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

// "ERR <token> <message...>" -> (token, message)
std::pair<std::string, std::string> split_err(std::string_view line) {
    std::string_view rest = line.substr(4);
    const std::size_t sp = rest.find(' ');
    if (sp == std::string_view::npos) {
        return {std::string(rest), ""};
    }
    return {std::string(rest.substr(0, sp)), std::string(rest.substr(sp + 1))};
}

}  // namespace

Result<SqlClient> SqlClient::connect(const std::string& host, int port,
                                     std::string_view user) {
    auto conn = dial(host, port);
    if (!conn.ok()) return conn.error();

    SqlClient c;
    c.conn_ = std::move(conn.value());
    if (auto s = c.conn_.send_all("AUTH " + std::string(user) + "\n"); !s.ok()) {
        return s.error();
    }
    auto line = c.conn_.recv_line();
    if (!line.ok()) return line.error();
    const std::string& reply = line.value();
    if (starts_with(reply, "ERR ")) {
        auto [token, msg] = split_err(reply);
        return make_error(token == "auth" ? Errc::auth_failure : Errc::protocol_violation,
                          msg.empty() ? token : msg);
    }
    if (!starts_with(reply, "OK session=")) {
        return make_error(Errc::protocol_violation, "unexpected greeting: " + reply);
    }
    auto sid = parse_u64(std::string_view(reply).substr(11));
    if (!sid) {
        return make_error(Errc::protocol_violation, "bad session id in: " + reply);
    }
    c.session_id_ = *sid;
    return c;
}

void SqlClient::close() {
    conn_.close();
    closed_ = true;
}

Result<StatementReply> SqlClient::exec(std::string_view stmt) {
    if (closed_) {
        return make_error(Errc::connect_failure, "session closed");
    }
    std::string frame = "STMT " + std::to_string(stmt.size()) + "\n";
    frame.append(stmt);
    if (auto s = conn_.send_all(frame); !s.ok()) {
        closed_ = true;
        return s.error();
    }
    auto line = conn_.recv_line();
    if (!line.ok()) {
        closed_ = true;
        return line.error();
    }
    const std::string& reply = line.value();

    StatementReply out;
    if (reply == "OK") {
        out.kind = StatementReply::Kind::Ok;
        return out;
    }
    if (starts_with(reply, "ROWS ")) {
        auto n = parse_u64(std::string_view(reply).substr(5));
        if (!n) {
            closed_ = true;
            return make_error(Errc::protocol_violation, "bad row count: " + reply);
        }
        out.kind = StatementReply::Kind::Rows;
        out.rows.reserve(*n);
        for (std::uint64_t i = 0; i < *n; ++i) {
            auto row = conn_.recv_line();
            if (!row.ok()) {
                closed_ = true;
                return row.error();
            }
            out.rows.push_back(split_row(row.value()));
        }
        return out;
    }
    if (starts_with(reply, "ERR ")) {
        auto [token, msg] = split_err(reply);
        out.kind = StatementReply::Kind::Err;
        out.err_token = std::move(token);
        out.message = std::move(msg);
        return out;
    }
    if (starts_with(reply, "KILL ")) {
        out.kind = StatementReply::Kind::Kill;
        out.message = reply.substr(5);
        close();
        return out;
    }
    closed_ = true;
    return make_error(Errc::protocol_violation, "unexpected reply: " + reply);
}

Result<AdminClient> AdminClient::connect(const std::string& host, int port,
                                         std::string_view password) {
    auto conn = dial(host, port);
    if (!conn.ok()) return conn.error();

    AdminClient c;
    c.conn_ = std::move(conn.value());
    if (auto s = c.conn_.send_all("AUTH " + std::string(password) + "\n"); !s.ok()) {
        return s.error();
    }
    auto line = c.conn_.recv_line();
    if (!line.ok()) return line.error();
    const std::string& reply = line.value();
    if (starts_with(reply, "ERR ")) {
        auto [token, msg] = split_err(reply);
        return make_error(token == "auth" ? Errc::auth_failure : Errc::protocol_violation,
                          msg.empty() ? token : msg);
    }
    if (!starts_with(reply, "OK")) {
        return make_error(Errc::protocol_violation, "unexpected greeting: " + reply);
    }
    return c;
}

void AdminClient::close() { conn_.close(); }

Result<std::string> AdminClient::command(std::string_view line) {
    if (auto s = conn_.send_all(std::string(line) + "\n"); !s.ok()) {
        return s.error();
    }
    return conn_.recv_line();
}

Result<std::string> AdminClient::export_killed(std::string_view from,
                                               std::string_view to) {
    std::string cmd = "EXPORT_KILLED";
    if (!from.empty()) cmd += " from=" + std::string(from);
    if (!to.empty()) cmd += " to=" + std::string(to);
    auto reply = command(cmd);
    if (!reply.ok()) return reply.error();
    const std::string& line = reply.value();
    if (starts_with(line, "ERR ")) {
        auto [token, msg] = split_err(line);
        return make_error(Errc::bad_request, token + (msg.empty() ? "" : " " + msg));
    }
    if (!starts_with(line, "OK ")) {
        return make_error(Errc::protocol_violation, "unexpected reply: " + line);
    }
    auto n = parse_u64(std::string_view(line).substr(3));
    if (!n) {
        return make_error(Errc::protocol_violation, "bad byte count: " + line);
    }
    return conn_.recv_exact(*n);
}

}  // namespace guard::net
