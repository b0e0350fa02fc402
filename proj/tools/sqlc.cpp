#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "guard/net/client.hpp"
#include "guard/net/wire.hpp"
#include "guard/sql/script.hpp"
#include "tool_io.hpp"

namespace {

int fail(const std::string& msg) {
    std::cerr << "sqlc: " << msg << "\n";
    return 1;
}

std::string trim(std::string s) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n';
    };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statement client for the SQL protection proxy"};
    std::string host = "127.0.0.1";
    int port = 0;
    std::string user;
    std::string script_path;
    app.add_option("--host", host, "proxy host");
    app.add_option("--port", port, "data port")->required();
    app.add_option("--user", user, "database user to authenticate as")->required();
    app.add_option("script", script_path, "SQL script; stdin when absent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string script;
    if (script_path.empty()) {
        script = guard::tool::read_stream(std::cin);
    } else {
        std::ifstream in(script_path, std::ios::binary);
        if (!in) return fail("cannot read " + script_path);
        script = guard::tool::read_stream(in);
    }

    auto client = guard::net::SqlClient::connect(host, port, user);
    if (!client.ok()) return fail(client.error().message);

    for (const guard::sql::Segment& seg : guard::sql::split_script(script)) {
        if (guard::sql::is_blank(seg.text)) continue;
        const std::string stmt = trim(seg.text);
        std::cout << "> " << stmt << "\n";

        auto reply = client.value().exec(stmt);
        if (!reply.ok()) return fail(reply.error().message);

        using Kind = guard::net::StatementReply::Kind;
        const auto& r = reply.value();
        switch (r.kind) {
            case Kind::Ok:
                std::cout << "< OK\n";
                break;
            case Kind::Rows:
                std::cout << "< ROWS " << r.rows.size() << "\n";
                for (const auto& row : r.rows) {
                    std::cout << "< " << guard::net::join_row(row) << "\n";
                }
                break;
            case Kind::Err:
                std::cout << "< ERR " << r.err_token;
                if (!r.message.empty()) std::cout << " " << r.message;
                std::cout << "\n";
                break;
            case Kind::Kill:
                std::cout << "< KILL " << r.message << "\n";
                return 1;
        }
    }
    return 0;
}
