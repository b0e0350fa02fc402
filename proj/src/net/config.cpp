#include "guard/net/config.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace guard::net {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

Result<int> parse_port(std::size_t lineno, std::string_view key, std::string_view value) {
    const auto bad = [&]() {
        return make_error(Errc::bad_request, "line " + std::to_string(lineno) +
                                                 ": invalid port for " + std::string(key));
    };
    int port = 0;
    for (char c : value) {
        if (c < '0' || c > '9' || port > 65535) {
            return bad();
        }
        port = port * 10 + (c - '0');
    }
    if (value.empty() || port > 65535) {
        return bad();
    }
    return port;
}

}  // namespace

Result<ServerConfig> parse_config(std::string_view text) {
    ServerConfig cfg;
    bool have_data = false, have_admin = false, have_state = false, have_users = false;
    bool have_seed = false, have_outbox = false;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(
            start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            return make_error(Errc::bad_request,
                              "line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) {
            return make_error(Errc::bad_request,
                              "line " + std::to_string(lineno) + ": empty value for " +
                                  std::string(key));
        }
        const auto once = [&](bool& seen) -> Result<void> {
            if (seen) {
                return make_error(Errc::bad_request, "line " + std::to_string(lineno) +
                                                         ": duplicate key " + std::string(key));
            }
            seen = true;
            return Result<void>();
        };
        if (key == "data_port") {
            if (auto r = once(have_data); !r.ok()) return r.error();
            auto p = parse_port(lineno, key, value);
            if (!p.ok()) return p.error();
            cfg.data_port = p.value();
        } else if (key == "admin_port") {
            if (auto r = once(have_admin); !r.ok()) return r.error();
            auto p = parse_port(lineno, key, value);
            if (!p.ok()) return p.error();
            cfg.admin_port = p.value();
        } else if (key == "state_dir") {
            if (auto r = once(have_state); !r.ok()) return r.error();
            cfg.state_dir = std::string(value);
        } else if (key == "users_file") {
            if (auto r = once(have_users); !r.ok()) return r.error();
            cfg.users_file = std::string(value);
        } else if (key == "seed_sql") {
            if (auto r = once(have_seed); !r.ok()) return r.error();
            cfg.seed_sql = std::string(value);
        } else if (key == "outbox_dir") {
            if (auto r = once(have_outbox); !r.ok()) return r.error();
            cfg.outbox_dir = std::string(value);
        } else {
            return make_error(Errc::bad_request,
                              "line " + std::to_string(lineno) + ": unknown key " +
                                  std::string(key));
        }
    }
    if (!have_data || !have_admin || !have_state || !have_users) {
        return make_error(Errc::bad_request,
                          "data_port, admin_port, state_dir and users_file are required");
    }
    if (!cfg.outbox_dir) {
        cfg.outbox_dir = cfg.state_dir / "outbox";
    }
    return cfg;
}

Result<ServerConfig> load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::file_not_found, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto cfg = parse_config(buf.str());
    if (!cfg.ok()) {
        return make_error(cfg.error().code, path.string() + ": " + cfg.error().message);
    }
    return cfg;
}

}  // namespace guard::net
