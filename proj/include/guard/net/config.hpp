#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "guard/result.hpp"

namespace guard::net {

// key=value lines, '#' comments. Port 0 binds an ephemeral port (test
// harnesses read the bound port from the server).
struct ServerConfig {
    int data_port = 0;
    int admin_port = 0;
    std::filesystem::path state_dir;
    std::filesystem::path users_file;
    std::optional<std::filesystem::path> seed_sql;
    std::optional<std::filesystem::path> outbox_dir;  // default <state_dir>/outbox
};

Result<ServerConfig> parse_config(std::string_view text);
Result<ServerConfig> load_config(const std::filesystem::path& path);

}  // namespace guard::net
