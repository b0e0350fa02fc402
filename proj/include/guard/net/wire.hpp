#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace guard::net {

// ROWS payload cells travel tab-separated, one row per line. Tabs,
// newlines and backslashes inside a cell are escaped so any byte sequence
// survives the trip.
std::string escape_field(std::string_view cell);
std::string unescape_field(std::string_view cell);

std::string join_row(const std::vector<std::string>& cells);
std::vector<std::string> split_row(std::string_view line);

// Protocol error replies carry the message on the status line itself.
std::string one_line(std::string_view message);

}  // namespace guard::net
