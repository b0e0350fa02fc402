#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace guard::audit {

// RFC-4180 style: fields holding comma, quote, CR or LF get quoted,
// embedded quotes doubled.
std::string csv_escape(std::string_view field);

// fields joined with commas, '\n' terminated
std::string csv_line(const std::vector<std::string>& fields);

struct CsvParse {
    std::vector<std::vector<std::string>> records;
    // bytes forming complete (newline-terminated, quotes balanced)
    // records; anything past this is a torn tail from an interrupted append
    std::size_t consumed = 0;
};

CsvParse parse_csv(std::string_view data);

}  // namespace guard::audit
