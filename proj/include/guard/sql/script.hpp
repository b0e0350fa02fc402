#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace guard::sql {

// One statement cut out of a script. Concatenating text + terminator over
// all segments reproduces the input byte for byte.
struct Segment {
    std::string text;
    std::string terminator;  // ";..." or a "/" line; empty when input ran out
    bool operator==(const Segment&) const = default;
};

// Plain SQL statements end at a top-level ';' at end of line. PL/SQL
// units (CREATE <unit>, DECLARE, BEGIN) contain ';' internally and end at
// a line holding only '/'. Quotes and comments never terminate.
std::vector<Segment> split_script(std::string_view script);

// true if text holds nothing but whitespace and comments.
bool is_blank(std::string_view text);

}  // namespace guard::sql
