#pragma once

#include <termios.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "guard/result.hpp"

namespace guard::tool {

inline Result<std::string> read_first_line(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::file_not_found, "cannot read " + path);
    }
    std::string line;
    std::getline(in, line);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
    }
    return line;
}

// Echo-off prompt when stdin is a terminal; plain line read otherwise.
inline std::string prompt_secret(const std::string& prompt) {
    const bool tty = ::isatty(STDIN_FILENO) == 1;
    if (tty) {
        std::cerr << prompt << std::flush;
        termios before{};
        ::tcgetattr(STDIN_FILENO, &before);
        termios off = before;
        off.c_lflag &= ~static_cast<tcflag_t>(ECHO);
        ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &off);
        std::string line;
        std::getline(std::cin, line);
        ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &before);
        std::cerr << "\n";
        return line;
    }
    std::string line;
    std::getline(std::cin, line);
    return line;
}

inline std::string read_stream(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace guard::tool
