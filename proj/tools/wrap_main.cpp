#include <iostream>
#include <optional>
#include <string>
#include <string_view>

#include "guard/wraptool/wrap.hpp"

namespace {

int usage() {
    std::cerr << "Usage: wrap iname=<input file> [oname=<output file>]\n"
                 "No spaces around '='. Input without an extension is taken as .sql;\n"
                 "the default output is the input name with a .plb extension.\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::optional<std::string> iname;
    std::optional<std::string> oname;
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg.rfind("iname=", 0) == 0 && arg.size() > 6 && !iname) {
            iname = std::string(arg.substr(6));
        } else if (arg.rfind("oname=", 0) == 0 && arg.size() > 6 && !oname) {
            oname = std::string(arg.substr(6));
        } else {
            return usage();
        }
    }
    if (!iname) {
        return usage();
    }

    std::optional<std::filesystem::path> out;
    if (oname) out = *oname;
    auto report = guard::wraptool::wrap_file(*iname, out);
    if (!report.ok()) {
        std::cerr << "wrap: " << report.error().message << "\n";
        return 1;
    }
    std::cout << "wrapped " << report.value().units_wrapped << " unit(s) into "
              << report.value().output.string() << "\n";
    return 0;
}
