#include "guard/wraptool/wrap.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "guard/sql/script.hpp"
#include "guard/sql/tokens.hpp"

namespace guard::wraptool {

namespace {

constexpr std::string_view kMagic = "a000000";
constexpr std::string_view kSeal = "abcd";
constexpr std::size_t kPayloadColumns = 64;

std::string base64_encode(std::string_view data) {
    if (data.empty()) {
        return "";
    }
    std::string out(4 * ((data.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(data.data()),
                                  static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::optional<std::string> base64_decode(std::string_view text) {
    if (text.empty()) {
        return std::string();
    }
    if (text.size() % 4 != 0) {
        return std::nullopt;
    }
    std::string out(3 * (text.size() / 4), '\0');
    const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) {
        return std::nullopt;
    }
    std::size_t pad = 0;
    if (text.size() >= 2) {
        if (text[text.size() - 1] == '=') ++pad;
        if (text[text.size() - 2] == '=') ++pad;
    }
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) {
            words.push_back(line.substr(start, i - start));
        }
    }
    return words;
}

// "<keyword words> <name> WRAPPED"
std::optional<std::pair<UnitType, std::string>> parse_header_line(std::string_view line) {
    const auto words = split_words(line);
    if (words.size() < 3 || words.back() != "WRAPPED") {
        return std::nullopt;
    }
    UnitType type;
    std::string_view name;
    if (words.size() == 3) {
        if (words[0] == "PROCEDURE") {
            type = UnitType::Procedure;
        } else if (words[0] == "FUNCTION") {
            type = UnitType::Function;
        } else if (words[0] == "PACKAGE") {
            type = UnitType::Package;
        } else if (words[0] == "TYPE") {
            type = UnitType::TypeSpec;
        } else {
            return std::nullopt;
        }
        name = words[1];
    } else if (words.size() == 4 && words[1] == "BODY") {
        if (words[0] == "PACKAGE") {
            type = UnitType::PackageBody;
        } else if (words[0] == "TYPE") {
            type = UnitType::TypeBody;
        } else {
            return std::nullopt;
        }
        name = words[2];
    } else {
        return std::nullopt;
    }
    if (name.empty()) {
        return std::nullopt;
    }
    return std::make_pair(type, std::string(name));
}

}  // namespace

std::string_view unit_keyword(UnitType type) {
    switch (type) {
        case UnitType::Procedure: return "PROCEDURE";
        case UnitType::Function: return "FUNCTION";
        case UnitType::Package: return "PACKAGE";
        case UnitType::PackageBody: return "PACKAGE BODY";
        case UnitType::TypeSpec: return "TYPE";
        case UnitType::TypeBody: return "TYPE BODY";
    }
    return "PROCEDURE";
}

std::string WrappedUnit::to_text() const {
    char hex[2 * sizeof(std::size_t) + 1];
    std::snprintf(hex, sizeof(hex), "%zx", source_len);
    std::string out;
    out.append(unit_keyword(type));
    out.push_back(' ');
    out.append(name);
    out.append(" WRAPPED\n");
    out.append(kMagic);
    out.push_back('\n');
    out.append(hex);
    out.push_back('\n');
    out.append(kSeal);
    out.push_back('\n');
    for (std::size_t i = 0; i < payload_b64.size(); i += kPayloadColumns) {
        out.append(payload_b64.substr(i, kPayloadColumns));
        out.push_back('\n');
    }
    return out;
}

Result<WrappedUnit> wrap_unit(std::string_view source) {
    auto tokens = sql::tokenize(source);
    if (!tokens.ok()) {
        return make_error(Errc::unrecognized_unit, tokens.error().message);
    }
    std::vector<sql::Token> sig;
    for (auto& t : tokens.value()) {
        if (t.type != sql::TokenType::Comment) {
            sig.push_back(std::move(t));
        }
    }
    std::size_t i = 0;
    if (i < sig.size() && sig[i].is_keyword("CREATE")) {
        ++i;
        if (i + 1 < sig.size() && sig[i].is_keyword("OR") && sig[i + 1].is_keyword("REPLACE")) {
            i += 2;
        }
    }
    if (i >= sig.size() || sig[i].type != sql::TokenType::Keyword) {
        return make_error(Errc::unrecognized_unit, "no unit keyword found");
    }
    const std::string& kw = sig[i].norm;
    if (kw == "DECLARE" || kw == "BEGIN") {
        return make_error(Errc::anonymous_block_not_wrappable,
                          "anonymous blocks cannot be wrapped");
    }
    UnitType type;
    if (kw == "PROCEDURE") {
        type = UnitType::Procedure;
    } else if (kw == "FUNCTION") {
        type = UnitType::Function;
    } else if (kw == "PACKAGE" || kw == "TYPE") {
        type = kw == "PACKAGE" ? UnitType::Package : UnitType::TypeSpec;
        if (i + 1 < sig.size() && sig[i + 1].is_keyword("BODY")) {
            type = kw == "PACKAGE" ? UnitType::PackageBody : UnitType::TypeBody;
            ++i;
        }
    } else if (kw == "TRIGGER") {
        std::string name = "trigger";
        if (i + 1 < sig.size() && sig[i + 1].is_name()) {
            name = sig[i + 1].norm;
        }
        return make_error(Errc::trigger_not_wrappable,
                          name + ": trigger source stays visible, wrap does not hide it");
    } else {
        return make_error(Errc::unrecognized_unit, kw + " is not a wrappable unit");
    }
    ++i;
    if (i >= sig.size() || !sig[i].is_name()) {
        return make_error(Errc::unrecognized_unit, "unit name missing");
    }
    std::string name = sig[i].norm;
    while (i + 2 < sig.size() && sig[i + 1].is_symbol('.') && sig[i + 2].is_name()) {
        name = sig[i + 2].norm;  // header shows the bare name
        i += 2;
    }

    WrappedUnit unit;
    unit.type = type;
    unit.name = std::move(name);
    unit.payload_b64 = base64_encode(source);
    unit.source_len = source.size();
    return unit;
}

Result<std::string> unwrap_unit(std::string_view wrapped_text) {
    const auto lines = split_lines(wrapped_text);
    if (lines.size() < 4) {
        return make_error(Errc::malformed_header, "fewer than four header lines");
    }
    if (!parse_header_line(lines[0])) {
        return make_error(Errc::malformed_header, "bad unit line");
    }
    if (lines[1] != kMagic) {
        return make_error(Errc::malformed_header, "bad magic line");
    }
    const std::string_view hex = lines[2];
    if (hex.empty() || hex.size() > 16 ||
        hex.find_first_not_of("0123456789abcdef") != std::string_view::npos) {
        return make_error(Errc::malformed_header, "bad length line");
    }
    std::size_t declared = 0;
    for (char c : hex) {
        declared = declared * 16 + static_cast<std::size_t>(
                                       c <= '9' ? c - '0' : c - 'a' + 10);
    }
    if (lines[3] != kSeal) {
        return make_error(Errc::malformed_header, "bad seal line");
    }
    std::string payload;
    for (std::size_t i = 4; i < lines.size(); ++i) {
        for (char c : lines[i]) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                payload.push_back(c);
            }
        }
    }
    const auto decoded = base64_decode(payload);
    if (!decoded) {
        return make_error(Errc::bad_payload, "payload is not valid base64");
    }
    if (decoded->size() != declared) {
        return make_error(Errc::length_mismatch,
                          "declared " + std::to_string(declared) + " bytes, payload holds " +
                              std::to_string(decoded->size()));
    }
    return *decoded;
}

bool looks_wrapped(std::string_view text) {
    const auto lines = split_lines(text);
    return lines.size() >= 2 && parse_header_line(lines[0]).has_value() && lines[1] == kMagic;
}

Result<WrapFileReport> wrap_file(const std::filesystem::path& iname,
                                 const std::optional<std::filesystem::path>& oname) {
    std::filesystem::path input = iname;
    if (!input.has_extension()) {
        input.replace_extension(".sql");
    }
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        return make_error(Errc::file_not_found, "cannot read " + input.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();

    std::string out;
    std::size_t units_wrapped = 0;
    std::size_t unit_no = 0;
    for (const sql::Segment& seg : sql::split_script(content)) {
        if (sql::is_blank(seg.text)) {
            out += seg.text;
            out += seg.terminator;
            continue;
        }
        ++unit_no;
        const std::size_t lead =
            std::min(seg.text.find_first_not_of(" \t\r\n"), seg.text.size());
        const std::string_view body = std::string_view(seg.text).substr(lead);
        if (looks_wrapped(body)) {
            out += seg.text;  // wrapping twice must not scramble the unit
            out += seg.terminator;
            continue;
        }
        auto unit = wrap_unit(seg.text);
        if (unit.ok()) {
            out += seg.text.substr(0, lead);
            out += unit.value().to_text();
            out += seg.terminator;
            ++units_wrapped;
            continue;
        }
        const Errc code = unit.error().code;
        if (code == Errc::trigger_not_wrappable) {
            return make_error(code, input.string() + ": unit " + std::to_string(unit_no) +
                                        ": " + unit.error().message);
        }
        out += seg.text;  // not a wrappable unit: copied through untouched
        out += seg.terminator;
    }

    const std::filesystem::path output =
        oname ? *oname : std::filesystem::path(input).replace_extension(".plb");
    std::ofstream os(output, std::ios::binary | std::ios::trunc);
    if (!os || !(os << out).flush()) {
        return make_error(Errc::storage_failure, "cannot write " + output.string());
    }
    return WrapFileReport{output, units_wrapped};
}

Result<ObjectRef> create_wrapped(db::Catalog& catalog, std::string_view source,
                                 std::string_view default_schema) {
    const sql::ParsedStatement stmt = sql::classify(source, default_schema);
    if (stmt.error) {
        return make_error(Errc::unrecognized_unit, stmt.error->message);
    }
    if (stmt.verb != "CREATE" || stmt.targets.empty()) {
        return make_error(Errc::unrecognized_unit, "source is not a CREATE statement");
    }
    auto unit = wrap_unit(source);
    if (!unit.ok()) {
        return unit.error();
    }
    ObjectRef ref = stmt.targets.front();
    switch (unit.value().type) {
        case UnitType::Procedure: ref.type = ObjectType::Procedure; break;
        case UnitType::Function: ref.type = ObjectType::Function; break;
        case UnitType::Package: ref.type = ObjectType::Package; break;
        case UnitType::PackageBody: ref.type = ObjectType::PackageBody; break;
        case UnitType::TypeSpec:
        case UnitType::TypeBody:
            return make_error(Errc::unrecognized_unit, "TYPE units are not modeled");
    }
    if (!stmt.is_or_replace && catalog.find(ref)) {
        return make_error(Errc::create_failure, to_string(ref) + " already exists");
    }
    db::CatalogObject obj;
    obj.ref = ref;
    obj.source = unit.value().to_text();
    obj.wrapped = true;
    obj.created_at = now_utc();
    catalog.install(std::move(obj));
    return ref;
}

}  // namespace guard::wraptool
