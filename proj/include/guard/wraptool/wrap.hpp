#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "guard/db/catalog.hpp"
#include "guard/result.hpp"

namespace guard::wraptool {

enum class UnitType { Procedure, Function, Package, PackageBody, TypeSpec, TypeBody };

// header spelling: "PACKAGE BODY", "TYPE" for a type specification, "TYPE BODY"
std::string_view unit_keyword(UnitType type);

// Obfuscated form of one PL/SQL unit. Deliberately reversible — the
// payload is plain base64 of the source bytes — because the point being
// made is that wrapping is encoding, not protection.
struct WrappedUnit {
    UnitType type = UnitType::Procedure;
    std::string name;         // uppercase-normalized, dictionary display form
    std::string payload_b64;  // 64-column lines
    std::size_t source_len = 0;

    // "<keyword> <NAME> WRAPPED" / "a000000" / length in lowercase hex /
    // "abcd" / payload
    std::string to_text() const;
};

// source may carry a CREATE [OR REPLACE] prefix; triggers and anonymous
// blocks refuse, anything else unrecognized errors out
Result<WrappedUnit> wrap_unit(std::string_view source);

// exact inverse: returns the original source bytes
Result<std::string> unwrap_unit(std::string_view wrapped_text);

// cheap test: does this text start with a plausible wrapped header?
bool looks_wrapped(std::string_view text);

struct WrapFileReport {
    std::filesystem::path output;
    std::size_t units_wrapped = 0;
};

// Wraps every wrappable unit in the file; other statements and
// already-wrapped units are copied verbatim. iname without extension
// implies ".sql"; default output is the input stem + ".plb".
Result<WrapFileReport> wrap_file(const std::filesystem::path& iname,
                                 const std::optional<std::filesystem::path>& oname);

// CREATE_WRAPPED analogue: wraps the source and installs the wrapped text
// in the catalog, so dictionary views show the encoded lines.
Result<ObjectRef> create_wrapped(db::Catalog& catalog, std::string_view source,
                                 std::string_view default_schema);

}  // namespace guard::wraptool
