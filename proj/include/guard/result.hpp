#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace guard {

// One error vocabulary for the whole proxy. Codes double as the
// machine-readable token in `ERR <code> <message>` protocol replies.
enum class Errc {
    // statement analysis
    empty_statement,
    malformed_statement,
    unterminated_string,
    unterminated_comment,
    // admin / policy state
    bad_password,
    weak_password,
    duplicate_object,
    invalid_identifier,
    invalid_type,
    not_found,
    guard_object_immutable,
    object_not_protected,
    invalid_window,
    duplicate_grant,
    grant_not_found,
    invalid_range,
    duplicate_session,
    corrupt_state,
    storage_failure,
    notify_failure,
    not_initialized,
    already_initialized,
    // catalog
    no_such_object,
    unknown_view,
    create_failure,
    // wrap toolkit
    trigger_not_wrappable,
    anonymous_block_not_wrappable,
    unrecognized_unit,
    malformed_header,
    length_mismatch,
    bad_payload,
    file_not_found,
    // network
    bind_failure,
    auth_failure,
    frame_too_large,
    protocol_violation,
    unknown_command,
    connect_failure,
    bad_request,
};

// Wire spelling, e.g. Errc::guard_object_immutable -> "guard_object_immutable".
std::string_view errc_token(Errc code);

struct Error {
    Errc code;
    std::string message;

    bool operator==(const Error&) const = default;
};

inline Error make_error(Errc code, std::string message) {
    return Error{code, std::move(message)};
}

// Minimal expected-style result. value() / error() must only be called on
// the matching state; both assert via variant access.
template <typename T>
class [[nodiscard]] Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    T& value() & { return std::get<T>(v_); }
    const T& value() const& { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }

    Error& error() & { return std::get<Error>(v_); }
    const Error& error() const& { return std::get<Error>(v_); }

private:
    std::variant<T, Error> v_;
};

template <>
class [[nodiscard]] Result<void> {
public:
    Result() = default;
    Result(Error error) : err_(std::move(error)) {}

    bool ok() const { return !err_.has_value(); }
    explicit operator bool() const { return ok(); }

    Error& error() & { return *err_; }
    const Error& error() const& { return *err_; }

private:
    std::optional<Error> err_;
};

}  // namespace guard
