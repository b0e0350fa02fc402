#include "guard/result.hpp"

namespace guard {

std::string_view errc_token(Errc code) {
    switch (code) {
        case Errc::empty_statement: return "empty_statement";
        case Errc::malformed_statement: return "malformed_statement";
        case Errc::unterminated_string: return "unterminated_string";
        case Errc::unterminated_comment: return "unterminated_comment";
        case Errc::bad_password: return "bad_password";
        case Errc::weak_password: return "weak_password";
        case Errc::duplicate_object: return "duplicate_object";
        case Errc::invalid_identifier: return "invalid_identifier";
        case Errc::invalid_type: return "invalid_type";
        case Errc::not_found: return "not_found";
        case Errc::guard_object_immutable: return "guard_object_immutable";
        case Errc::object_not_protected: return "object_not_protected";
        case Errc::invalid_window: return "invalid_window";
        case Errc::duplicate_grant: return "duplicate_grant";
        case Errc::grant_not_found: return "grant_not_found";
        case Errc::invalid_range: return "invalid_range";
        case Errc::duplicate_session: return "duplicate_session";
        case Errc::corrupt_state: return "corrupt_state";
        case Errc::storage_failure: return "storage_failure";
        case Errc::notify_failure: return "notify_failure";
        case Errc::not_initialized: return "not_initialized";
        case Errc::already_initialized: return "already_initialized";
        case Errc::no_such_object: return "no_such_object";
        case Errc::unknown_view: return "unknown_view";
        case Errc::create_failure: return "create_failure";
        case Errc::trigger_not_wrappable: return "trigger_not_wrappable";
        case Errc::anonymous_block_not_wrappable: return "anonymous_block_not_wrappable";
        case Errc::unrecognized_unit: return "unrecognized_unit";
        case Errc::malformed_header: return "malformed_header";
        case Errc::length_mismatch: return "length_mismatch";
        case Errc::bad_payload: return "bad_payload";
        case Errc::file_not_found: return "file_not_found";
        case Errc::bind_failure: return "bind_failure";
        case Errc::auth_failure: return "auth";
        case Errc::frame_too_large: return "frame_too_large";
        case Errc::protocol_violation: return "protocol";
        case Errc::unknown_command: return "unknown_command";
        case Errc::connect_failure: return "connect_failure";
        case Errc::bad_request: return "bad_request";
    }
    return "error";
}

}  // namespace guard
