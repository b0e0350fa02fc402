#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace guard::admin {

// CSPRNG bytes rendered as lowercase hex
std::string random_hex(std::size_t nbytes);

std::string sha256_hex(std::string_view data);

// digest over the salt's hex text concatenated with the password
std::string password_digest(std::string_view salt_hex, std::string_view password);

// constant-time comparison against the stored digest
bool verify_digest(std::string_view salt_hex, std::string_view digest_hex,
                   std::string_view password);

// alphanumeric, uniformly drawn from the CSPRNG
std::string generate_password(std::size_t length = 16);

}  // namespace guard::admin
