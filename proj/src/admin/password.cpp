#include "guard/admin/password.hpp"

#include <openssl/crypto.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <array>
#include <stdexcept>

namespace guard::admin {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";
constexpr std::string_view kPasswordAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

std::string to_hex(const unsigned char* data, std::size_t n) {
    std::string out;
    out.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(kHexDigits[data[i] >> 4]);
        out.push_back(kHexDigits[data[i] & 0x0f]);
    }
    return out;
}

}  // namespace

std::string random_hex(std::size_t nbytes) {
    std::string buf(nbytes, '\0');
    if (RAND_bytes(reinterpret_cast<unsigned char*>(buf.data()),
                   static_cast<int>(nbytes)) != 1) {
        throw std::runtime_error("RAND_bytes failed");
    }
    return to_hex(reinterpret_cast<const unsigned char*>(buf.data()), nbytes);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, SHA256_DIGEST_LENGTH> digest;
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest.data());
    return to_hex(digest.data(), digest.size());
}

std::string password_digest(std::string_view salt_hex, std::string_view password) {
    std::string salted;
    salted.reserve(salt_hex.size() + password.size());
    salted.append(salt_hex);
    salted.append(password);
    return sha256_hex(salted);
}

bool verify_digest(std::string_view salt_hex, std::string_view digest_hex,
                   std::string_view password) {
    const std::string expected = password_digest(salt_hex, password);
    if (expected.size() != digest_hex.size()) {
        return false;
    }
    return CRYPTO_memcmp(expected.data(), digest_hex.data(), expected.size()) == 0;
}

std::string generate_password(std::size_t length) {
    // rejection sampling: 248 = 4 * 62 keeps the draw uniform
    std::string out;
    out.reserve(length);
    while (out.size() < length) {
        unsigned char byte = 0;
        if (RAND_bytes(&byte, 1) != 1) {
            throw std::runtime_error("RAND_bytes failed");
        }
        if (byte < 248) {
            out.push_back(kPasswordAlphabet[byte % kPasswordAlphabet.size()]);
        }
    }
    return out;
}

}  // namespace guard::admin
