#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "guard/result.hpp"

namespace guard::net {

// Hard cap on any framed payload or protocol line.
inline constexpr std::size_t kMaxFrame = 1024 * 1024;

// Connected stream socket with a buffered line reader. Owns the fd; move
// only. shutdown() may be called from another thread to unblock a pending
// read — close() may not, the owner closes.
class Conn {
public:
    Conn() = default;
    explicit Conn(int fd) : fd_(fd) {}
    ~Conn();

    Conn(Conn&& other) noexcept;
    Conn& operator=(Conn&& other) noexcept;
    Conn(const Conn&) = delete;
    Conn& operator=(const Conn&) = delete;

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    void close();
    void shutdown();

    // One '\n'-terminated line, terminator and trailing '\r' stripped.
    // Lines longer than max_len fail with frame_too_large.
    Result<std::string> recv_line(std::size_t max_len = kMaxFrame + 64);
    Result<std::string> recv_exact(std::size_t n);
    Result<void> send_all(std::string_view data);

private:
    int fd_ = -1;
    std::string buf_;
};

Result<Conn> dial(const std::string& host, int port);

// Loopback-only listener. Port 0 binds an ephemeral port; port() reports
// the one actually bound.
class Listener {
public:
    static Result<Listener> bind_loopback(int port);

    Listener() = default;
    ~Listener();
    Listener(Listener&& other) noexcept;
    Listener& operator=(Listener&& other) noexcept;
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;

    bool valid() const { return fd_ >= 0; }
    int port() const { return port_; }

    // Blocks until a client connects or wake_fd becomes readable; the
    // latter returns connect_failure("stopped").
    Result<Conn> accept(int wake_fd);

    void close();

private:
    int fd_ = -1;
    int port_ = 0;
};

}  // namespace guard::net
