#include "guard/net/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace guard::net {

namespace {

Error sys_error(Errc code, const char* what) {
    return make_error(code, std::string(what) + ": " + std::strerror(errno));
}

}  // namespace

Conn::~Conn() { close(); }

Conn::Conn(Conn&& other) noexcept : fd_(other.fd_), buf_(std::move(other.buf_)) {
    other.fd_ = -1;
}

Conn& Conn::operator=(Conn&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        buf_ = std::move(other.buf_);
        other.fd_ = -1;
    }
    return *this;
}

void Conn::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    buf_.clear();
}

void Conn::shutdown() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
    }
}

Result<std::string> Conn::recv_line(std::size_t max_len) {
    for (;;) {
        const std::size_t pos = buf_.find('\n');
        if (pos != std::string::npos) {
            if (pos > max_len) {
                return make_error(Errc::frame_too_large, "line exceeds limit");
            }
            std::string line = buf_.substr(0, pos);
            buf_.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            return line;
        }
        if (buf_.size() > max_len) {
            return make_error(Errc::frame_too_large, "line exceeds limit");
        }
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n == 0) {
            return make_error(Errc::connect_failure, "connection closed");
        }
        if (n < 0) {
            if (errno == EINTR) continue;
            return sys_error(Errc::connect_failure, "recv");
        }
        buf_.append(chunk, static_cast<std::size_t>(n));
    }
}

Result<std::string> Conn::recv_exact(std::size_t n) {
    std::string out;
    out.reserve(n);
    if (buf_.size() >= n) {
        out = buf_.substr(0, n);
        buf_.erase(0, n);
        return out;
    }
    out = std::move(buf_);
    buf_.clear();
    while (out.size() < n) {
        char chunk[8192];
        const std::size_t want = std::min(n - out.size(), sizeof chunk);
        const ssize_t got = ::recv(fd_, chunk, want, 0);
        if (got == 0) {
            return make_error(Errc::connect_failure, "connection closed");
        }
        if (got < 0) {
            if (errno == EINTR) continue;
            return sys_error(Errc::connect_failure, "recv");
        }
        out.append(chunk, static_cast<std::size_t>(got));
    }
    return out;
}

Result<void> Conn::send_all(std::string_view data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n =
            ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            return sys_error(Errc::connect_failure, "send");
        }
        sent += static_cast<std::size_t>(n);
    }
    return {};
}

Result<Conn> dial(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
    if (rc != 0) {
        return make_error(Errc::connect_failure,
                          "resolve " + host + ": " + ::gai_strerror(rc));
    }
    Error last = make_error(Errc::connect_failure, "no addresses for " + host);
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last = sys_error(Errc::connect_failure, "socket");
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            ::freeaddrinfo(res);
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Conn(fd);
        }
        last = sys_error(Errc::connect_failure, "connect");
        ::close(fd);
    }
    ::freeaddrinfo(res);
    return last;
}

Listener::~Listener() { close(); }

Listener::Listener(Listener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
    other.fd_ = -1;
    other.port_ = 0;
}

Listener& Listener::operator=(Listener&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        port_ = other.port_;
        other.fd_ = -1;
        other.port_ = 0;
    }
    return *this;
}

void Listener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Result<Listener> Listener::bind_loopback(int port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        return sys_error(Errc::bind_failure, "socket");
    }
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        Error e = sys_error(Errc::bind_failure,
                            ("bind port " + std::to_string(port)).c_str());
        ::close(fd);
        return e;
    }
    if (::listen(fd, 64) != 0) {
        Error e = sys_error(Errc::bind_failure, "listen");
        ::close(fd);
        return e;
    }
    socklen_t len = sizeof addr;
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        Error e = sys_error(Errc::bind_failure, "getsockname");
        ::close(fd);
        return e;
    }
    Listener l;
    l.fd_ = fd;
    l.port_ = static_cast<int>(ntohs(addr.sin_port));
    return l;
}

Result<Conn> Listener::accept(int wake_fd) {
    for (;;) {
        pollfd fds[2] = {{fd_, POLLIN, 0}, {wake_fd, POLLIN, 0}};
        const int rc = ::poll(fds, 2, -1);
        if (rc < 0) {
            if (errno == EINTR) continue;
            return sys_error(Errc::connect_failure, "poll");
        }
        if (fds[1].revents != 0) {
            return make_error(Errc::connect_failure, "stopped");
        }
        if (fds[0].revents == 0) {
            continue;
        }
        const int client = ::accept(fd_, nullptr, nullptr);
        if (client < 0) {
            if (errno == EINTR || errno == ECONNABORTED) continue;
            return sys_error(Errc::connect_failure, "accept");
        }
        const int one = 1;
        ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return Conn(client);
    }
}

}  // namespace guard::net
