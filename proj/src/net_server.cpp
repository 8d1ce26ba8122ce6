#include "framesort/net_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>
#include <sstream>

#include "framesort/frame_io.hpp"

namespace framesort {

namespace {

// recv until `want` bytes or EOF; returns bytes actually read.
std::size_t recv_exact(int fd, std::uint8_t* buf, std::size_t want) {
    std::size_t got = 0;
    while (got < want) {
        const ssize_t n = ::recv(fd, buf + got, want - got, 0);
        if (n == 0) break;
        if (n < 0) {
            if (errno == EINTR) continue;
            throw IoError(std::string("recv failed: ") + std::strerror(errno));
        }
        got += static_cast<std::size_t>(n);
    }
    return got;
}

void send_all(int fd, const std::uint8_t* buf, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t n = ::send(fd, buf + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw IoError(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

}  // namespace

FrameServer::FrameServer(std::string host, std::uint16_t port, StreamConfig config,
                         std::ostream* diagnostics)
    : config_(std::move(config)),
      diagnostics_(diagnostics ? diagnostics : &std::cerr) {
    config_.validate();
    if (config_.layout.word_bits % 8 != 0)
        throw LayoutError("the wire format requires word_bits to be a multiple of 8");

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0)
        throw IoError(std::string("socket failed: ") + std::strerror(errno));

    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw IoError("invalid listen address: " + host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
        ::listen(listen_fd_, 16) < 0) {
        const std::string why = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw IoError("cannot listen on " + host + ":" + std::to_string(port) +
                      ": " + why);
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len) == 0)
        port_ = ntohs(bound.sin_port);
}

FrameServer::~FrameServer() { stop(); }

void FrameServer::diag(const std::string& line) {
    std::lock_guard lock(diag_mutex_);
    (*diagnostics_) << line << '\n';
    diagnostics_->flush();
}

void FrameServer::run() {
    for (;;) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) continue;
            if (stopping_) return;
            throw IoError(std::string("accept failed: ") + std::strerror(errno));
        }
        std::lock_guard lock(workers_mutex_);
        workers_.emplace_back([this, fd] { handle_connection(fd); });
    }
}

void FrameServer::start() {
    accept_thread_ = std::thread([this] {
        try {
            run();
        } catch (const std::exception& e) {
            diag(std::string("error=server detail=\"") + e.what() + "\"");
        }
    });
}

void FrameServer::stop() {
    if (stopping_.exchange(true)) return;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::lock_guard lock(workers_mutex_);
    for (std::thread& t : workers_)
        if (t.joinable()) t.join();
    workers_.clear();
}

void FrameServer::handle_connection(int fd) {
    const unsigned frame_bytes = config_.layout.frame_bytes();
    const std::size_t batch_bytes = std::size_t{config_.half_batch} * frame_bytes;
    std::vector<std::uint8_t> in_buf(batch_bytes);
    std::vector<std::uint8_t> out_buf;
    ContinuousSorter sorter(config_);

    const auto send_frames = [&](const std::vector<Frame>& frames) {
        out_buf.clear();
        for (const Frame& f : frames) {
            const std::vector<std::uint8_t> bytes = encode_frame(f, config_.layout);
            out_buf.insert(out_buf.end(), bytes.begin(), bytes.end());
        }
        send_all(fd, out_buf.data(), out_buf.size());
    };

    const auto report = [&](const std::vector<ViolationReport>& violations) {
        for (const ViolationReport& v : violations) {
            std::ostringstream line;
            line << "violation batch=" << v.batch_index
                 << " offending_min=" << v.offending_min
                 << " required_floor=" << v.required_floor;
            diag(line.str());
        }
    };

    try {
        std::uint64_t received = 0;
        for (;;) {
            const std::size_t got = recv_exact(fd, in_buf.data(), batch_bytes);
            if (got % frame_bytes != 0) {
                // Malformed stream: a frame was cut off mid-frame.
                std::ostringstream line;
                line << "error=decode offset="
                     << received + (got / frame_bytes) * frame_bytes
                     << " detail=\"truncated frame: got " << got % frame_bytes
                     << " of " << frame_bytes << " bytes\"";
                diag(line.str());
                break;
            }
            received += got;
            std::vector<Frame> batch;
            batch.reserve(got / frame_bytes);
            for (std::size_t off = 0; off < got; off += frame_bytes)
                batch.push_back(decode_frame(
                    std::span(in_buf.data() + off, frame_bytes), config_.layout));

            if (got == batch_bytes) {
                PushResult r = sorter.push_batch(std::move(batch));
                report(r.violations);
                if (!r.emitted.empty()) send_frames(r.emitted);
            } else {
                // Half-close: end of stream. Short remainder takes the
                // flush path, then everything left goes out.
                PushResult r = sorter.flush(std::move(batch));
                report(r.violations);
                if (!r.emitted.empty()) send_frames(r.emitted);
                break;
            }
        }
    } catch (const ConstraintViolationError& e) {
        report({e.report});
        diag(std::string("error=constraint detail=\"") + e.what() + "\"");
    } catch (const std::exception& e) {
        diag(std::string("error=connection detail=\"") + e.what() + "\"");
    }
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
}

}  // namespace framesort
