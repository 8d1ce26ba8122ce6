#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "framesort/stream_sorter.hpp"

namespace framesort {

/// TCP service that accepts a raw binary frame stream on each connection
/// and writes back the time-ordered stream.
///
/// Wire protocol: concatenated binary frames in both directions, no
/// length prefix, no handshake; the layout is server configuration.
/// Emissions are written as soon as each batch's merge completes. The
/// client half-closing its write side ends the stream: remaining frames
/// are flushed, written back sorted, and the connection is closed.
///
/// Each connection gets its own ContinuousSorter; nothing is shared
/// between connections except the read-only configuration. Violation
/// reports and decode errors go to the diagnostic stream as single-line
/// key=value records, never into the frame output.
class FrameServer {
public:
    /// Binds and listens (port 0 picks an ephemeral port; see port()).
    /// Throws IoError when the address cannot be bound.
    FrameServer(std::string host, std::uint16_t port, StreamConfig config,
                std::ostream* diagnostics = nullptr);
    ~FrameServer();

    FrameServer(const FrameServer&) = delete;
    FrameServer& operator=(const FrameServer&) = delete;

    /// Port actually bound.
    std::uint16_t port() const { return port_; }

    /// Accept loop on the calling thread; returns after stop().
    void run();

    /// run() on a background thread.
    void start();

    /// Stops accepting, closes the listener and joins every worker.
    void stop();

private:
    void handle_connection(int fd);
    void diag(const std::string& line);

    StreamConfig config_;
    std::ostream* diagnostics_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex workers_mutex_;
    std::vector<std::thread> workers_;
    std::mutex diag_mutex_;
};

}  // namespace framesort
