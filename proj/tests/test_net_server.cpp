#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <sstream>
#include <thread>

#include "framesort/frame_io.hpp"
#include "framesort/net_server.hpp"
#include "oracles.hpp"

using namespace framesort;

namespace {

const FrameLayout kDefault{};

StreamConfig test_config(std::uint32_t half_batch) {
    StreamConfig c;
    c.half_batch = half_batch;
    c.layout = kDefault;
    return c;
}

// Blocking test client: send everything, half-close, then read until EOF.
// Throws IoError on socket failures (safe to call from worker threads).
std::vector<std::uint8_t> roundtrip(std::uint16_t port,
                                    const std::vector<std::uint8_t>& payload) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw IoError("client socket failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw IoError("client connect failed");
    }

    std::size_t sent = 0;
    while (sent < payload.size()) {
        const ssize_t n =
            ::send(fd, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) {
            ::close(fd);
            throw IoError("client send failed");
        }
        sent += static_cast<std::size_t>(n);
    }
    ::shutdown(fd, SHUT_WR);  // end of stream; keep reading

    std::vector<std::uint8_t> reply;
    std::uint8_t buf[4096];
    for (;;) {
        const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
        if (n == 0) break;
        if (n < 0) {
            ::close(fd);
            throw IoError("client recv failed");
        }
        reply.insert(reply.end(), buf, buf + n);
    }
    ::close(fd);
    return reply;
}

std::vector<std::uint8_t> encode_all(const std::vector<Frame>& frames) {
    std::vector<std::uint8_t> bytes;
    for (const Frame& f : frames) {
        const auto b = encode_frame(f, kDefault);
        bytes.insert(bytes.end(), b.begin(), b.end());
    }
    return bytes;
}

std::vector<Frame> decode_all(const std::vector<std::uint8_t>& bytes) {
    std::vector<Frame> frames;
    const unsigned fb = kDefault.frame_bytes();
    if (bytes.size() % fb != 0) throw IoError("reply is not frame-aligned");
    for (std::size_t off = 0; off < bytes.size(); off += fb)
        frames.push_back(decode_frame(std::span(bytes.data() + off, fb), kDefault));
    return frames;
}

// Library-level reference for what a connection must return.
std::vector<Frame> library_result(const std::vector<Frame>& stream,
                                  const StreamConfig& config) {
    ContinuousSorter sorter(config);
    std::vector<Frame> out;
    std::size_t i = 0;
    while (stream.size() - i >= config.half_batch) {
        std::vector<Frame> batch(stream.begin() + i,
                                 stream.begin() + i + config.half_batch);
        for (auto& f : sorter.push_batch(std::move(batch)).emitted)
            out.push_back(std::move(f));
        i += config.half_batch;
    }
    std::vector<Frame> tail(stream.begin() + i, stream.end());
    for (auto& f : sorter.flush(std::move(tail)).emitted) out.push_back(std::move(f));
    return out;
}

}  // namespace

TEST_CASE("a connection receives its whole stream back, globally sorted") {
    std::ostringstream diag;
    FrameServer server("127.0.0.1", 0, test_config(4), &diag);
    server.start();

    const auto stream =
        oracles::marked_frames(kDefault, {5, 1, 7, 3, 2, 8, 6, 4});  // 2 batches
    const auto reply = decode_all(roundtrip(server.port(), encode_all(stream)));
    server.stop();

    CHECK(reply == library_result(stream, test_config(4)));
    const auto ts = oracles::timestamps_of(reply, kDefault);
    CHECK(std::is_sorted(ts.begin(), ts.end()));
    CHECK(oracles::same_frame_multiset(reply, stream));
}

TEST_CASE("a short remainder takes the flush path") {
    std::ostringstream diag;
    FrameServer server("127.0.0.1", 0, test_config(4), &diag);
    server.start();

    const auto stream = oracles::marked_frames(kDefault, {5, 1, 7, 3, 2, 9});  // 4+2
    const auto reply = decode_all(roundtrip(server.port(), encode_all(stream)));
    server.stop();

    CHECK(reply == library_result(stream, test_config(4)));
    CHECK(oracles::same_frame_multiset(reply, stream));
}

TEST_CASE("an empty stream closes cleanly with no frames") {
    std::ostringstream diag;
    FrameServer server("127.0.0.1", 0, test_config(4), &diag);
    server.start();
    CHECK(roundtrip(server.port(), {}).empty());
    server.stop();
    CHECK(diag.str().empty());
}

TEST_CASE("concurrent clients each get their own sorted stream") {
    std::ostringstream diag;
    FrameServer server("127.0.0.1", 0, test_config(2), &diag);
    server.start();

    // Disjoint payload markers: client A uses 100+, client B uses 200+.
    std::vector<Frame> a, b;
    for (std::uint32_t i = 0; i < 8; ++i) {
        a.push_back(oracles::marked_frame(kDefault, 7 - (i % 8), 100 + i));
        b.push_back(oracles::marked_frame(kDefault, i % 8, 200 + i));
    }

    std::vector<Frame> reply_a, reply_b;
    std::string error_a, error_b;
    std::thread ta([&] {
        try {
            reply_a = decode_all(roundtrip(server.port(), encode_all(a)));
        } catch (const std::exception& e) {
            error_a = e.what();
        }
    });
    std::thread tb([&] {
        try {
            reply_b = decode_all(roundtrip(server.port(), encode_all(b)));
        } catch (const std::exception& e) {
            error_b = e.what();
        }
    });
    ta.join();
    tb.join();
    server.stop();
    CHECK(error_a.empty());
    CHECK(error_b.empty());

    CHECK(oracles::same_frame_multiset(reply_a, a));
    CHECK(oracles::same_frame_multiset(reply_b, b));
    for (const Frame& f : reply_a) CHECK(f.words[0] >= 100);
    for (const Frame& f : reply_a) CHECK(f.words[0] < 200);
    for (const Frame& f : reply_b) CHECK(f.words[0] >= 200);
}

TEST_CASE("a truncated stream is reported on the diagnostic channel") {
    std::ostringstream diag;
    FrameServer server("127.0.0.1", 0, test_config(2), &diag);
    server.start();

    auto payload = encode_all(oracles::marked_frames(kDefault, {3, 1}));
    payload.push_back(0x7f);  // half a frame
    (void)roundtrip(server.port(), payload);
    server.stop();

    CHECK(diag.str().find("error=decode") != std::string::npos);
    CHECK(diag.str().find("offset=12") != std::string::npos);
}

TEST_CASE("violations show up as key=value diagnostic records") {
    std::ostringstream diag;
    FrameServer server("127.0.0.1", 0, test_config(1), &diag);
    server.start();

    // Three one-frame batches with ts 9, 10, 7: batch 2 undercuts batch 0.
    const auto stream = oracles::marked_frames(kDefault, {9, 10, 7});
    const auto reply = decode_all(roundtrip(server.port(), encode_all(stream)));
    server.stop();

    CHECK(oracles::same_frame_multiset(reply, stream));  // warn keeps frames
    CHECK(diag.str().find("violation batch=2 offending_min=7 required_floor=9") !=
          std::string::npos);
}
