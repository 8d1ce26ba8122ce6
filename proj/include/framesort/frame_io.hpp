#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "framesort/frame.hpp"

namespace framesort {

enum class FrameFormat { binary, hex };

/// Pulls frames one at a time from a binary or hex text stream.
///
/// Binary: frames are concatenated encode_frame outputs, no delimiters.
/// A trailing partial frame raises TruncatedFrameError naming the byte
/// offset where the incomplete frame starts.
///
/// Hex: one frame per line (frame_bits/4 hex digits), blank lines
/// ignored, lines starting with '#' are comments. Errors carry the
/// 1-based line number in the message.
class FrameReader {
public:
    FrameReader(std::istream& in, FrameLayout layout, FrameFormat format);

    /// Next frame, or nullopt at clean end of stream.
    std::optional<Frame> next();

    std::uint64_t frames_read() const { return frames_read_; }
    std::uint64_t byte_offset() const { return byte_offset_; }
    std::uint64_t line_number() const { return line_number_; }

private:
    std::optional<Frame> next_binary();
    std::optional<Frame> next_hex();

    std::istream& in_;
    FrameLayout layout_;
    FrameFormat format_;
    std::uint64_t frames_read_ = 0;
    std::uint64_t byte_offset_ = 0;
    std::uint64_t line_number_ = 0;
};

/// Writes frames in arrival order; flush() forwards to the stream.
class FrameWriter {
public:
    FrameWriter(std::ostream& out, FrameLayout layout, FrameFormat format);

    void write(const Frame& frame);
    void write_all(const std::vector<Frame>& frames);
    void flush();

private:
    std::ostream& out_;
    FrameLayout layout_;
    FrameFormat format_;
};

/// Reads up to max_frames frames; a short (possibly empty) result means
/// the stream ended.
std::vector<Frame> read_batch(FrameReader& reader, std::size_t max_frames);

/// Splits a whole stream into batches of half_batch frames; the final
/// batch may be short. Every frame appears in exactly one batch, in
/// arrival order.
std::vector<std::vector<Frame>> read_batches(FrameReader& reader,
                                             std::size_t half_batch);

}  // namespace framesort
