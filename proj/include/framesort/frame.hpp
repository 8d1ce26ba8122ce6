#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "framesort/errors.hpp"

namespace framesort {

/// Bit layout of a fixed-width data frame.
///
/// A frame is frame_bits wide, held as frame_bits/word_bits machine words
/// (word 0 = least significant). A contiguous ts_width-bit timestamp field
/// sits at bit offset ts_offset (LSB of the field, counted from bit 0 of the
/// frame). The defaults describe a 48-bit frame of three 16-bit words with
/// an 8-bit timestamp at bits 16..23.
///
/// The timestamp field may straddle word boundaries; extraction treats the
/// frame as one frame_bits-wide integer.
struct FrameLayout {
    unsigned frame_bits = 48;
    unsigned word_bits = 16;
    unsigned ts_offset = 16;
    unsigned ts_width = 8;

    /// Default ceiling for ts_width: keeps the 2^k histogram desk-scale.
    static constexpr unsigned kDefaultMaxTsWidth = 24;

    /// Throws LayoutError unless the layout is internally consistent:
    /// word_bits in [1,32], frame_bits a positive multiple of word_bits,
    /// the timestamp field inside the frame, and 1 <= ts_width <= max_ts_width.
    void validate(unsigned max_ts_width = kDefaultMaxTsWidth) const;

    unsigned word_count() const { return frame_bits / word_bits; }

    /// Bytes per frame in the binary encoding. Valid only when
    /// word_bits is a multiple of 8.
    unsigned frame_bytes() const { return frame_bits / 8; }

    std::uint32_t word_mask() const {
        return word_bits >= 32 ? ~std::uint32_t{0}
                               : (std::uint32_t{1} << word_bits) - 1;
    }

    std::uint32_t ts_mask() const { return (std::uint32_t{1} << ts_width) - 1; }

    bool operator==(const FrameLayout&) const = default;
};

/// One fixed-width data record: an ordered sequence of word values,
/// words[0] least significant. Immutable by convention once built; all
/// codec operations take frames by const reference and return new values.
struct Frame {
    std::vector<std::uint32_t> words;

    bool operator==(const Frame&) const = default;
};

/// True iff the frame has the layout's word count and every word value
/// fits in word_bits.
bool conforms(const Frame& frame, const FrameLayout& layout) noexcept;

/// Throws MalformedFrameError with a description unless conforms().
void require_conforms(const Frame& frame, const FrameLayout& layout);

/// Timestamp extraction without the conformance check. Callers must have
/// validated the frame against the layout beforehand.
std::uint32_t extract_timestamp_unchecked(const Frame& frame,
                                          const FrameLayout& layout) noexcept;

/// Extracts the timestamp key: (frame as integer >> ts_offset) masked to
/// ts_width bits. Result is always < 2^ts_width.
/// Throws MalformedFrameError if the frame does not conform to the layout.
std::uint32_t extract_timestamp(const Frame& frame, const FrameLayout& layout);

/// Overwrites the timestamp field with `key`, leaving every other bit
/// untouched. Throws MalformedFrameError / KeyOutOfRangeError on a
/// non-conforming frame or a key that does not fit in ts_width bits.
void store_timestamp(Frame& frame, const FrameLayout& layout, std::uint32_t key);

/// Serializes a frame to frame_bits/8 bytes: words in order (word 0 first),
/// each word little-endian. Throws LayoutError when word_bits is not a
/// multiple of 8, MalformedFrameError on a non-conforming frame.
std::vector<std::uint8_t> encode_frame(const Frame& frame, const FrameLayout& layout);

/// Exact inverse of encode_frame. Throws TruncatedFrameError when the byte
/// count is not frame_bits/8, LayoutError on a non-byte-aligned word size.
Frame decode_frame(std::span<const std::uint8_t> bytes, const FrameLayout& layout);

/// Parses one hex text line: exactly frame_bits/4 hex digits, most
/// significant nibble first, optional surrounding whitespace. Throws
/// HexParseError (with 0-based character position) on a bad digit or
/// wrong length, LayoutError when frame_bits is not a multiple of 4.
Frame parse_hex_frame(std::string_view line, const FrameLayout& layout);

/// Formats a frame as frame_bits/4 uppercase hex digits, most significant
/// nibble first. Inverse of parse_hex_frame.
std::string format_hex_frame(const Frame& frame, const FrameLayout& layout);

}  // namespace framesort
