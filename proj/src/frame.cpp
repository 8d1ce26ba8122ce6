#include "framesort/frame.hpp"

#include <cctype>
#include <sstream>

namespace framesort {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

char hex_char(unsigned v) { return "0123456789ABCDEF"[v & 0xF]; }

// Value of the single frame bit at position `bit` (0 = frame LSB).
unsigned get_bit(const Frame& f, const FrameLayout& l, unsigned bit) {
    return (f.words[bit / l.word_bits] >> (bit % l.word_bits)) & 1u;
}

void set_bit(Frame& f, const FrameLayout& l, unsigned bit, unsigned value) {
    std::uint32_t& w = f.words[bit / l.word_bits];
    const std::uint32_t m = std::uint32_t{1} << (bit % l.word_bits);
    w = value ? (w | m) : (w & ~m);
}

}  // namespace

void FrameLayout::validate(unsigned max_ts_width) const {
    std::ostringstream err;
    if (word_bits < 1 || word_bits > 32)
        err << "word_bits must be in [1,32], got " << word_bits;
    else if (frame_bits == 0 || frame_bits % word_bits != 0)
        err << "frame_bits (" << frame_bits
            << ") must be a positive multiple of word_bits (" << word_bits << ")";
    else if (ts_width < 1 || ts_width > max_ts_width)
        err << "ts_width must be in [1," << max_ts_width << "], got " << ts_width;
    else if (ts_offset + ts_width > frame_bits)
        err << "timestamp field [" << ts_offset << "," << ts_offset + ts_width
            << ") exceeds frame_bits " << frame_bits;
    else
        return;
    throw LayoutError("invalid frame layout: " + err.str());
}

bool conforms(const Frame& frame, const FrameLayout& layout) noexcept {
    if (frame.words.size() != layout.word_count()) return false;
    const std::uint32_t mask = layout.word_mask();
    for (std::uint32_t w : frame.words)
        if (w & ~mask) return false;
    return true;
}

void require_conforms(const Frame& frame, const FrameLayout& layout) {
    if (frame.words.size() != layout.word_count()) {
        std::ostringstream err;
        err << "malformed frame: expected " << layout.word_count()
            << " words, got " << frame.words.size();
        throw MalformedFrameError(err.str());
    }
    const std::uint32_t mask = layout.word_mask();
    for (std::size_t i = 0; i < frame.words.size(); ++i) {
        if (frame.words[i] & ~mask) {
            std::ostringstream err;
            err << "malformed frame: word " << i << " value 0x" << std::hex
                << frame.words[i] << " exceeds " << std::dec << layout.word_bits
                << " bits";
            throw MalformedFrameError(err.str());
        }
    }
}

std::uint32_t extract_timestamp_unchecked(const Frame& frame,
                                          const FrameLayout& layout) noexcept {
    // Gather the words overlapping [ts_offset, ts_offset + ts_width) into a
    // 64-bit accumulator aligned so the field's LSB lands at bit 0.
    const unsigned first = layout.ts_offset / layout.word_bits;
    const unsigned last = (layout.ts_offset + layout.ts_width - 1) / layout.word_bits;
    std::uint64_t acc = 0;
    for (unsigned w = first; w <= last; ++w) {
        const int shift = static_cast<int>(w * layout.word_bits) -
                          static_cast<int>(layout.ts_offset);
        const std::uint64_t word = frame.words[w];
        acc |= shift >= 0 ? word << shift : word >> -shift;
    }
    return static_cast<std::uint32_t>(acc) & layout.ts_mask();
}

std::uint32_t extract_timestamp(const Frame& frame, const FrameLayout& layout) {
    require_conforms(frame, layout);
    return extract_timestamp_unchecked(frame, layout);
}

void store_timestamp(Frame& frame, const FrameLayout& layout, std::uint32_t key) {
    require_conforms(frame, layout);
    if (key & ~layout.ts_mask()) {
        std::ostringstream err;
        err << "timestamp 0x" << std::hex << key << " does not fit in "
            << std::dec << layout.ts_width << " bits";
        throw KeyOutOfRangeError(err.str(), 0, key);
    }
    for (unsigned b = 0; b < layout.ts_width; ++b)
        set_bit(frame, layout, layout.ts_offset + b, (key >> b) & 1u);
}

std::vector<std::uint8_t> encode_frame(const Frame& frame, const FrameLayout& layout) {
    if (layout.word_bits % 8 != 0)
        throw LayoutError("binary encoding requires word_bits to be a multiple of 8");
    require_conforms(frame, layout);
    std::vector<std::uint8_t> out;
    out.reserve(layout.frame_bytes());
    for (std::uint32_t w : frame.words)
        for (unsigned b = 0; b < layout.word_bits; b += 8)
            out.push_back(static_cast<std::uint8_t>(w >> b));
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes, const FrameLayout& layout) {
    if (layout.word_bits % 8 != 0)
        throw LayoutError("binary decoding requires word_bits to be a multiple of 8");
    if (bytes.size() != layout.frame_bytes()) {
        std::ostringstream err;
        err << "truncated frame: expected " << layout.frame_bytes()
            << " bytes, got " << bytes.size();
        throw TruncatedFrameError(err.str(), 0);
    }
    Frame f;
    f.words.reserve(layout.word_count());
    std::size_t i = 0;
    for (unsigned w = 0; w < layout.word_count(); ++w) {
        std::uint32_t word = 0;
        for (unsigned b = 0; b < layout.word_bits; b += 8)
            word |= std::uint32_t{bytes[i++]} << b;
        f.words.push_back(word);
    }
    return f;
}

Frame parse_hex_frame(std::string_view line, const FrameLayout& layout) {
    if (layout.frame_bits % 4 != 0)
        throw LayoutError("hex format requires frame_bits to be a multiple of 4");

    // Trim surrounding whitespace; positions reported against the trimmed text.
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    const std::string_view text = line.substr(b, e - b);

    const std::size_t want = layout.frame_bits / 4;
    for (std::size_t i = 0; i < text.size() && i < want; ++i) {
        if (hex_digit(text[i]) < 0) {
            std::ostringstream err;
            err << "invalid hex character '" << text[i] << "' at position " << i;
            throw HexParseError(err.str(), i);
        }
    }
    if (text.size() != want) {
        std::ostringstream err;
        err << "expected " << want << " hex characters, got " << text.size();
        throw HexParseError(err.str(), text.size() < want ? text.size() : want);
    }

    Frame f;
    f.words.assign(layout.word_count(), 0);
    for (std::size_t n = 0; n < want; ++n) {
        const int v = hex_digit(text[n]);
        if (v < 0) {
            std::ostringstream err;
            err << "invalid hex character '" << text[n] << "' at position " << n;
            throw HexParseError(err.str(), n);
        }
        // Nibble n (most significant first) covers frame bits
        // [frame_bits - 4(n+1), frame_bits - 4n).
        const unsigned base = layout.frame_bits - 4 * static_cast<unsigned>(n + 1);
        for (unsigned bit = 0; bit < 4; ++bit)
            set_bit(f, layout, base + bit, (static_cast<unsigned>(v) >> bit) & 1u);
    }
    return f;
}

std::string format_hex_frame(const Frame& frame, const FrameLayout& layout) {
    if (layout.frame_bits % 4 != 0)
        throw LayoutError("hex format requires frame_bits to be a multiple of 4");
    require_conforms(frame, layout);
    std::string out(layout.frame_bits / 4, '0');
    for (std::size_t n = 0; n < out.size(); ++n) {
        const unsigned base = layout.frame_bits - 4 * static_cast<unsigned>(n + 1);
        unsigned v = 0;
        for (unsigned bit = 0; bit < 4; ++bit)
            v |= get_bit(frame, layout, base + bit) << bit;
        out[n] = hex_char(v);
    }
    return out;
}

}  // namespace framesort
