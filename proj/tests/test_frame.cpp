#include <doctest.h>

#include <random>

#include "framesort/frame.hpp"
#include "oracles.hpp"

using namespace framesort;

namespace {

const FrameLayout kDefault{};  // 48/16, ts at bits 16..23

// Independent extraction oracle for frames up to 64 bits: assemble the
// whole frame into one integer and shift.
std::uint32_t shift_oracle(const Frame& f, const FrameLayout& l) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < f.words.size(); ++i)
        value |= std::uint64_t{f.words[i]} << (i * l.word_bits);
    return static_cast<std::uint32_t>(value >> l.ts_offset) & l.ts_mask();
}

}  // namespace

TEST_CASE("layout validation") {
    CHECK_NOTHROW(kDefault.validate());

    FrameLayout bad = kDefault;
    bad.frame_bits = 40;  // not a multiple of 16
    CHECK_THROWS_AS(bad.validate(), LayoutError);

    bad = kDefault;
    bad.ts_offset = 44;  // field would stick out of the frame
    CHECK_THROWS_AS(bad.validate(), LayoutError);

    bad = kDefault;
    bad.ts_width = 0;
    CHECK_THROWS_AS(bad.validate(), LayoutError);

    bad = kDefault;
    bad.ts_width = 25;  // above the histogram cap
    CHECK_THROWS_AS(bad.validate(), LayoutError);
    CHECK_NOTHROW(bad.validate(25));  // cap is adjustable

    bad = kDefault;
    bad.word_bits = 0;
    CHECK_THROWS_AS(bad.validate(), LayoutError);
}

TEST_CASE("extract_timestamp: middle-word low byte on the default layout") {
    const Frame f{{0x1234, 0xAB07, 0x9999}};
    CHECK(extract_timestamp(f, kDefault) == 0x07);

    const Frame zero{{0, 0, 0}};
    CHECK(extract_timestamp(zero, kDefault) == 0);
}

TEST_CASE("extract_timestamp: all-ones frame at offset 20") {
    FrameLayout l = kDefault;
    l.ts_offset = 20;
    const Frame f{{0xFFFF, 0xFFFF, 0xFFFF}};
    CHECK(shift_oracle(f, l) == 0xFF);
    CHECK(extract_timestamp(f, l) == 0xFF);
}

TEST_CASE("extract_timestamp: field straddling a word boundary") {
    FrameLayout l = kDefault;
    l.ts_offset = 12;  // spans words 0 and 1
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Frame f = oracles::random_frame(rng, l);
        CHECK(extract_timestamp(f, l) == shift_oracle(f, l));
    }
}

TEST_CASE("extract_timestamp: malformed frames are rejected") {
    CHECK_THROWS_AS(extract_timestamp(Frame{{0x1234, 0xAB07}}, kDefault),
                    MalformedFrameError);
    CHECK_THROWS_AS(extract_timestamp(Frame{{0x1234, 0x1FFFF, 0x0}}, kDefault),
                    MalformedFrameError);
}

TEST_CASE("extract_timestamp: result fits ts_width and ignores other bits") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        FrameLayout l = kDefault;
        l.ts_width = 1 + static_cast<unsigned>(rng() % 24);
        l.ts_offset = static_cast<unsigned>(rng() % (l.frame_bits - l.ts_width + 1));
        Frame f = oracles::random_frame(rng, l);
        const std::uint32_t key = extract_timestamp(f, l);
        CHECK(key < (std::uint32_t{1} << l.ts_width));

        // Flip one bit outside the field: the key must not move.
        const unsigned outside_bits = l.frame_bits - l.ts_width;
        if (outside_bits == 0) continue;
        unsigned bit = static_cast<unsigned>(rng() % outside_bits);
        if (bit >= l.ts_offset) bit += l.ts_width;
        f.words[bit / l.word_bits] ^= std::uint32_t{1} << (bit % l.word_bits);
        CHECK(extract_timestamp(f, l) == key);
    }
}

TEST_CASE("store_timestamp round-trips and leaves payload bits alone") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Frame original = oracles::random_frame(rng, kDefault);
        Frame f = original;
        const std::uint32_t key = static_cast<std::uint32_t>(rng()) & kDefault.ts_mask();
        store_timestamp(f, kDefault, key);
        CHECK(extract_timestamp(f, kDefault) == key);
        // Restoring the original key restores the original frame.
        store_timestamp(f, kDefault, extract_timestamp(original, kDefault));
        CHECK(f == original);
    }
    Frame f{{0, 0, 0}};
    CHECK_THROWS_AS(store_timestamp(f, kDefault, 0x100), KeyOutOfRangeError);
}

TEST_CASE("encode_frame: word order and little-endian bytes") {
    const Frame f{{0x1234, 0xAB07, 0x9999}};
    CHECK(encode_frame(f, kDefault) ==
          std::vector<std::uint8_t>{0x34, 0x12, 0x07, 0xAB, 0x99, 0x99});
    CHECK(encode_frame(Frame{{0, 0, 0}}, kDefault) ==
          std::vector<std::uint8_t>(6, 0x00));

    FrameLayout odd = kDefault;
    odd.word_bits = 12;
    odd.frame_bits = 48;
    CHECK_THROWS_AS(encode_frame(f, odd), LayoutError);
}

TEST_CASE("decode_frame: inverse of encode, rejects bad byte counts") {
    const std::vector<std::uint8_t> bytes{0x34, 0x12, 0x07, 0xAB, 0x99, 0x99};
    CHECK(decode_frame(bytes, kDefault) == Frame{{0x1234, 0xAB07, 0x9999}});
    CHECK_THROWS_AS(decode_frame(std::vector<std::uint8_t>{}, kDefault),
                    TruncatedFrameError);
    CHECK_THROWS_AS(decode_frame(std::vector<std::uint8_t>(5, 0), kDefault),
                    TruncatedFrameError);
}

TEST_CASE("decode . encode is the identity on random frames") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
        FrameLayout l = kDefault;
        l.word_bits = 8u * (1 + static_cast<unsigned>(rng() % 4));
        l.frame_bits = l.word_bits * (1 + static_cast<unsigned>(rng() % 4));
        l.ts_width = 8;
        l.ts_offset = static_cast<unsigned>(rng() % (l.frame_bits - 7));
        const Frame f = oracles::random_frame(rng, l);
        CHECK(decode_frame(encode_frame(f, l), l) == f);
    }
}

TEST_CASE("parse_hex_frame: nibble order, whitespace, case") {
    // Hex is the whole frame integer, most significant nibble first:
    // 0x9999AB071234 -> words [0x1234, 0xAB07, 0x9999].
    CHECK(parse_hex_frame("9999AB071234", kDefault) == Frame{{0x1234, 0xAB07, 0x9999}});
    CHECK(parse_hex_frame("  9999ab071234\r", kDefault) ==
          Frame{{0x1234, 0xAB07, 0x9999}});
    CHECK(parse_hex_frame("000000000000", kDefault) == Frame{{0, 0, 0}});
}

TEST_CASE("parse_hex_frame: errors carry the character position") {
    try {
        parse_hex_frame("12G4567890AB", kDefault);
        FAIL("expected HexParseError");
    } catch (const HexParseError& e) {
        CHECK(e.position == 2);
    }
    CHECK_THROWS_AS(parse_hex_frame("123", kDefault), HexParseError);
    CHECK_THROWS_AS(parse_hex_frame("", kDefault), HexParseError);
    CHECK_THROWS_AS(parse_hex_frame("999907AB12345", kDefault), HexParseError);
}

TEST_CASE("hex round trip agrees with the binary codec") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
        const Frame f = oracles::random_frame(rng, kDefault);
        const std::string hex = format_hex_frame(f, kDefault);
        CHECK(parse_hex_frame(hex, kDefault) == f);
        // Same frame integer through both codecs.
        CHECK(decode_frame(encode_frame(f, kDefault), kDefault) ==
              parse_hex_frame(hex, kDefault));
    }
}
