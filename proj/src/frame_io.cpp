#include "framesort/frame_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace framesort {

FrameReader::FrameReader(std::istream& in, FrameLayout layout, FrameFormat format)
    : in_(in), layout_(layout), format_(format) {
    layout_.validate();
    if (format_ == FrameFormat::binary && layout_.word_bits % 8 != 0)
        throw LayoutError("binary format requires word_bits to be a multiple of 8");
    if (format_ == FrameFormat::hex && layout_.frame_bits % 4 != 0)
        throw LayoutError("hex format requires frame_bits to be a multiple of 4");
}

std::optional<Frame> FrameReader::next() {
    return format_ == FrameFormat::binary ? next_binary() : next_hex();
}

std::optional<Frame> FrameReader::next_binary() {
    const unsigned frame_bytes = layout_.frame_bytes();
    std::vector<std::uint8_t> buf(frame_bytes);
    in_.read(reinterpret_cast<char*>(buf.data()), frame_bytes);
    const std::streamsize got = in_.gcount();
    if (got == 0 && in_.eof()) return std::nullopt;
    if (in_.bad())
        throw IoError("read failure at byte offset " + std::to_string(byte_offset_));
    if (static_cast<unsigned>(got) < frame_bytes) {
        std::ostringstream err;
        err << "truncated frame at byte offset " << byte_offset_ << ": got "
            << got << " of " << frame_bytes << " bytes";
        throw TruncatedFrameError(err.str(), byte_offset_);
    }
    byte_offset_ += frame_bytes;
    ++frames_read_;
    return decode_frame(buf, layout_);
}

std::optional<Frame> FrameReader::next_hex() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;   // blank
        if (line[first] == '#') continue;           // comment
        try {
            Frame f = parse_hex_frame(line, layout_);
            ++frames_read_;
            return f;
        } catch (const HexParseError& e) {
            std::ostringstream err;
            err << "line " << line_number_ << ": " << e.what();
            throw HexParseError(err.str(), e.position);
        }
    }
    if (in_.bad())
        throw IoError("read failure at line " + std::to_string(line_number_));
    return std::nullopt;
}

FrameWriter::FrameWriter(std::ostream& out, FrameLayout layout, FrameFormat format)
    : out_(out), layout_(layout), format_(format) {
    layout_.validate();
    if (format_ == FrameFormat::binary && layout_.word_bits % 8 != 0)
        throw LayoutError("binary format requires word_bits to be a multiple of 8");
    if (format_ == FrameFormat::hex && layout_.frame_bits % 4 != 0)
        throw LayoutError("hex format requires frame_bits to be a multiple of 4");
}

void FrameWriter::write(const Frame& frame) {
    if (format_ == FrameFormat::binary) {
        const std::vector<std::uint8_t> bytes = encode_frame(frame, layout_);
        out_.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()));
    } else {
        out_ << format_hex_frame(frame, layout_) << '\n';
    }
    if (!out_) throw IoError("write failure");
}

void FrameWriter::write_all(const std::vector<Frame>& frames) {
    for (const Frame& f : frames) write(f);
}

void FrameWriter::flush() {
    out_.flush();
    if (!out_) throw IoError("flush failure");
}

std::vector<Frame> read_batch(FrameReader& reader, std::size_t max_frames) {
    std::vector<Frame> batch;
    batch.reserve(max_frames);
    while (batch.size() < max_frames) {
        std::optional<Frame> f = reader.next();
        if (!f) break;
        batch.push_back(std::move(*f));
    }
    return batch;
}

std::vector<std::vector<Frame>> read_batches(FrameReader& reader,
                                             std::size_t half_batch) {
    std::vector<std::vector<Frame>> batches;
    for (;;) {
        std::vector<Frame> batch = read_batch(reader, half_batch);
        if (batch.empty()) break;
        const bool last = batch.size() < half_batch;
        batches.push_back(std::move(batch));
        if (last) break;
    }
    return batches;
}

}  // namespace framesort
