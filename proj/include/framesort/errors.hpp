#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace framesort {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or unsupported frame layout configuration.
class LayoutError : public Error {
public:
    using Error::Error;
};

/// A frame does not conform to the layout it is used with
/// (wrong word count or a word value exceeding the word width).
class MalformedFrameError : public Error {
public:
    using Error::Error;
};

/// Binary input ended in the middle of a frame.
class TruncatedFrameError : public Error {
public:
    TruncatedFrameError(const std::string& what, std::uint64_t byte_offset)
        : Error(what), byte_offset(byte_offset) {}

    /// Offset of the first byte of the incomplete frame.
    std::uint64_t byte_offset;
};

/// A hex frame line could not be parsed.
class HexParseError : public Error {
public:
    HexParseError(const std::string& what, std::size_t position)
        : Error(what), position(position) {}

    /// 0-based character position of the offending character within the
    /// (whitespace-trimmed) line.
    std::size_t position;
};

/// A sort key does not fit in the configured key width.
class KeyOutOfRangeError : public Error {
public:
    KeyOutOfRangeError(const std::string& what, std::size_t index, std::uint64_t key)
        : Error(what), index(index), key(key) {}

    std::size_t index;  ///< index of the offending key in the input
    std::uint64_t key;
};

/// Rank array handed to placement was not built from the same keys.
class InconsistentRanksError : public Error {
public:
    using Error::Error;
};

/// A streaming batch had the wrong number of frames.
class BatchSizeError : public Error {
public:
    using Error::Error;
};

/// I/O failure on a file, stream or socket.
class IoError : public Error {
public:
    using Error::Error;
};

/// Requested generator parameters cannot satisfy the batch separation
/// constraint without timestamp wraparound.
class GenerationInfeasibleError : public Error {
public:
    using Error::Error;
};

}  // namespace framesort
