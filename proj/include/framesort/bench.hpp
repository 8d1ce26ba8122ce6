#pragma once

#include <cstdint>

#include "framesort/counting_sort.hpp"

namespace framesort {

/// Latency measurement over an in-memory stream. Timestamps are drawn
/// uniformly (wrapping freely), which does not affect push cost: each
/// cycle is Theta(half_batch + 2^ts_width) whatever the key values.
struct BenchConfig {
    std::uint32_t half_batch = 64;
    unsigned key_bits = 8;
    std::uint32_t batches = 1000;
    std::uint64_t seed = 1;
    std::uint32_t warmup_batches = 32;
    SortMode mode = SortMode::paper;
};

struct BenchResult {
    std::uint32_t batches;
    double mean_push_seconds;  ///< mean wall time per push_batch call
};

/// Pushes `batches` pre-generated batches through one ContinuousSorter
/// and reports the mean per-push latency (batch construction and result
/// disposal excluded from the clock).
BenchResult measure_push_latency(const BenchConfig& config);

/// Ratio of mean per-push latency between a stream of `long_batches`
/// and one of `short_batches` (same half_batch and key width). The
/// stream-length invariance property says this stays near 1. Each side
/// is measured `samples` times and the smallest mean is used, which
/// filters scheduler interference out of the short (milliseconds-long)
/// measurement.
double latency_ratio(const BenchConfig& base, std::uint32_t short_batches,
                     std::uint32_t long_batches, int samples = 3);

}  // namespace framesort
