#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "framesort/frame.hpp"

namespace framesort {

/// Ordering of records that share a key.
///
/// paper: placement walks the input in arrival order and decrements the
/// rank after each write, so equal keys come out in reverse arrival order.
/// stable: placement walks the input backwards, recovering the usual
/// stable counting sort (equal keys keep arrival order).
enum class SortMode { paper, stable };

/// Key multiplicities: counts[v] = number of ingested keys equal to v.
/// Length is 2^key_bits.
struct Histogram {
    std::vector<std::uint32_t> counts;
};

/// Running totals over a histogram: ranks[v] = number of keys <= v.
/// Consumed (decremented in place) by placement.
struct CumulativeRanks {
    std::vector<std::uint32_t> ranks;
};

/// Counts key occurrences into a 2^key_bits histogram.
/// Throws KeyOutOfRangeError (naming the offending index) if any key
/// has more than key_bits bits, LayoutError for key_bits outside [1,24],
/// Error if the input exceeds the 32-bit counter range.
Histogram build_histogram(std::span<const std::uint32_t> keys, unsigned key_bits);

/// ranks[0] = counts[0]; ranks[i] = counts[i] + ranks[i-1].
CumulativeRanks prefix_sums(const Histogram& hist);

/// Scatters keys to their sorted slots: each key v lands at slot ranks[v]
/// (1-based), and ranks[v] is decremented afterwards, so duplicates fill
/// downwards. The 1-based slot s maps to index s-1 of the returned vector.
/// `ranks` must have been built from exactly these keys and is consumed.
/// Throws InconsistentRanksError when a placement index falls outside the
/// output (the ranks do not match the keys).
std::vector<std::uint32_t> place_keys(std::span<const std::uint32_t> keys,
                                      CumulativeRanks& ranks,
                                      SortMode mode = SortMode::paper);

/// build_histogram + prefix_sums + place_keys in one call.
std::vector<std::uint32_t> sort_keys(std::span<const std::uint32_t> keys,
                                     unsigned key_bits,
                                     SortMode mode = SortMode::paper);

/// Reorders whole frames by their extracted timestamps. Every output frame
/// is bit-identical to an input frame (the words of a frame travel
/// together); the applied permutation is exactly the one sort_keys applies
/// to the extracted keys. Throws MalformedFrameError on a non-conforming
/// frame.
std::vector<Frame> sort_frames(std::vector<Frame> frames,
                               const FrameLayout& layout,
                               SortMode mode = SortMode::paper);

/// Reusable frame-sorting engine for the streaming path.
///
/// Owns exactly one 2^ts_width counter buffer and one slot buffer, both
/// recycled across calls, so a long-running stream allocates nothing per
/// cycle beyond what the caller hands in. Each sort costs
/// Theta(n + 2^ts_width) regardless of key values.
class FrameBatchSorter {
public:
    FrameBatchSorter(FrameLayout layout, SortMode mode);

    /// Reorders `frames` in place (via the internal slot buffer).
    /// Frames are validated against the layout up front.
    void sort(std::vector<Frame>& frames);

    /// Number of counters the engine keeps live (2^ts_width).
    std::size_t counter_count() const { return counts_.size(); }

    const FrameLayout& layout() const { return layout_; }

private:
    FrameLayout layout_;
    SortMode mode_;
    std::vector<std::uint32_t> counts_;
    std::vector<Frame> slots_;
};

}  // namespace framesort
