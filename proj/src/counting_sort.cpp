#include "framesort/counting_sort.hpp"

#include <limits>
#include <sstream>
#include <utility>

namespace framesort {

namespace {

void check_key_bits(unsigned key_bits) {
    if (key_bits < 1 || key_bits > FrameLayout::kDefaultMaxTsWidth) {
        std::ostringstream err;
        err << "key_bits must be in [1," << FrameLayout::kDefaultMaxTsWidth
            << "], got " << key_bits;
        throw LayoutError(err.str());
    }
}

void check_count_range(std::size_t n) {
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw Error("input exceeds the 32-bit counter range");
}

}  // namespace

Histogram build_histogram(std::span<const std::uint32_t> keys, unsigned key_bits) {
    check_key_bits(key_bits);
    check_count_range(keys.size());
    const std::uint32_t limit = std::uint32_t{1} << key_bits;
    Histogram hist;
    hist.counts.assign(limit, 0);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i] >= limit) {
            std::ostringstream err;
            err << "key " << keys[i] << " at index " << i << " is out of range [0,"
                << limit << ")";
            throw KeyOutOfRangeError(err.str(), i, keys[i]);
        }
        ++hist.counts[keys[i]];
    }
    return hist;
}

CumulativeRanks prefix_sums(const Histogram& hist) {
    CumulativeRanks cum;
    cum.ranks = hist.counts;
    for (std::size_t i = 1; i < cum.ranks.size(); ++i)
        cum.ranks[i] += cum.ranks[i - 1];
    return cum;
}

std::vector<std::uint32_t> place_keys(std::span<const std::uint32_t> keys,
                                      CumulativeRanks& ranks, SortMode mode) {
    const std::size_t n = keys.size();
    std::vector<std::uint32_t> slots(n);
    auto place = [&](std::size_t i) {
        const std::uint32_t key = keys[i];
        if (key >= ranks.ranks.size())
            throw InconsistentRanksError("key exceeds the rank array length");
        const std::uint32_t pos = ranks.ranks[key];
        if (pos == 0 || pos > n) {
            std::ostringstream err;
            err << "placement slot " << pos << " for key " << key
                << " is outside [1," << n << "]; ranks do not match the keys";
            throw InconsistentRanksError(err.str());
        }
        slots[pos - 1] = key;  // 1-based slot -> 0-based storage
        ranks.ranks[key] = pos - 1;
    };
    if (mode == SortMode::paper) {
        for (std::size_t i = 0; i < n; ++i) place(i);
    } else {
        for (std::size_t i = n; i-- > 0;) place(i);
    }
    return slots;
}

std::vector<std::uint32_t> sort_keys(std::span<const std::uint32_t> keys,
                                     unsigned key_bits, SortMode mode) {
    Histogram hist = build_histogram(keys, key_bits);
    CumulativeRanks ranks = prefix_sums(hist);
    return place_keys(keys, ranks, mode);
}

std::vector<Frame> sort_frames(std::vector<Frame> frames,
                               const FrameLayout& layout, SortMode mode) {
    FrameBatchSorter sorter(layout, mode);
    sorter.sort(frames);
    return frames;
}

FrameBatchSorter::FrameBatchSorter(FrameLayout layout, SortMode mode)
    : layout_(layout), mode_(mode) {
    layout_.validate();
    counts_.assign(std::size_t{1} << layout_.ts_width, 0);
}

void FrameBatchSorter::sort(std::vector<Frame>& frames) {
    check_count_range(frames.size());
    const std::size_t n = frames.size();
    for (const Frame& f : frames) require_conforms(f, layout_);

    // Histogram, then in-place running totals: counts_[v] becomes the
    // 1-based slot of the next key-v frame to place.
    counts_.assign(counts_.size(), 0);
    for (const Frame& f : frames)
        ++counts_[extract_timestamp_unchecked(f, layout_)];
    for (std::size_t v = 1; v < counts_.size(); ++v)
        counts_[v] += counts_[v - 1];

    slots_.clear();
    slots_.resize(n);
    auto place = [&](std::size_t i) {
        const std::uint32_t key = extract_timestamp_unchecked(frames[i], layout_);
        const std::uint32_t pos = counts_[key]--;
        slots_[pos - 1] = std::move(frames[i]);
    };
    if (mode_ == SortMode::paper) {
        for (std::size_t i = 0; i < n; ++i) place(i);
    } else {
        for (std::size_t i = n; i-- > 0;) place(i);
    }
    frames.swap(slots_);
}

}  // namespace framesort
