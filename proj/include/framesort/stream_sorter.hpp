#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "framesort/counting_sort.hpp"
#include "framesort/frame.hpp"

namespace framesort {

/// What to do when an incoming batch breaks the separation constraint.
enum class ViolationPolicy { warn, error, drop };

/// Configuration of one continuous sorting stream.
///
/// Every cycle ingests half_batch frames; together with the carried half
/// the working set is exactly 2 * half_batch frames.
struct StreamConfig {
    std::uint32_t half_batch = 64;
    FrameLayout layout{};
    SortMode mode = SortMode::paper;
    ViolationPolicy on_violation = ViolationPolicy::warn;

    void validate() const;
};

/// A detected breach of the batch separation constraint: the minimum
/// timestamp of batch i must strictly exceed the maximum timestamp of
/// batch i-2 for the emitted stream to be globally ordered.
struct ViolationReport {
    std::uint64_t batch_index;     ///< index the offending batch would occupy
    std::uint32_t offending_min;   ///< min timestamp of the incoming batch
    std::uint32_t required_floor;  ///< max timestamp of batch i-2

    bool operator==(const ViolationReport&) const = default;
};

/// Thrown by push when on_violation == error.
class ConstraintViolationError : public Error {
public:
    ConstraintViolationError(const std::string& what, ViolationReport report)
        : Error(what), report(report) {}

    ViolationReport report;
};

struct PushResult {
    std::vector<Frame> emitted;  ///< empty during warm-up, else half_batch frames
    std::vector<ViolationReport> violations;
};

/// Live-state accounting for the memory-bound property.
struct MemoryStats {
    std::size_t live_frames;       ///< frames currently held (the carry)
    std::size_t counter_slots;     ///< persistent histogram counters (2^ts_width)
    std::size_t peak_live_frames;  ///< largest frame count ever held at once
};

/// Bounded-memory continuous sorter.
///
/// Each cycle sorts [incoming batch | carry] (2 * half_batch frames),
/// emits the lower half and feeds the upper half back as the next carry.
/// The first batch only fills the carry (warm-up) so no placeholder
/// frames are ever emitted.
///
/// Owned by one logical execution context at a time; no internal locking.
/// Distinct streams may run concurrently on their own instances.
class ContinuousSorter {
public:
    explicit ContinuousSorter(StreamConfig config);

    /// Ingests exactly half_batch frames. Emits nothing for the first
    /// batch, half_batch sorted frames afterwards. Runs the separation
    /// check once two batches have been accepted and applies the
    /// configured policy; reports are always returned.
    ///
    /// Throws BatchSizeError on a wrong-sized batch, MalformedFrameError
    /// on a bad frame (state unchanged), ConstraintViolationError under
    /// policy error (state unchanged, so the stream can continue without
    /// the offending batch).
    PushResult push_batch(std::vector<Frame> batch);

    /// End of stream: sorts any remaining frames (an optional short final
    /// batch plus the carry), emits them all and resets to a fresh
    /// warm-up state. The remainder, when given, still goes through the
    /// separation check.
    PushResult flush(std::vector<Frame> remainder = {});

    /// Evaluates the separation constraint for an incoming batch minimum.
    /// Returns a report iff two batches have been accepted and
    /// batch_min <= max timestamp of batch i-2 (the constraint is strict).
    std::optional<ViolationReport> check_separation(std::uint32_t batch_min) const;

    std::uint64_t batch_index() const { return batch_index_; }
    bool in_warmup() const { return batch_index_ < 2; }
    std::size_t carry_size() const { return carry_.size(); }
    const StreamConfig& config() const { return config_; }

    MemoryStats memory_stats() const;

private:
    struct Extrema {
        std::uint32_t min;
        std::uint32_t max;
    };

    Extrema scan_batch(const std::vector<Frame>& batch) const;
    std::vector<ViolationReport> apply_policy(const std::optional<ViolationReport>& v,
                                              bool& ingest);
    void note_accepted(std::uint32_t batch_max);
    void track_peak(std::size_t live);

    StreamConfig config_;
    FrameBatchSorter engine_;
    std::vector<Frame> carry_;
    std::vector<Frame> working_;
    std::uint64_t batch_index_ = 0;
    // Max timestamps of the two most recently accepted batches:
    // recent_max_[0] is batch i-1, recent_max_[1] is batch i-2.
    std::uint32_t recent_max_[2] = {0, 0};
    std::size_t peak_live_frames_ = 0;
};

}  // namespace framesort
