#include "framesort/stream_sorter.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace framesort {

void StreamConfig::validate() const {
    layout.validate();
    if (half_batch < 1) throw Error("half_batch must be at least 1");
}

ContinuousSorter::ContinuousSorter(StreamConfig config)
    : config_(std::move(config)), engine_(config_.layout, config_.mode) {
    config_.validate();
    carry_.reserve(config_.half_batch);
    working_.reserve(2 * std::size_t{config_.half_batch});
}

ContinuousSorter::Extrema ContinuousSorter::scan_batch(
    const std::vector<Frame>& batch) const {
    Extrema e{~std::uint32_t{0}, 0};
    for (const Frame& f : batch) {
        const std::uint32_t ts = extract_timestamp(f, config_.layout);
        e.min = std::min(e.min, ts);
        e.max = std::max(e.max, ts);
    }
    return e;
}

std::optional<ViolationReport> ContinuousSorter::check_separation(
    std::uint32_t batch_min) const {
    if (batch_index_ < 2) return std::nullopt;
    const std::uint32_t floor = recent_max_[1];
    if (batch_min > floor) return std::nullopt;
    return ViolationReport{batch_index_, batch_min, floor};
}

std::vector<ViolationReport> ContinuousSorter::apply_policy(
    const std::optional<ViolationReport>& v, bool& ingest) {
    std::vector<ViolationReport> out;
    ingest = true;
    if (!v) return out;
    out.push_back(*v);
    switch (config_.on_violation) {
        case ViolationPolicy::warn:
            break;
        case ViolationPolicy::drop:
            ingest = false;
            break;
        case ViolationPolicy::error: {
            std::ostringstream err;
            err << "batch " << v->batch_index << " breaks the separation constraint: "
                << "min timestamp " << v->offending_min
                << " must exceed " << v->required_floor << " (max of batch "
                << v->batch_index - 2 << ")";
            throw ConstraintViolationError(err.str(), *v);
        }
    }
    return out;
}

void ContinuousSorter::note_accepted(std::uint32_t batch_max) {
    recent_max_[1] = recent_max_[0];
    recent_max_[0] = batch_max;
    ++batch_index_;
}

void ContinuousSorter::track_peak(std::size_t live) {
    peak_live_frames_ = std::max(peak_live_frames_, live);
}

PushResult ContinuousSorter::push_batch(std::vector<Frame> batch) {
    if (batch.size() != config_.half_batch) {
        std::ostringstream err;
        err << "batch size " << batch.size() << " does not match half_batch "
            << config_.half_batch;
        throw BatchSizeError(err.str());
    }

    const Extrema ex = scan_batch(batch);  // also validates every frame
    bool ingest = true;
    PushResult result;
    result.violations = apply_policy(check_separation(ex.min), ingest);
    if (!ingest) return result;

    // The merge buffer mirrors the two-block layout: incoming frames in the
    // lower half, carried frames in the upper half.
    working_.clear();
    for (Frame& f : batch) working_.push_back(std::move(f));
    for (Frame& f : carry_) working_.push_back(std::move(f));
    carry_.clear();
    track_peak(working_.size());

    engine_.sort(working_);

    if (working_.size() == config_.half_batch) {
        // Warm-up: the whole first batch becomes the carry, nothing leaves.
        carry_ = std::move(working_);
        working_.clear();
    } else {
        const std::size_t half = config_.half_batch;
        result.emitted.reserve(half);
        for (std::size_t i = 0; i < half; ++i)
            result.emitted.push_back(std::move(working_[i]));
        for (std::size_t i = half; i < working_.size(); ++i)
            carry_.push_back(std::move(working_[i]));
        working_.clear();
    }

    note_accepted(ex.max);
    return result;
}

PushResult ContinuousSorter::flush(std::vector<Frame> remainder) {
    PushResult result;
    if (!remainder.empty()) {
        const Extrema ex = scan_batch(remainder);
        bool ingest = true;
        result.violations = apply_policy(check_separation(ex.min), ingest);
        if (!ingest) remainder.clear();
    }

    if (remainder.empty()) {
        // The carry leaves every merge in nondecreasing order, so it goes
        // out as-is; re-sorting would flip equal-timestamp frames (paper
        // mode reverses ties on every pass).
        result.emitted = std::move(carry_);
        carry_.clear();
    } else {
        working_.clear();
        for (Frame& f : remainder) working_.push_back(std::move(f));
        for (Frame& f : carry_) working_.push_back(std::move(f));
        carry_.clear();
        track_peak(working_.size());
        engine_.sort(working_);
        result.emitted = std::move(working_);
        working_.clear();
    }

    batch_index_ = 0;
    recent_max_[0] = recent_max_[1] = 0;
    return result;
}

MemoryStats ContinuousSorter::memory_stats() const {
    return MemoryStats{carry_.size(), engine_.counter_count(), peak_live_frames_};
}

}  // namespace framesort
