#pragma once

#include <cstdint>
#include <vector>

#include "framesort/frame.hpp"

namespace framesort {

/// Parameters for the seeded stream generator.
///
/// Batch i draws its timestamps from the window [i*step, i*step + spread]
/// with step = spread/2 + 1, so min(batch i) > max(batch i-2) holds for
/// every i >= 2 while adjacent windows still overlap (for spread >= 2),
/// which keeps the carry path busy. Payload bits are random.
struct GenConfig {
    std::uint32_t batches = 10;
    std::uint32_t half_batch = 64;
    FrameLayout layout{};
    std::uint64_t seed = 1;
    std::uint32_t spread = 16;  ///< window width, in timestamp levels

    /// Per-batch window advance implied by spread.
    std::uint32_t step() const { return spread / 2 + 1; }

    /// Highest timestamp the stream will touch.
    std::uint64_t top_timestamp() const {
        return batches == 0 ? 0
                            : std::uint64_t{batches - 1} * step() + spread;
    }

    /// Throws GenerationInfeasibleError when the windows cannot fit below
    /// 2^ts_width (the constraint would force timestamp wraparound), and
    /// LayoutError / Error on invalid layout or counts.
    void validate() const;
};

/// Deterministically generates batches * half_batch frames whose per-batch
/// timestamp extrema satisfy the separation constraint. Frames appear in
/// batch order (batch 0 first).
std::vector<Frame> generate_stream(const GenConfig& config);

}  // namespace framesort
