#include "framesort/stream_gen.hpp"

#include <random>
#include <sstream>

namespace framesort {

void GenConfig::validate() const {
    layout.validate();
    if (half_batch < 1) throw Error("half_batch must be at least 1");
    const std::uint64_t limit = std::uint64_t{1} << layout.ts_width;
    if (batches > 0 && top_timestamp() >= limit) {
        std::ostringstream err;
        err << "cannot generate " << batches
            << " separation-constrained batches at spread " << spread
            << ": timestamps would reach " << top_timestamp()
            << ", but ts_width " << layout.ts_width << " only holds values below "
            << limit << " (wraparound would break the constraint)";
        throw GenerationInfeasibleError(err.str());
    }
}

std::vector<Frame> generate_stream(const GenConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);

    // Raw engine words reduced by modulus: deterministic across platforms,
    // unlike std::uniform_int_distribution.
    const auto draw = [&rng](std::uint64_t bound) -> std::uint32_t {
        return static_cast<std::uint32_t>(rng() % bound);
    };

    const std::uint32_t word_count = config.layout.word_count();
    const std::uint32_t word_mask = config.layout.word_mask();
    std::vector<Frame> frames;
    frames.reserve(std::size_t{config.batches} * config.half_batch);

    for (std::uint32_t b = 0; b < config.batches; ++b) {
        const std::uint32_t base = b * config.step();
        for (std::uint32_t j = 0; j < config.half_batch; ++j) {
            Frame f;
            f.words.reserve(word_count);
            for (std::uint32_t w = 0; w < word_count; ++w)
                f.words.push_back(static_cast<std::uint32_t>(rng()) & word_mask);
            store_timestamp(f, config.layout, base + draw(config.spread + 1));
            frames.push_back(std::move(f));
        }
    }
    return frames;
}

}  // namespace framesort
