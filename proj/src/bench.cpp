#include "framesort/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "framesort/stream_sorter.hpp"

namespace framesort {

namespace {

FrameLayout bench_layout(unsigned key_bits) {
    FrameLayout layout;
    layout.ts_width = key_bits;
    if (layout.ts_offset + key_bits > layout.frame_bits)
        layout.ts_offset = layout.frame_bits - key_bits;
    return layout;
}

std::vector<std::vector<Frame>> make_batches(const BenchConfig& config,
                                             const FrameLayout& layout,
                                             std::uint32_t count) {
    std::mt19937_64 rng(config.seed);
    const std::uint32_t word_mask = layout.word_mask();
    const std::uint32_t ts_bound = layout.ts_mask();
    std::vector<std::vector<Frame>> batches(count);
    for (auto& batch : batches) {
        batch.reserve(config.half_batch);
        for (std::uint32_t j = 0; j < config.half_batch; ++j) {
            Frame f;
            f.words.reserve(layout.word_count());
            for (unsigned w = 0; w < layout.word_count(); ++w)
                f.words.push_back(static_cast<std::uint32_t>(rng()) & word_mask);
            store_timestamp(f, layout, static_cast<std::uint32_t>(rng()) & ts_bound);
            batch.push_back(std::move(f));
        }
    }
    return batches;
}

}  // namespace

BenchResult measure_push_latency(const BenchConfig& config) {
    using clock = std::chrono::steady_clock;

    const FrameLayout layout = bench_layout(config.key_bits);
    layout.validate();

    StreamConfig stream;
    stream.half_batch = config.half_batch;
    stream.layout = layout;
    stream.mode = config.mode;
    stream.on_violation = ViolationPolicy::warn;  // wrapping keys will warn

    std::vector<std::vector<Frame>> batches =
        make_batches(config, layout, config.batches + config.warmup_batches);

    ContinuousSorter sorter(stream);
    std::size_t i = 0;
    for (; i < config.warmup_batches; ++i)
        (void)sorter.push_batch(std::move(batches[i]));

    clock::duration spent{0};
    for (; i < batches.size(); ++i) {
        const auto t0 = clock::now();
        PushResult r = sorter.push_batch(std::move(batches[i]));
        spent += clock::now() - t0;
        (void)r;
    }

    BenchResult result;
    result.batches = config.batches;
    result.mean_push_seconds =
        std::chrono::duration<double>(spent).count() / config.batches;
    return result;
}

double latency_ratio(const BenchConfig& base, std::uint32_t short_batches,
                     std::uint32_t long_batches, int samples) {
    const auto best_mean = [&](std::uint32_t batches) {
        BenchConfig cfg = base;
        cfg.batches = batches;
        double best = measure_push_latency(cfg).mean_push_seconds;
        for (int s = 1; s < samples; ++s)
            best = std::min(best, measure_push_latency(cfg).mean_push_seconds);
        return best;
    };
    return best_mean(long_batches) / best_mean(short_batches);
}

}  // namespace framesort
