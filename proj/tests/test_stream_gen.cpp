#include <doctest.h>

#include <algorithm>

#include "framesort/stream_gen.hpp"
#include "oracles.hpp"

using namespace framesort;

namespace {

// Per-batch timestamp extrema of a generated stream.
struct BatchExtrema {
    std::uint32_t min;
    std::uint32_t max;
};

std::vector<BatchExtrema> batch_extrema(const std::vector<Frame>& stream,
                                        const GenConfig& config) {
    std::vector<BatchExtrema> out;
    for (std::size_t start = 0; start < stream.size(); start += config.half_batch) {
        BatchExtrema e{~std::uint32_t{0}, 0};
        for (std::size_t i = start; i < start + config.half_batch; ++i) {
            const std::uint32_t ts = extract_timestamp(stream[i], config.layout);
            e.min = std::min(e.min, ts);
            e.max = std::max(e.max, ts);
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
    GenConfig config;
    config.batches = 5;
    config.half_batch = 8;
    config.seed = 1234;
    const auto a = generate_stream(config);
    const auto b = generate_stream(config);
    CHECK(a == b);
    CHECK(a.size() == 40);

    config.seed = 1235;
    CHECK(generate_stream(config) != a);
}

TEST_CASE("generated batches always satisfy the separation constraint") {
    for (std::uint64_t seed : {1ull, 7ull, 42ull, 99ull}) {
        GenConfig config;
        config.batches = 20;
        config.half_batch = 6;
        config.seed = seed;
        config.spread = 9;
        const auto stream = generate_stream(config);
        const auto extrema = batch_extrema(stream, config);
        REQUIRE(extrema.size() == config.batches);
        for (std::size_t i = 2; i < extrema.size(); ++i)
            CHECK(extrema[i].min > extrema[i - 2].max);
    }
}

TEST_CASE("adjacent batches can overlap, exercising the carry path") {
    GenConfig config;
    config.batches = 30;
    config.half_batch = 16;
    config.seed = 42;
    config.spread = 8;
    const auto extrema = batch_extrema(generate_stream(config), config);
    bool overlapped = false;
    for (std::size_t i = 1; i < extrema.size(); ++i)
        overlapped |= extrema[i].min <= extrema[i - 1].max;
    CHECK(overlapped);
}

TEST_CASE("frames conform to the layout with in-range timestamps") {
    GenConfig config;
    config.batches = 8;
    config.half_batch = 4;
    config.layout.ts_width = 10;
    config.seed = 5;
    for (const Frame& f : generate_stream(config)) {
        CHECK(conforms(f, config.layout));
        CHECK(extract_timestamp(f, config.layout) < 1024);
    }
}

TEST_CASE("infeasible parameter combinations are refused") {
    GenConfig config;
    config.batches = 60;  // step 9 * 59 + 16 = 547 >= 256
    config.half_batch = 2;
    config.spread = 16;
    CHECK(config.layout.ts_width == 8);
    CHECK_THROWS_AS(generate_stream(config), GenerationInfeasibleError);

    config.batches = 2;  // trivially feasible: top = 9 + 16
    CHECK_NOTHROW(generate_stream(config));

    config.batches = 0;
    CHECK(generate_stream(config).empty());
}
