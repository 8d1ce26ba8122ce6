// framesort — command-line front end: one-shot batch sorting, continuous
// streaming, a TCP service, a constraint-respecting stream generator, and
// a stream-length invariance benchmark.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "framesort/bench.hpp"
#include "framesort/counting_sort.hpp"
#include "framesort/frame_io.hpp"
#include "framesort/net_server.hpp"
#include "framesort/stream_gen.hpp"
#include "framesort/stream_sorter.hpp"

namespace {

using namespace framesort;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDecode = 2;
constexpr int kExitIo = 3;
constexpr int kExitViolation = 4;

// The CLI works in 16-bit words; --frame-bits must be a multiple of 16.
constexpr unsigned kWordBits = 16;

struct CommonOpts {
    unsigned frame_bits = 48;
    unsigned ts_offset = 16;
    unsigned ts_width = 8;
    std::uint32_t half_batch = 64;
    std::string mode = "paper";
    std::string on_violation = "warn";
    std::string format = "hex";
    std::string in = "-";
    std::string out = "-";

    FrameLayout layout() const {
        FrameLayout l{frame_bits, kWordBits, ts_offset, ts_width};
        l.validate();
        return l;
    }
    SortMode sort_mode() const {
        return mode == "stable" ? SortMode::stable : SortMode::paper;
    }
    ViolationPolicy policy() const {
        if (on_violation == "error") return ViolationPolicy::error;
        if (on_violation == "drop") return ViolationPolicy::drop;
        return ViolationPolicy::warn;
    }
    FrameFormat frame_format() const {
        return format == "bin" ? FrameFormat::binary : FrameFormat::hex;
    }
    StreamConfig stream_config() const {
        StreamConfig c;
        c.half_batch = half_batch;
        c.layout = layout();
        c.mode = sort_mode();
        c.on_violation = policy();
        return c;
    }
};

void add_layout_flags(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--frame-bits", o.frame_bits, "Frame width in bits (multiple of 16)")
        ->capture_default_str();
    cmd.add_option("--ts-offset", o.ts_offset, "Bit offset of the timestamp LSB")
        ->capture_default_str();
    cmd.add_option("--ts-width", o.ts_width, "Timestamp width in bits")
        ->capture_default_str();
}

void add_io_flags(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--in", o.in, "Input file ('-' = stdin)")->capture_default_str();
    cmd.add_option("--out", o.out, "Output file ('-' = stdout)")->capture_default_str();
    cmd.add_option("--format", o.format, "Frame format")
        ->check(CLI::IsMember({"bin", "hex"}))
        ->capture_default_str();
}

void add_stream_flags(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--half-batch", o.half_batch, "Frames ingested per cycle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--mode", o.mode, "Duplicate-key order")
        ->check(CLI::IsMember({"paper", "stable"}))
        ->capture_default_str();
    cmd.add_option("--on-violation", o.on_violation,
                   "Separation-constraint violation policy")
        ->check(CLI::IsMember({"warn", "error", "drop"}))
        ->capture_default_str();
}

struct InputFile {
    std::unique_ptr<std::ifstream> file;
    std::istream& stream;
};

InputFile open_input(const std::string& path) {
    if (path == "-") return {nullptr, std::cin};
    auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*f) throw IoError("cannot open input file: " + path);
    std::istream& s = *f;
    return {std::move(f), s};
}

struct OutputFile {
    std::unique_ptr<std::ofstream> file;
    std::ostream& stream;
};

OutputFile open_output(const std::string& path) {
    if (path == "-") return {nullptr, std::cout};
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*f) throw IoError("cannot open output file: " + path);
    std::ostream& s = *f;
    return {std::move(f), s};
}

void print_violations(const std::vector<ViolationReport>& violations) {
    for (const ViolationReport& v : violations)
        std::cerr << "violation batch=" << v.batch_index
                  << " offending_min=" << v.offending_min
                  << " required_floor=" << v.required_floor << '\n';
}

int cmd_sort(const CommonOpts& o) {
    const FrameLayout layout = o.layout();
    InputFile in = open_input(o.in);
    OutputFile out = open_output(o.out);
    FrameReader reader(in.stream, layout, o.frame_format());
    std::vector<Frame> frames;
    while (std::optional<Frame> f = reader.next()) frames.push_back(std::move(*f));
    FrameWriter writer(out.stream, layout, o.frame_format());
    writer.write_all(sort_frames(std::move(frames), layout, o.sort_mode()));
    writer.flush();
    return kExitOk;
}

int cmd_stream(const CommonOpts& o) {
    const StreamConfig config = o.stream_config();
    InputFile in = open_input(o.in);
    OutputFile out = open_output(o.out);
    FrameReader reader(in.stream, config.layout, o.frame_format());
    FrameWriter writer(out.stream, config.layout, o.frame_format());
    ContinuousSorter sorter(config);

    for (;;) {
        std::vector<Frame> batch = read_batch(reader, config.half_batch);
        if (batch.size() == config.half_batch) {
            PushResult r = sorter.push_batch(std::move(batch));
            print_violations(r.violations);
            writer.write_all(r.emitted);
        } else {
            PushResult r = sorter.flush(std::move(batch));
            print_violations(r.violations);
            writer.write_all(r.emitted);
            break;
        }
    }
    writer.flush();
    return kExitOk;
}

int cmd_gen(const CommonOpts& o, std::uint32_t batches, std::uint64_t seed,
            std::uint32_t spread) {
    GenConfig config;
    config.batches = batches;
    config.half_batch = o.half_batch;
    config.layout = o.layout();
    config.seed = seed;
    config.spread = spread;
    const std::vector<Frame> frames = generate_stream(config);
    OutputFile out = open_output(o.out);
    FrameWriter writer(out.stream, config.layout, o.frame_format());
    writer.write_all(frames);
    writer.flush();
    return kExitOk;
}

FrameServer* g_server = nullptr;

int cmd_serve(const CommonOpts& o, const std::string& listen) {
    std::string host = "0.0.0.0";
    std::uint16_t port = 0;
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) {
        port = static_cast<std::uint16_t>(std::stoul(listen));
    } else {
        if (colon > 0) host = listen.substr(0, colon);
        port = static_cast<std::uint16_t>(std::stoul(listen.substr(colon + 1)));
    }

    FrameServer server(host, port, o.stream_config());
    g_server = &server;
    struct sigaction sa{};
    sa.sa_handler = [](int) {
        if (g_server) g_server->stop();
    };
    ::sigaction(SIGINT, &sa, nullptr);
    ::sigaction(SIGTERM, &sa, nullptr);

    std::cerr << "listening on " << host << ":" << server.port() << '\n';
    server.run();
    g_server = nullptr;
    return kExitOk;
}

int cmd_bench(const CommonOpts& o, std::uint32_t batches, std::uint64_t seed) {
    BenchConfig config;
    config.half_batch = o.half_batch;
    config.key_bits = o.ts_width;
    config.seed = seed;
    config.mode = o.sort_mode();

    config.batches = batches;
    const BenchResult short_run = measure_push_latency(config);
    config.batches = batches * 10;
    const BenchResult long_run = measure_push_latency(config);

    std::cout << "half_batch=" << o.half_batch << " key_bits=" << o.ts_width
              << '\n'
              << "short: batches=" << short_run.batches << " mean_push_us="
              << short_run.mean_push_seconds * 1e6 << '\n'
              << "long:  batches=" << long_run.batches << " mean_push_us="
              << long_run.mean_push_seconds * 1e6 << '\n'
              << "ratio=" << long_run.mean_push_seconds / short_run.mean_push_seconds
              << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-memory continuous sorter for timestamped fixed-width frames"};
    app.require_subcommand(1);

    CommonOpts sort_opts;
    CLI::App* sort_cmd = app.add_subcommand("sort", "Sort a whole capture in one batch");
    add_layout_flags(*sort_cmd, sort_opts);
    add_io_flags(*sort_cmd, sort_opts);
    sort_cmd->add_option("--mode", sort_opts.mode, "Duplicate-key order")
        ->check(CLI::IsMember({"paper", "stable"}));

    CommonOpts stream_opts;
    CLI::App* stream_cmd =
        app.add_subcommand("stream", "Continuously sort batches, emitting as you go");
    add_layout_flags(*stream_cmd, stream_opts);
    add_io_flags(*stream_cmd, stream_opts);
    add_stream_flags(*stream_cmd, stream_opts);

    CommonOpts serve_opts;
    std::string listen = "0.0.0.0:4800";
    CLI::App* serve_cmd =
        app.add_subcommand("serve", "TCP service: binary frames in, sorted frames out");
    add_layout_flags(*serve_cmd, serve_opts);
    add_stream_flags(*serve_cmd, serve_opts);
    serve_cmd->add_option("--listen", listen, "host:port to listen on (port 0 = ephemeral)")
        ->capture_default_str();

    CommonOpts gen_opts;
    std::uint32_t gen_batches = 10;
    std::uint64_t gen_seed = 1;
    std::uint32_t gen_spread = 16;
    CLI::App* gen_cmd =
        app.add_subcommand("gen", "Generate a separation-constrained test stream");
    add_layout_flags(*gen_cmd, gen_opts);
    add_io_flags(*gen_cmd, gen_opts);
    gen_cmd->add_option("--half-batch", gen_opts.half_batch, "Frames per batch")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen_cmd->add_option("--batches", gen_batches, "Number of batches")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen_cmd->add_option("--spread", gen_spread, "Timestamp window width per batch")
        ->capture_default_str();

    CommonOpts bench_opts;
    std::uint32_t bench_batches = 1000;
    std::uint64_t bench_seed = 1;
    CLI::App* bench_cmd = app.add_subcommand(
        "bench", "Measure per-batch latency on short vs 10x-long streams");
    bench_cmd->add_option("--half-batch", bench_opts.half_batch, "Frames per cycle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--ts-width", bench_opts.ts_width, "Key width in bits")
        ->capture_default_str();
    bench_cmd->add_option("--batches", bench_batches, "Short-stream batch count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "RNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sort_cmd->parsed()) return cmd_sort(sort_opts);
        if (stream_cmd->parsed()) return cmd_stream(stream_opts);
        if (serve_cmd->parsed()) return cmd_serve(serve_opts, listen);
        if (gen_cmd->parsed()) return cmd_gen(gen_opts, gen_batches, gen_seed, gen_spread);
        if (bench_cmd->parsed()) return cmd_bench(bench_opts, bench_batches, bench_seed);
    } catch (const ConstraintViolationError& e) {
        std::cerr << "violation batch=" << e.report.batch_index
                  << " offending_min=" << e.report.offending_min
                  << " required_floor=" << e.report.required_floor << '\n'
                  << "error: " << e.what() << '\n';
        return kExitViolation;
    } catch (const TruncatedFrameError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDecode;
    } catch (const HexParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDecode;
    } catch (const MalformedFrameError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDecode;
    } catch (const KeyOutOfRangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDecode;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const LayoutError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GenerationInfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
