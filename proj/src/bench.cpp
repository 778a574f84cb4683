#include "litenet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace litenet {

namespace {

std::int64_t percentile(std::vector<std::int64_t> sorted, double q) {
    // nearest-rank on the sorted samples
    std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    return sorted[rank - 1];
}

void finalize(LatencyReport& report) {
    double sum = 0.0;
    for (auto s : report.samples_ns) sum += static_cast<double>(s);
    report.mean_ns = sum / static_cast<double>(report.samples_ns.size());
    std::vector<std::int64_t> sorted = report.samples_ns;
    std::sort(sorted.begin(), sorted.end());
    report.p50_ns = percentile(sorted, 0.50);
    report.p95_ns = percentile(sorted, 0.95);
    report.p99_ns = percentile(sorted, 0.99);
}

}  // namespace

LatencyReport latency_bench(const FusedModel& model, const WindowSet& windows,
                            std::size_t reps, std::size_t warmup) {
    if (reps < 1) throw SizeError("bench: reps must be >= 1");
    if (windows.size() == 0) throw SizeError("bench: need at least one window");

    LatencyReport report;
    report.reps = reps;
    report.warmup = warmup;
    report.model_sparsity = model_stats(model).sparsity;
    report.samples_ns.reserve(reps);

    using clock = std::chrono::steady_clock;
    double checksum = 0.0;
    for (std::size_t i = 0; i < warmup; ++i)
        checksum += fused_forward(windows.view(i % windows.size()), model);
    checksum = 0.0;  // warmup predictions are discarded

    for (std::size_t i = 0; i < reps; ++i) {
        MatrixView view = windows.view(i % windows.size());
        auto t0 = clock::now();
        double y = fused_forward(view, model);
        auto t1 = clock::now();
        checksum += y;
        report.samples_ns.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    report.prediction_checksum = checksum;
    finalize(report);
    return report;
}

LatencyReport execution_bench(const BarSeries& bars, const FusedModel& model,
                              std::size_t vol_window,
                              const std::vector<std::size_t>& source_cols,
                              std::uint64_t noise_seed, std::size_t reps, std::size_t warmup) {
    if (reps < 1) throw SizeError("bench: reps must be >= 1");
    if (source_cols.size() != model.d_input)
        throw SizeError("bench: source column count does not match model");
    const std::size_t first_valid = model.window + vol_window - 2;
    if (bars.size() <= first_valid) throw SizeError("bench: series too short");
    const std::size_t positions = bars.size() - first_valid;

    LatencyReport report;
    report.reps = reps;
    report.warmup = warmup;
    report.model_sparsity = model_stats(model).sparsity;
    report.samples_ns.reserve(reps);

    using clock = std::chrono::steady_clock;
    double checksum = 0.0;
    for (std::size_t i = 0; i < warmup; ++i) {
        std::size_t pos = first_valid + (i % positions);
        Matrix w = extract_window_features(bars, pos, model.window, vol_window, source_cols,
                                           noise_seed);
        checksum += fused_forward(MatrixView(w), model);
    }
    checksum = 0.0;

    for (std::size_t i = 0; i < reps; ++i) {
        std::size_t pos = first_valid + (i % positions);
        auto t0 = clock::now();
        Matrix w = extract_window_features(bars, pos, model.window, vol_window, source_cols,
                                           noise_seed);
        double y = fused_forward(MatrixView(w), model);
        auto t1 = clock::now();
        checksum += y;
        report.samples_ns.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    report.prediction_checksum = checksum;
    finalize(report);
    return report;
}

std::string latency_table(const LatencyReport& report) {
    std::ostringstream out;
    out << "metric\tvalue\n";
    out << "reps\t" << report.reps << "\n";
    out << "warmup\t" << report.warmup << "\n";
    out << "mean_ns\t" << format_g17(report.mean_ns) << "\n";
    out << "p50_ns\t" << report.p50_ns << "\n";
    out << "p95_ns\t" << report.p95_ns << "\n";
    out << "p99_ns\t" << report.p99_ns << "\n";
    out << "sparsity\t" << format_g17(report.model_sparsity) << "\n";
    out << "checksum\t" << format_g17(report.prediction_checksum) << "\n";
    out << "# mapping: execution = per-input extract+forward, latency = forward only\n";
    out << "# published reference (not asserted): execution "
        << format_g17(report.reference_execution_ms) << " ms, latency "
        << format_g17(report.reference_latency_ms) << " ms\n";
    return out.str();
}

}  // namespace litenet
