#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litenet/market_data.hpp"
#include "litenet/model.hpp"

namespace litenet {

// Wall-time measurements from a single-threaded timed loop. The published
// reference timings are carried as metadata only and never asserted.
struct LatencyReport {
    std::vector<std::int64_t> samples_ns;  // one per timed rep, warmup excluded
    double mean_ns = 0.0;
    std::int64_t p50_ns = 0;
    std::int64_t p95_ns = 0;
    std::int64_t p99_ns = 0;
    std::size_t reps = 0;
    std::size_t warmup = 0;
    double model_sparsity = 0.0;
    double prediction_checksum = 0.0;  // consumes outputs so the loop cannot be elided
    double reference_execution_ms = 35.0;  // reference metadata
    double reference_latency_ms = 10.0;    // reference metadata
};

// Times fused_forward alone ("latency"), cycling through the given windows.
LatencyReport latency_bench(const FusedModel& model, const WindowSet& windows,
                            std::size_t reps, std::size_t warmup);

// Times the full per-input step ("execution time"): single-window feature
// extraction from raw bars followed by inference. source_cols are feature
// universe indices matching the model's input columns.
LatencyReport execution_bench(const BarSeries& bars, const FusedModel& model,
                              std::size_t vol_window,
                              const std::vector<std::size_t>& source_cols,
                              std::uint64_t noise_seed, std::size_t reps, std::size_t warmup);

std::string latency_table(const LatencyReport& report);

}  // namespace litenet
