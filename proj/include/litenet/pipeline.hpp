#pragma once

#include <string>
#include <vector>

#include "litenet/bench.hpp"
#include "litenet/config.hpp"
#include "litenet/metrics.hpp"
#include "litenet/model.hpp"

namespace litenet {

// Loads bars per the configured source (CSV path or synthetic generator).
BarSeries load_bars(const PipelineConfig& cfg);

// Feature matrix over the configured horizon / vol_window / noise columns.
FeatureMatrix build_features(const BarSeries& bars, const PipelineConfig& cfg);

struct PipelineResult {
    SelectionReport selection;   // selection fitted on the training slice
    FusedModel model;
    MetricsReport metrics;       // held-out chronological tail (20%)
    double latency_mean_ns = 0.0;
    std::vector<double> test_predictions;
    std::vector<double> test_targets;
    std::size_t train_windows = 0;
    std::size_t test_windows = 0;
};

// select -> train -> evaluate on a chronological 80/20 split. Latency is
// the mean fused_forward time over the held-out windows.
PipelineResult run_pipeline(const FeatureMatrix& fm, const PipelineConfig& cfg,
                            std::size_t latency_reps = 200);

enum class SweepAxis { WindowSize, MiThreshold };

struct SweepRow {
    double axis_value = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    double latency_mean_ns = 0.0;
};

// One full pipeline run per axis value, rows in the given order.
std::vector<SweepRow> sweep_experiment(const FeatureMatrix& fm, SweepAxis axis,
                                       const std::vector<double>& values,
                                       const PipelineConfig& cfg);

std::string sweep_table(SweepAxis axis, const std::vector<SweepRow>& rows);

}  // namespace litenet
