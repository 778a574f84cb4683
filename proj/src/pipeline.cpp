#include "litenet/pipeline.hpp"

#include <cmath>

#include <fstream>
#include <sstream>

#include "litenet/train.hpp"

namespace litenet {

BarSeries load_bars(const PipelineConfig& cfg) {
    if (cfg.source == PipelineConfig::Source::Csv) {
        std::ifstream in(cfg.csv_path);
        if (!in) throw DataError("cannot open CSV file '" + cfg.csv_path + "'");
        return parse_bar_csv(in);
    }
    return generate_synthetic(cfg.synth);
}

FeatureMatrix build_features(const BarSeries& bars, const PipelineConfig& cfg) {
    return build_feature_matrix(bars, cfg.horizon, cfg.vol_window, cfg.synth.n_noise_features,
                                cfg.seed);
}

PipelineResult run_pipeline(const FeatureMatrix& fm, const PipelineConfig& cfg,
                            std::size_t latency_reps) {
    const std::size_t n = fm.n();
    if (n < 10) throw SizeError("pipeline: need at least 10 feature rows");
    const std::size_t n_train = (n * 8) / 10;
    FeatureMatrix train_slice = slice_rows(fm, 0, n_train);
    FeatureMatrix test_slice = slice_rows(fm, n_train, n - n_train);

    PipelineResult result;
    result.selection = run_selection(train_slice.values, train_slice.y, cfg.selection);

    WindowSet train_set =
        make_windows(select_columns(train_slice, result.selection.selected), cfg.window);
    std::optional<ReselectContext> reselect;
    if (cfg.dynamic_reselect) reselect = ReselectContext{train_slice, cfg.selection};
    result.model = train(train_set, cfg.train, result.selection, reselect);

    WindowSet test_set =
        make_windows(select_columns(test_slice, result.model.selection.selected), cfg.window);
    result.train_windows = train_set.size();
    result.test_windows = test_set.size();

    result.test_predictions.resize(test_set.size());
    for (std::size_t i = 0; i < test_set.size(); ++i)
        result.test_predictions[i] = fused_forward(test_set.view(i), result.model);
    result.test_targets = test_set.targets;

    result.metrics.rmse = rmse(result.test_targets, result.test_predictions);
    result.metrics.r2 = r2_score(result.test_targets, result.test_predictions);
    result.metrics.n = test_set.size();
    result.metrics.split_id = "chronological-80/20-tail";

    if (latency_reps > 0) {
        LatencyReport lat = latency_bench(result.model, test_set, latency_reps,
                                          std::min<std::size_t>(latency_reps / 10 + 1, 50));
        result.latency_mean_ns = lat.mean_ns;
    }
    return result;
}

std::vector<SweepRow> sweep_experiment(const FeatureMatrix& fm, SweepAxis axis,
                                       const std::vector<double>& values,
                                       const PipelineConfig& cfg) {
    if (values.empty()) throw SizeError("sweep: empty axis");
    std::vector<SweepRow> rows;
    for (double v : values) {
        PipelineConfig run_cfg = cfg;
        if (axis == SweepAxis::WindowSize) {
            if (v < 1 || v != std::floor(v))
                throw SizeError("sweep: window sizes must be integers >= 1");
            run_cfg.window = static_cast<std::size_t>(v);
        } else {
            if (v < 0) throw SizeError("sweep: MI thresholds must be >= 0");
            run_cfg.selection.mi_threshold = v;
        }
        PipelineResult res = run_pipeline(fm, run_cfg);
        rows.push_back({v, res.metrics.rmse, res.metrics.r2, res.latency_mean_ns});
    }
    return rows;
}

std::string sweep_table(SweepAxis axis, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << (axis == SweepAxis::WindowSize ? "window" : "mi_threshold")
        << "\trmse\tr2\tlatency_mean_ns\n";
    for (const SweepRow& r : rows)
        out << format_g17(r.axis_value) << '\t' << format_g17(r.rmse) << '\t'
            << format_g17(r.r2) << '\t' << format_g17(r.latency_mean_ns) << "\n";
    return out.str();
}

}  // namespace litenet
