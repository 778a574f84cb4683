#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "litenet/bench.hpp"
#include "litenet/metrics.hpp"
#include "litenet/pipeline.hpp"
#include "oracles.hpp"

using namespace litenet;

namespace {

// two-pass reference implementations
double naive_rmse(const std::vector<double>& y, const std::vector<double>& yh) {
    double ss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) ss += (y[i] - yh[i]) * (y[i] - yh[i]);
    return std::sqrt(ss / static_cast<double>(y.size()));
}

double naive_r2(const std::vector<double>& y, const std::vector<double>& yh) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double res = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        res += (y[i] - yh[i]) * (y[i] - yh[i]);
        tot += (y[i] - mean) * (y[i] - mean);
    }
    return 1.0 - res / tot;
}

}  // namespace

TEST_CASE("rmse hand cases") {
    CHECK(rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(rmse({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
    // constant offset c on every element -> |c|
    CHECK(rmse({1.0, 5.0, -2.0}, {1.0 - 0.7, 5.0 - 0.7, -2.0 - 0.7}) ==
          doctest::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS_AS(rmse({}, {}), SizeError);
    CHECK_THROWS_AS(rmse({1.0}, {1.0, 2.0}), SizeError);
}

TEST_CASE("r2 hand cases") {
    CHECK(r2_score({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 1.0);
    CHECK(r2_score({1.0, 2.0, 3.0}, {2.0, 2.0, 2.0}) == 0.0);  // predicting the mean
    CHECK(r2_score({1.0, 2.0, 3.0}, {1.0, 2.0, 2.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(r2_score({1.0}, {1.0}), SizeError);
    CHECK_THROWS_AS(r2_score({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), DegenerateDataError);
}

TEST_CASE("rmse and r2 agree with the two-pass reference on random vectors") {
    Rng rng(61);
    for (int rep = 0; rep < 15; ++rep) {
        std::size_t n = 2 + rng.below(200);
        std::vector<double> y(n), yh(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(-5.0, 5.0);
            yh[i] = y[i] + rng.normal();
        }
        CHECK(rmse(y, yh) == doctest::Approx(naive_rmse(y, yh)).epsilon(1e-12));
        CHECK(r2_score(y, yh) == doctest::Approx(naive_r2(y, yh)).epsilon(1e-12));
    }
}

TEST_CASE("acf hand cases") {
    SUBCASE("lag zero is one for any valid series") {
        Rng rng(5);
        std::vector<double> x(64);
        for (double& v : x) v = rng.normal();
        AcfReport r = acf(x, 12);
        CHECK(r.values[0] == 1.0);
        for (double v : r.values) CHECK(std::abs(v) <= 1.0 + 1e-9);
    }
    SUBCASE("alternating +/-1 over 8 samples has rho(1) = -7/8") {
        std::vector<double> x = {1, -1, 1, -1, 1, -1, 1, -1};
        AcfReport r = acf(x, 1);
        CHECK(r.values[1] == doctest::Approx(-0.875).epsilon(1e-12));
    }
    SUBCASE("iid noise has small autocorrelation at every lag") {
        Rng rng(1);
        std::vector<double> x(5000);
        for (double& v : x) v = rng.normal();
        AcfReport r = acf(x, 10);
        for (std::size_t tau = 1; tau <= 10; ++tau) CHECK(std::abs(r.values[tau]) < 0.05);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(acf({1.0, 2.0}, 5), SizeError);  // too short for the lag
        std::vector<double> c(50, 3.0);
        CHECK_THROWS_AS(acf(c, 5), DegenerateDataError);
    }
}

TEST_CASE("acf is invariant under affine transforms") {
    Rng rng(77);
    std::vector<double> x(400);
    double prev = 0.0;
    for (double& v : x) {
        prev = 0.6 * prev + rng.normal();
        v = prev;
    }
    AcfReport base = acf(x, 8);
    std::vector<double> t = x;
    for (double& v : t) v = -3.7 * v + 11.0;
    AcfReport scaled = acf(t, 8);
    for (std::size_t tau = 0; tau <= 8; ++tau)
        CHECK(scaled.values[tau] == doctest::Approx(base.values[tau]).epsilon(1e-9));
}

namespace {

FusedModel quick_model(std::uint64_t seed, TrainConfig cfg = TrainConfig{},
                       WindowSet* out_ws = nullptr) {
    FeatureMatrix fm = oracles::make_planted(seed, 1221);
    SelectionConfig sc;
    sc.mi_threshold = 0.0;
    sc.top_m = 5;
    sc.seed = seed;
    SelectionReport rep = run_selection(fm.values, fm.y, sc);
    WindowSet ws = make_windows(select_columns(fm, rep.selected), 8);
    cfg.seed = seed;
    cfg.epochs = std::min<std::size_t>(cfg.epochs, 3);
    FusedModel m = train(ws, cfg, rep);
    if (out_ws) *out_ws = ws;
    return m;
}

}  // namespace

TEST_CASE("latency_bench records one sample per rep and exact order statistics") {
    WindowSet ws;
    FusedModel m = quick_model(23, TrainConfig{}, &ws);
    LatencyReport r = latency_bench(m, ws, 500, 20);
    REQUIRE(r.samples_ns.size() == 500);
    CHECK(r.reps == 500);
    CHECK(r.warmup == 20);
    CHECK(r.model_sparsity == model_stats(m).sparsity);

    std::vector<std::int64_t> sorted = r.samples_ns;
    std::sort(sorted.begin(), sorted.end());
    CHECK(r.p50_ns == sorted[static_cast<std::size_t>(std::ceil(0.50 * 500)) - 1]);
    CHECK(r.p95_ns == sorted[static_cast<std::size_t>(std::ceil(0.95 * 500)) - 1]);
    CHECK(r.p99_ns == sorted[static_cast<std::size_t>(std::ceil(0.99 * 500)) - 1]);
    double mean = 0.0;
    for (auto s : r.samples_ns) mean += static_cast<double>(s);
    mean /= 500.0;
    CHECK(r.mean_ns == doctest::Approx(mean).epsilon(1e-12));

    CHECK_THROWS_AS(latency_bench(m, ws, 0, 0), SizeError);
    WindowSet empty;
    CHECK_THROWS_AS(latency_bench(m, empty, 10, 0), SizeError);
}

TEST_CASE("repeated bench runs differ in timing but agree on the checksum") {
    WindowSet ws;
    FusedModel m = quick_model(29, TrainConfig{}, &ws);
    LatencyReport a = latency_bench(m, ws, 300, 10);
    LatencyReport b = latency_bench(m, ws, 300, 10);
    CHECK(a.prediction_checksum == b.prediction_checksum);
    // published reference timings are metadata only
    CHECK(a.reference_execution_ms == 35.0);
    CHECK(a.reference_latency_ms == 10.0);
}

TEST_CASE("execution_bench times extraction plus inference per input") {
    FeatureMatrix fm = oracles::make_planted(31, 821);
    SynthConfig scfg;
    scfg.n_bars = 821;
    scfg.seed = 31;
    scfg.volatility = 0.004;
    scfg.regime_shift_period = 600;
    scfg.n_noise_features = 4;
    scfg.signal_strength = 0.7;
    BarSeries bars = generate_synthetic(scfg);

    SelectionConfig sc;
    sc.mi_threshold = 0.0;
    sc.top_m = 5;
    sc.seed = 31;
    SelectionReport rep = run_selection(fm.values, fm.y, sc);
    WindowSet ws = make_windows(select_columns(fm, rep.selected), 8);
    TrainConfig cfg;
    cfg.seed = 31;
    cfg.epochs = 2;
    FusedModel m = train(ws, cfg, rep);

    // model columns live in the planted 5-column universe; map them back to
    // the feature-universe indices used by the single-window extractor
    std::vector<std::size_t> universe = {0, 6, 7, 8, 9};
    std::vector<std::size_t> source_cols;
    for (std::size_t s : rep.selected) source_cols.push_back(universe[s]);

    LatencyReport a = execution_bench(bars, m, 20, source_cols, 31, 200, 10);
    LatencyReport b = execution_bench(bars, m, 20, source_cols, 31, 200, 10);
    REQUIRE(a.samples_ns.size() == 200);
    CHECK(a.prediction_checksum == b.prediction_checksum);
    CHECK_THROWS_AS(execution_bench(bars, m, 20, {0, 1}, 31, 10, 0), SizeError);
}

TEST_CASE("run_pipeline produces a chronological holdout evaluation") {
    PipelineConfig cfg;
    cfg.synth.n_bars = 1421;
    cfg.synth.seed = 33;
    cfg.synth.volatility = 0.004;
    cfg.synth.regime_shift_period = 600;
    cfg.synth.signal_strength = 0.7;
    cfg.synth.n_noise_features = 2;
    cfg.window = 8;
    cfg.seed = 33;
    cfg.selection.seed = 33;
    cfg.selection.mi_threshold = 0.0;
    cfg.selection.top_m = 6;
    cfg.train.epochs = 4;
    cfg.train.seed = 33;
    cfg.train.prune_epochs = {2};

    FeatureMatrix fm = build_features(load_bars(cfg), cfg);
    PipelineResult res = run_pipeline(fm, cfg);
    CHECK(res.metrics.n == res.test_windows);
    CHECK(res.metrics.split_id == "chronological-80/20-tail");
    CHECK(res.metrics.rmse >= 0.0);
    CHECK(res.metrics.r2 <= 1.0);
    CHECK(res.latency_mean_ns > 0.0);
    CHECK(res.train_windows > res.test_windows);

    PipelineResult res2 = run_pipeline(fm, cfg);
    CHECK(res2.metrics.rmse == res.metrics.rmse);
    CHECK(res2.metrics.r2 == res.metrics.r2);
}

TEST_CASE("run_pipeline honors the dynamic re-selection flag deterministically") {
    PipelineConfig cfg;
    cfg.synth.n_bars = 1021;
    cfg.synth.seed = 39;
    cfg.synth.volatility = 0.004;
    cfg.synth.regime_shift_period = 600;
    cfg.synth.signal_strength = 0.7;
    cfg.synth.n_noise_features = 2;
    cfg.window = 8;
    cfg.seed = 39;
    cfg.selection.seed = 39;
    cfg.selection.mi_threshold = 0.0;
    cfg.selection.top_m = 5;
    cfg.train.epochs = 3;
    cfg.train.seed = 39;
    cfg.train.prune_epochs = {};
    cfg.dynamic_reselect = true;

    FeatureMatrix fm = build_features(load_bars(cfg), cfg);
    PipelineResult a = run_pipeline(fm, cfg);
    PipelineResult b = run_pipeline(fm, cfg);
    CHECK(a.model.selection.cycle == cfg.train.epochs - 1);  // one re-selection per epoch
    CHECK(a.metrics.rmse == b.metrics.rmse);
    CHECK(a.metrics.r2 == b.metrics.r2);
    CHECK(a.model.selection.selected == b.model.selection.selected);
}

TEST_CASE("sweep_experiment emits one row per axis value in order") {
    PipelineConfig cfg;
    cfg.synth.n_bars = 1221;
    cfg.synth.seed = 35;
    cfg.synth.volatility = 0.004;
    cfg.synth.regime_shift_period = 600;
    cfg.synth.signal_strength = 0.7;
    cfg.synth.n_noise_features = 2;
    cfg.window = 8;
    cfg.seed = 35;
    cfg.selection.seed = 35;
    cfg.selection.mi_threshold = 0.0;
    cfg.selection.top_m = 5;
    cfg.train.epochs = 2;
    cfg.train.seed = 35;
    cfg.train.prune_epochs = {};

    FeatureMatrix fm = build_features(load_bars(cfg), cfg);

    SUBCASE("window axis") {
        std::vector<SweepRow> rows =
            sweep_experiment(fm, SweepAxis::WindowSize, {8, 12, 16}, cfg);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].axis_value == 8.0);
        CHECK(rows[1].axis_value == 12.0);
        CHECK(rows[2].axis_value == 16.0);
        for (const SweepRow& r : rows) {
            CHECK(r.rmse > 0.0);
            CHECK(r.latency_mean_ns > 0.0);
        }
        std::string table = sweep_table(SweepAxis::WindowSize, rows);
        CHECK(table.find("window\trmse\tr2\tlatency_mean_ns") == 0);
    }
    SUBCASE("single-element axis equals a direct pipeline run") {
        std::vector<SweepRow> rows = sweep_experiment(fm, SweepAxis::MiThreshold, {0.05}, cfg);
        REQUIRE(rows.size() == 1);
        PipelineConfig direct = cfg;
        direct.selection.mi_threshold = 0.05;
        PipelineResult res = run_pipeline(fm, direct);
        CHECK(rows[0].rmse == res.metrics.rmse);
        CHECK(rows[0].r2 == res.metrics.r2);
    }
    SUBCASE("empty axis is a size error") {
        CHECK_THROWS_AS(sweep_experiment(fm, SweepAxis::WindowSize, {}, cfg), SizeError);
    }
}
