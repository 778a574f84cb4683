#include "litenet/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "litenet/bench.hpp"
#include "litenet/config.hpp"
#include "litenet/metrics.hpp"
#include "litenet/model_io.hpp"
#include "litenet/pipeline.hpp"
#include "litenet/train.hpp"

namespace litenet {

namespace {

PipelineConfig config_from_path(const std::string& config_path) {
    std::string path = config_path;
    if (path.empty()) {
        const char* env = std::getenv("LITENET_CONFIG");
        if (env) path = env;
    }
    if (path.empty()) return PipelineConfig{};  // defaults
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    return load_config(in);
}

BarSeries bars_from(const PipelineConfig& cfg, const std::string& data_path) {
    if (!data_path.empty()) {
        std::ifstream in(data_path);
        if (!in) throw DataError("cannot open CSV file '" + data_path + "'");
        return parse_bar_csv(in);
    }
    return load_bars(cfg);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write to '" + path + "'");
    out << text;
    if (!out) throw DataError("failed while writing '" + path + "'");
}

// Emits to the --out path when given, otherwise to the report stream.
void emit(const std::string& out_path, const std::string& text, std::ostream& out,
          CommandOutcome& outcome) {
    if (out_path.empty())
        out << text;
    else {
        write_text(out_path, text);
        outcome.outputs.push_back(out_path);
    }
}

struct PredictSetup {
    LoadedModel loaded;
    PipelineConfig cfg;
    BarSeries bars;
    WindowSet windows;
};

PredictSetup prepare_prediction(const std::string& model_path, const std::string& data_path) {
    PredictSetup ps;
    std::ifstream min(model_path);
    if (!min) throw DataError("cannot open model file '" + model_path + "'");
    ps.loaded = load_model(min);
    ps.cfg = load_config_string(ps.loaded.config_echo);
    ps.bars = bars_from(ps.cfg, data_path);
    FeatureMatrix fm = build_features(ps.bars, ps.cfg);
    ps.windows = make_windows(select_columns(fm, ps.loaded.model.selection.selected),
                              ps.loaded.model.window);
    return ps;
}

}  // namespace

CommandOutcome run_cli(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    CommandOutcome outcome;

    CLI::App app{"litenet: dynamic feature selection + lightweight conv predictor"};
    app.require_subcommand(1);

    std::string config_path, data_path, out_path, model_path, metrics_path;
    std::string axis_name = "window", values_csv, bench_mode = "latency";
    std::size_t reps = 10000, warmup = 100, max_lag = 20;

    auto* synth = app.add_subcommand("synth", "generate a synthetic OHLCV CSV");
    synth->add_option("--config", config_path, "config file path");
    synth->add_option("--out", out_path, "output CSV path")->required();

    auto* select = app.add_subcommand("select", "run feature selection, print the report");
    select->add_option("--config", config_path, "config file path");
    select->add_option("--data", data_path, "input CSV (default: configured source)");
    select->add_option("--out", out_path, "write the report here instead of stdout");

    auto* train_cmd = app.add_subcommand("train", "train a model on the 80% head split");
    train_cmd->add_option("--config", config_path, "config file path");
    train_cmd->add_option("--data", data_path, "input CSV (default: configured source)");
    train_cmd->add_option("--out", model_path, "model artifact path")->required();
    train_cmd->add_option("--metrics", metrics_path, "write held-out metrics here");

    auto* predict = app.add_subcommand("predict", "stream predictions, one per line");
    predict->add_option("--model", model_path, "model artifact path")->required();
    predict->add_option("--data", data_path, "input CSV path")->required();
    predict->add_option("--out", out_path, "write predictions here instead of stdout");

    auto* bench = app.add_subcommand("bench", "measure inference latency");
    bench->add_option("--model", model_path, "model artifact path")->required();
    bench->add_option("--data", data_path, "input CSV path")->required();
    bench->add_option("--reps", reps, "timed repetitions");
    bench->add_option("--warmup", warmup, "discarded warmup repetitions");
    bench->add_option("--mode", bench_mode, "latency (forward only) or execution (extract+forward)");
    bench->add_option("--out", out_path, "write the report here instead of stdout");

    auto* acf_cmd = app.add_subcommand("acf", "autocorrelation of close and return series");
    acf_cmd->add_option("--data", data_path, "input CSV path")->required();
    acf_cmd->add_option("--max-lag", max_lag, "largest lag");
    acf_cmd->add_option("--out", out_path, "write the table here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "window-size or MI-threshold sweep");
    sweep->add_option("--config", config_path, "config file path");
    sweep->add_option("--data", data_path, "input CSV (default: configured source)");
    sweep->add_option("--axis", axis_name, "window | threshold")->required();
    sweep->add_option("--values", values_csv, "comma-separated axis values")->required();
    sweep->add_option("--out", out_path, "write the table here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (synth->parsed()) {
            PipelineConfig cfg = config_from_path(config_path);
            BarSeries series = generate_synthetic(cfg.synth);
            std::ostringstream csv;
            write_bar_csv(series, csv);
            write_text(out_path, csv.str());
            outcome.outputs.push_back(out_path);
            outcome.summary =
                "wrote " + std::to_string(series.size()) + " bars to " + out_path;
        } else if (select->parsed()) {
            PipelineConfig cfg = config_from_path(config_path);
            BarSeries series = bars_from(cfg, data_path);
            FeatureMatrix fm = build_features(series, cfg);
            SelectionReport report = run_selection(fm.values, fm.y, cfg.selection);
            emit(out_path, selection_table(report, fm.col_names), out, outcome);
            outcome.summary = "selected " + std::to_string(report.selected.size()) + " of " +
                              std::to_string(fm.d()) + " features";
        } else if (train_cmd->parsed()) {
            PipelineConfig cfg = config_from_path(config_path);
            BarSeries series = bars_from(cfg, data_path);
            FeatureMatrix fm = build_features(series, cfg);
            PipelineResult res = run_pipeline(fm, cfg, 0);
            std::ostringstream artifact;
            save_model(artifact, res.model, serialize_config(cfg));
            write_text(model_path, artifact.str());
            outcome.outputs.push_back(model_path);
            std::ostringstream metrics;
            metrics << "metric\tvalue\n"
                    << "rmse\t" << format_g17(res.metrics.rmse) << "\n"
                    << "r2\t" << format_g17(res.metrics.r2) << "\n"
                    << "n_test\t" << res.metrics.n << "\n"
                    << "split\t" << res.metrics.split_id << "\n";
            if (!metrics_path.empty()) {
                write_text(metrics_path, metrics.str());
                outcome.outputs.push_back(metrics_path);
            } else {
                out << metrics.str();
            }
            outcome.summary = "trained model -> " + model_path +
                              " (held-out rmse=" + format_g17(res.metrics.rmse) +
                              ", r2=" + format_g17(res.metrics.r2) + ")";
        } else if (predict->parsed()) {
            PredictSetup ps = prepare_prediction(model_path, data_path);
            std::ostringstream preds;
            for (std::size_t i = 0; i < ps.windows.size(); ++i)
                preds << format_g17(fused_forward(ps.windows.view(i), ps.loaded.model)) << "\n";
            emit(out_path, preds.str(), out, outcome);
            outcome.summary = std::to_string(ps.windows.size()) + " predictions";
        } else if (bench->parsed()) {
            if (reps < 1) throw UsageError("--reps must be >= 1");
            PredictSetup ps = prepare_prediction(model_path, data_path);
            LatencyReport report;
            if (bench_mode == "latency") {
                report = latency_bench(ps.loaded.model, ps.windows, reps, warmup);
            } else if (bench_mode == "execution") {
                report = execution_bench(ps.bars, ps.loaded.model, ps.cfg.vol_window,
                                         ps.loaded.model.selection.selected, ps.cfg.seed, reps,
                                         warmup);
            } else {
                throw UsageError("--mode must be latency or execution");
            }
            emit(out_path, latency_table(report), out, outcome);
            outcome.summary = bench_mode + " mean " + format_g17(report.mean_ns) + " ns over " +
                              std::to_string(reps) + " reps";
        } else if (acf_cmd->parsed()) {
            std::ifstream in(data_path);
            if (!in) throw DataError("cannot open CSV file '" + data_path + "'");
            BarSeries series = parse_bar_csv(in);
            std::vector<double> closes;
            closes.reserve(series.size());
            for (const Bar& b : series.bars) closes.push_back(b.close);
            std::vector<double> returns;
            for (std::size_t t = 1; t < closes.size(); ++t)
                returns.push_back((closes[t] - closes[t - 1]) / closes[t - 1]);
            AcfReport close_acf = acf(closes, max_lag);
            AcfReport return_acf = acf(returns, max_lag);
            emit(out_path, acf_table(close_acf, return_acf), out, outcome);
            outcome.summary = "acf over " + std::to_string(series.size()) + " bars, max lag " +
                              std::to_string(max_lag);
        } else if (sweep->parsed()) {
            SweepAxis axis;
            if (axis_name == "window")
                axis = SweepAxis::WindowSize;
            else if (axis_name == "threshold")
                axis = SweepAxis::MiThreshold;
            else
                throw UsageError("--axis must be window or threshold");
            std::vector<double> values;
            std::istringstream vs(values_csv);
            std::string tok;
            while (std::getline(vs, tok, ',')) {
                char* end = nullptr;
                double v = std::strtod(tok.c_str(), &end);
                if (tok.empty() || end != tok.c_str() + tok.size())
                    throw UsageError("--values: bad number '" + tok + "'");
                values.push_back(v);
            }
            if (values.empty()) throw UsageError("--values: need at least one value");
            PipelineConfig cfg = config_from_path(config_path);
            BarSeries series = bars_from(cfg, data_path);
            FeatureMatrix fm = build_features(series, cfg);
            std::vector<SweepRow> rows = sweep_experiment(fm, axis, values, cfg);
            emit(out_path, sweep_table(axis, rows), out, outcome);
            outcome.summary = std::to_string(rows.size()) + "-row sweep over " + axis_name;
        }
        if (!outcome.summary.empty()) err << outcome.summary << "\n";
        return outcome;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        outcome.exit_code = 0;
        return outcome;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        outcome.exit_code = 1;
        return outcome;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        outcome.exit_code = 1;
        return outcome;
    } catch (const DegenerateDataError& e) {
        err << "degenerate data: " << e.what() << "\n";
        outcome.exit_code = 3;
        return outcome;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        outcome.exit_code = 2;
        return outcome;
    }
}

}  // namespace litenet
