#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "litenet/cli.hpp"
#include "litenet/config.hpp"
#include "litenet/model_io.hpp"
#include "litenet/pipeline.hpp"

using namespace litenet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("litenet_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

const char* kTestConfig =
    "[data]\n"
    "n_bars = 1221\n"
    "seed = 42\n"
    "volatility = 0.004\n"
    "regime_period = 600\n"
    "noise_features = 2\n"
    "signal_strength = 0.7\n"
    "[pipeline]\n"
    "window = 8\n"
    "mi_threshold = 0\n"
    "top_m = 6\n"
    "seed = 42\n"
    "[train]\n"
    "epochs = 2\n"
    "seed = 42\n"
    "prune_epochs = 1\n";

CommandOutcome run(const std::vector<std::string>& args, std::string* out_text = nullptr,
                   std::string* err_text = nullptr) {
    std::ostringstream out, err;
    CommandOutcome outcome = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return outcome;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("unknown subcommands and flags exit 1") {
    std::string err;
    CHECK(run({"frobnicate"}, nullptr, &err).exit_code == 1);
    CHECK(!err.empty());
    CHECK(run({"synth", "--nope", "x"}, nullptr, &err).exit_code == 1);
    CHECK(run({}, nullptr, &err).exit_code == 1);  // a subcommand is required
}

TEST_CASE("synth is deterministic and parseable") {
    TempDir dir;
    std::ofstream(dir.file("c.cfg")) << kTestConfig;
    CommandOutcome a =
        run({"synth", "--config", dir.file("c.cfg"), "--out", dir.file("a.csv")});
    CommandOutcome b =
        run({"synth", "--config", dir.file("c.cfg"), "--out", dir.file("b.csv")});
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.outputs == std::vector<std::string>{dir.file("a.csv")});
    std::string csv_a = slurp(dir.file("a.csv"));
    CHECK(csv_a == slurp(dir.file("b.csv")));
    CHECK(csv_a.rfind("timestamp,open,high,low,close,volume\n", 0) == 0);
}

TEST_CASE("select emits the report table") {
    TempDir dir;
    std::ofstream(dir.file("c.cfg")) << kTestConfig;
    std::string out;
    CommandOutcome res = run({"select", "--config", dir.file("c.cfg")}, &out);
    REQUIRE(res.exit_code == 0);
    CHECK(out.find("feature\tweight\tmi\tselected") == 0);
    CHECK(out.find("ret_simple") != std::string::npos);
}

TEST_CASE("train, predict and bench work end to end") {
    TempDir dir;
    std::ofstream(dir.file("c.cfg")) << kTestConfig;
    REQUIRE(run({"synth", "--config", dir.file("c.cfg"), "--out", dir.file("data.csv")})
                .exit_code == 0);

    std::string train_out;
    CommandOutcome tr = run({"train", "--config", dir.file("c.cfg"), "--data",
                             dir.file("data.csv"), "--out", dir.file("model.ln")},
                            &train_out);
    REQUIRE(tr.exit_code == 0);
    CHECK(train_out.find("rmse") != std::string::npos);

    std::string preds;
    CommandOutcome pr = run(
        {"predict", "--model", dir.file("model.ln"), "--data", dir.file("data.csv")}, &preds);
    REQUIRE(pr.exit_code == 0);

    // prediction count equals the window-set size of the data
    {
        std::ifstream min(dir.file("model.ln"));
        LoadedModel loaded = load_model(min);
        PipelineConfig cfg = load_config_string(loaded.config_echo);
        std::ifstream din(dir.file("data.csv"));
        BarSeries bars = parse_bar_csv(din);
        FeatureMatrix fm = build_features(bars, cfg);
        std::size_t expect = fm.n() - loaded.model.window + 1;
        std::size_t lines = 0;
        for (char ch : preds)
            if (ch == '\n') ++lines;
        CHECK(lines == expect);

        // thin adapter: CLI output equals direct module calls bit for bit
        WindowSet ws = make_windows(select_columns(fm, loaded.model.selection.selected),
                                    loaded.model.window);
        std::istringstream ps(preds);
        std::string line;
        std::size_t i = 0;
        while (std::getline(ps, line)) {
            CHECK(line == format_g17(fused_forward(ws.view(i), loaded.model)));
            ++i;
        }
    }

    // predict output is bit-identical across runs
    std::string preds2;
    run({"predict", "--model", dir.file("model.ln"), "--data", dir.file("data.csv")}, &preds2);
    CHECK(preds == preds2);

    std::string bench_out;
    CommandOutcome be = run({"bench", "--model", dir.file("model.ln"), "--data",
                             dir.file("data.csv"), "--reps", "50", "--warmup", "5"},
                            &bench_out);
    REQUIRE(be.exit_code == 0);
    CHECK(bench_out.find("mean_ns") != std::string::npos);
    CHECK(bench_out.find("checksum") != std::string::npos);

    std::string exec_out;
    CommandOutcome ex = run({"bench", "--model", dir.file("model.ln"), "--data",
                             dir.file("data.csv"), "--reps", "50", "--warmup", "5", "--mode",
                             "execution"},
                            &exec_out);
    CHECK(ex.exit_code == 0);

    std::string err;
    CommandOutcome bad = run({"bench", "--model", dir.file("model.ln"), "--data",
                              dir.file("data.csv"), "--reps", "0"},
                             nullptr, &err);
    CHECK(bad.exit_code == 1);
    CHECK(err.find("usage") != std::string::npos);
}

TEST_CASE("acf subcommand and exit-code taxonomy") {
    TempDir dir;
    std::ofstream(dir.file("c.cfg")) << kTestConfig;
    REQUIRE(run({"synth", "--config", dir.file("c.cfg"), "--out", dir.file("data.csv")})
                .exit_code == 0);
    std::string out;
    CommandOutcome res =
        run({"acf", "--data", dir.file("data.csv"), "--max-lag", "5"}, &out);
    REQUIRE(res.exit_code == 0);
    CHECK(out.find("lag\tacf_close\tacf_return") == 0);

    // constant series: degenerate numeric condition -> exit 3
    {
        std::ofstream c(dir.file("flat.csv"));
        c << "timestamp,open,high,low,close,volume\n";
        for (int i = 1; i <= 50; ++i)
            c << i << ",100,100,100,100,10\n";
    }
    CHECK(run({"acf", "--data", dir.file("flat.csv"), "--max-lag", "5"}).exit_code == 3);

    // missing file -> exit 2
    CHECK(run({"acf", "--data", dir.file("missing.csv")}).exit_code == 2);
    // malformed csv -> exit 2
    {
        std::ofstream c(dir.file("bad.csv"));
        c << "timestamp,open\n1,2\n";
    }
    CHECK(run({"predict", "--model", dir.file("nope.ln"), "--data", dir.file("bad.csv")})
              .exit_code == 2);
}

TEST_CASE("sweep emits the requested rows") {
    TempDir dir;
    std::ofstream(dir.file("c.cfg")) << kTestConfig;
    std::string out;
    CommandOutcome res = run({"sweep", "--config", dir.file("c.cfg"), "--axis", "window",
                              "--values", "8,10"},
                             &out);
    REQUIRE(res.exit_code == 0);
    CHECK(out.find("window\trmse\tr2\tlatency_mean_ns") == 0);
    std::size_t lines = 0;
    for (char ch : out)
        if (ch == '\n') ++lines;
    CHECK(lines == 3);  // header + 2 rows
    CHECK(run({"sweep", "--config", dir.file("c.cfg"), "--axis", "bogus", "--values", "1"})
              .exit_code == 1);
}

TEST_CASE("LITENET_CONFIG is the config-path fallback") {
    TempDir dir;
    std::ofstream(dir.file("c.cfg")) << kTestConfig;
    ::setenv("LITENET_CONFIG", dir.file("c.cfg").c_str(), 1);
    CommandOutcome res = run({"synth", "--out", dir.file("env.csv")});
    ::unsetenv("LITENET_CONFIG");
    REQUIRE(res.exit_code == 0);
    PipelineConfig cfg = load_config_string(kTestConfig);
    CHECK(slurp(dir.file("env.csv")).size() > 100);
    // written series length matches the config the env var pointed at
    std::istringstream in(slurp(dir.file("env.csv")));
    CHECK(parse_bar_csv(in).size() == cfg.synth.n_bars);
}
