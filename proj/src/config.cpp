#include "litenet/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace litenet {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return x;
}

std::size_t parse_count(const std::string& key, const std::string& v, long long min_value) {
    long long x = parse_int(key, v);
    if (x < min_value)
        throw ConfigError("key '" + key + "': must be >= " + std::to_string(min_value));
    return static_cast<std::size_t>(x);
}

std::uint64_t parse_seed(const std::string& key, const std::string& v) {
    long long x = parse_int(key, v);
    if (x < 0) throw ConfigError("key '" + key + "': seed must be >= 0");
    return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<std::size_t> parse_count_list(const std::string& key, const std::string& v,
                                          long long min_value) {
    std::vector<std::size_t> out;
    if (trim(v).empty()) return out;
    std::istringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(parse_count(key, trim(tok), min_value));
    return out;
}

std::string join_counts(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    synth.validate();
    train.validate();
    if (source == Source::Csv && csv_path.empty())
        throw ConfigError("key 'csv_path': required when source = csv");
    if (horizon < 1) throw ConfigError("key 'horizon': must be >= 1");
    if (vol_window < 2) throw ConfigError("key 'vol_window': must be >= 2");
    if (window < 1) throw ConfigError("key 'window': must be >= 1");
    if (selection.k < 1) throw ConfigError("key 'k': must be >= 1");
    if (selection.top_m < 1) throw ConfigError("key 'top_m': must be >= 1");
    if (selection.grid_size < 8) throw ConfigError("key 'grid_size': must be >= 8");
    if (selection.kmeans_max_iter < 1) throw ConfigError("key 'kmeans_max_iter': must be >= 1");
    if (selection.kmeans_tol < 0) throw ConfigError("key 'kmeans_tol': must be >= 0");
    if (selection.mi_threshold < 0) throw ConfigError("key 'mi_threshold': must be >= 0");
    if (bench_reps < 1) throw ConfigError("key 'reps': must be >= 1");
}

PipelineConfig load_config(std::istream& in) {
    PipelineConfig cfg;
    std::string section;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("malformed section header '" + t + "' (line " +
                                  std::to_string(line_no) + ")");
            section = t.substr(1, t.size() - 2);
            if (section != "data" && section != "pipeline" && section != "train" &&
                section != "bench")
                throw ConfigError("unknown section '" + section + "'");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' (line " + std::to_string(line_no) + ")");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw ConfigError("key '" + key + "' appears before any [section] header");

        if (section == "data") {
            if (key == "source") {
                if (value == "synthetic")
                    cfg.source = PipelineConfig::Source::Synthetic;
                else if (value == "csv")
                    cfg.source = PipelineConfig::Source::Csv;
                else
                    throw ConfigError("key 'source': expected synthetic or csv");
            } else if (key == "csv_path")
                cfg.csv_path = value;
            else if (key == "n_bars")
                cfg.synth.n_bars = parse_count(key, value, 0);
            else if (key == "seed")
                cfg.synth.seed = parse_seed(key, value);
            else if (key == "drift")
                cfg.synth.drift = parse_real(key, value);
            else if (key == "volatility") {
                cfg.synth.volatility = parse_real(key, value);
                if (cfg.synth.volatility < 0) throw ConfigError("key 'volatility': must be >= 0");
            } else if (key == "regime_period")
                cfg.synth.regime_shift_period = parse_count(key, value, 1);
            else if (key == "noise_features")
                cfg.synth.n_noise_features = parse_count(key, value, 0);
            else if (key == "signal_strength") {
                cfg.synth.signal_strength = parse_real(key, value);
                if (cfg.synth.signal_strength < 0 || cfg.synth.signal_strength >= 1)
                    throw ConfigError("key 'signal_strength': must be in [0, 1)");
            } else
                throw ConfigError("unknown key '" + key + "' in [data]");
        } else if (section == "pipeline") {
            if (key == "horizon")
                cfg.horizon = parse_count(key, value, 1);
            else if (key == "vol_window")
                cfg.vol_window = parse_count(key, value, 2);
            else if (key == "window")
                cfg.window = parse_count(key, value, 1);
            else if (key == "k")
                cfg.selection.k = parse_count(key, value, 1);
            else if (key == "mi_threshold") {
                cfg.selection.mi_threshold = parse_real(key, value);
                if (cfg.selection.mi_threshold < 0)
                    throw ConfigError("key 'mi_threshold': must be >= 0");
            } else if (key == "top_m")
                cfg.selection.top_m = parse_count(key, value, 1);
            else if (key == "grid_size")
                cfg.selection.grid_size = parse_count(key, value, 8);
            else if (key == "kmeans_max_iter")
                cfg.selection.kmeans_max_iter = parse_count(key, value, 1);
            else if (key == "kmeans_tol") {
                cfg.selection.kmeans_tol = parse_real(key, value);
                if (cfg.selection.kmeans_tol < 0)
                    throw ConfigError("key 'kmeans_tol': must be >= 0");
            } else if (key == "dynamic_reselect")
                cfg.dynamic_reselect = parse_bool(key, value);
            else if (key == "seed") {
                cfg.seed = parse_seed(key, value);
                cfg.selection.seed = cfg.seed;
            } else
                throw ConfigError("unknown key '" + key + "' in [pipeline]");
        } else if (section == "train") {
            if (key == "epochs")
                cfg.train.epochs = parse_count(key, value, 0);
            else if (key == "batch_size")
                cfg.train.batch_size = parse_count(key, value, 1);
            else if (key == "lr0") {
                cfg.train.lr0 = parse_real(key, value);
                if (cfg.train.lr0 <= 0) throw ConfigError("key 'lr0': must be > 0");
            } else if (key == "lr_halving_period")
                cfg.train.lr_halving_period = parse_count(key, value, 1);
            else if (key == "adam_beta1")
                cfg.train.adam_beta1 = parse_real(key, value);
            else if (key == "adam_beta2")
                cfg.train.adam_beta2 = parse_real(key, value);
            else if (key == "adam_eps")
                cfg.train.adam_eps = parse_real(key, value);
            else if (key == "prune_epsilon") {
                cfg.train.prune_epsilon = parse_real(key, value);
                if (cfg.train.prune_epsilon < 0)
                    throw ConfigError("key 'prune_epsilon': must be >= 0");
            } else if (key == "penalty_lambda") {
                cfg.train.penalty_lambda = parse_real(key, value);
                if (cfg.train.penalty_lambda < 0)
                    throw ConfigError("key 'penalty_lambda': must be >= 0");
            } else if (key == "kernels") {
                cfg.train.kernel_sizes = parse_count_list(key, value, 1);
                if (cfg.train.kernel_sizes.empty())
                    throw ConfigError("key 'kernels': must list at least one kernel size");
            } else if (key == "prune_epochs")
                cfg.train.prune_epochs = parse_count_list(key, value, 0);
            else if (key == "seed")
                cfg.train.seed = parse_seed(key, value);
            else
                throw ConfigError("unknown key '" + key + "' in [train]");
        } else {  // bench
            if (key == "reps")
                cfg.bench_reps = parse_count(key, value, 1);
            else if (key == "warmup")
                cfg.bench_warmup = parse_count(key, value, 0);
            else
                throw ConfigError("unknown key '" + key + "' in [bench]");
        }
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config_string(const std::string& text) {
    std::istringstream ss(text);
    return load_config(ss);
}

std::string serialize_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "[data]\n";
    out << "source = " << (cfg.source == PipelineConfig::Source::Csv ? "csv" : "synthetic")
        << "\n";
    if (!cfg.csv_path.empty()) out << "csv_path = " << cfg.csv_path << "\n";
    out << "n_bars = " << cfg.synth.n_bars << "\n";
    out << "seed = " << cfg.synth.seed << "\n";
    out << "drift = " << format_g17(cfg.synth.drift) << "\n";
    out << "volatility = " << format_g17(cfg.synth.volatility) << "\n";
    out << "regime_period = " << cfg.synth.regime_shift_period << "\n";
    out << "noise_features = " << cfg.synth.n_noise_features << "\n";
    out << "signal_strength = " << format_g17(cfg.synth.signal_strength) << "\n";
    out << "[pipeline]\n";
    out << "horizon = " << cfg.horizon << "\n";
    out << "vol_window = " << cfg.vol_window << "\n";
    out << "window = " << cfg.window << "\n";
    out << "k = " << cfg.selection.k << "\n";
    out << "mi_threshold = " << format_g17(cfg.selection.mi_threshold) << "\n";
    out << "top_m = " << cfg.selection.top_m << "\n";
    out << "grid_size = " << cfg.selection.grid_size << "\n";
    out << "kmeans_max_iter = " << cfg.selection.kmeans_max_iter << "\n";
    out << "kmeans_tol = " << format_g17(cfg.selection.kmeans_tol) << "\n";
    out << "dynamic_reselect = " << (cfg.dynamic_reselect ? "true" : "false") << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "[train]\n";
    out << "epochs = " << cfg.train.epochs << "\n";
    out << "batch_size = " << cfg.train.batch_size << "\n";
    out << "lr0 = " << format_g17(cfg.train.lr0) << "\n";
    out << "lr_halving_period = " << cfg.train.lr_halving_period << "\n";
    out << "adam_beta1 = " << format_g17(cfg.train.adam_beta1) << "\n";
    out << "adam_beta2 = " << format_g17(cfg.train.adam_beta2) << "\n";
    out << "adam_eps = " << format_g17(cfg.train.adam_eps) << "\n";
    out << "prune_epsilon = " << format_g17(cfg.train.prune_epsilon) << "\n";
    out << "penalty_lambda = " << format_g17(cfg.train.penalty_lambda) << "\n";
    out << "kernels = " << join_counts(cfg.train.kernel_sizes) << "\n";
    out << "prune_epochs = " << join_counts(cfg.train.prune_epochs) << "\n";
    out << "seed = " << cfg.train.seed << "\n";
    out << "[bench]\n";
    out << "reps = " << cfg.bench_reps << "\n";
    out << "warmup = " << cfg.bench_warmup << "\n";
    return out.str();
}

}  // namespace litenet
