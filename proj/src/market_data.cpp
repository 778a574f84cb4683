#include "litenet/market_data.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace litenet {

namespace {

const char* kHeader = "timestamp,open,high,low,close,volume";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_i64(const std::string& s, std::size_t line) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("non-integer timestamp '" + s + "'", line);
    return v;
}

double parse_f64(const std::string& s, const char* what, std::size_t line) {
    if (s.empty()) throw ParseError(std::string("empty ") + what + " field", line);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw ParseError(std::string("non-numeric ") + what + " field '" + s + "'", line);
    return v;
}

void validate_bar(const Bar& b, std::size_t line) {
    if (b.open <= 0 || b.high <= 0 || b.low <= 0 || b.close <= 0)
        throw ParseError("prices must be positive", line);
    if (b.volume < 0) throw ParseError("volume must be non-negative", line);
    if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close))
        throw ParseError("OHLC relation violated (low <= min(open,close) <= max <= high)", line);
}

}  // namespace

BarSeries parse_bar_csv(std::istream& in) {
    BarSeries series;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw ParseError("header must be '" + std::string(kHeader) + "'", line_no);

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // tolerate a trailing blank line
        auto fields = split_fields(line);
        if (fields.size() != 6)
            throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), line_no);
        Bar b;
        b.timestamp = parse_i64(fields[0], line_no);
        b.open = parse_f64(fields[1], "open", line_no);
        b.high = parse_f64(fields[2], "high", line_no);
        b.low = parse_f64(fields[3], "low", line_no);
        b.close = parse_f64(fields[4], "close", line_no);
        b.volume = parse_f64(fields[5], "volume", line_no);
        validate_bar(b, line_no);
        if (!series.bars.empty() && b.timestamp <= series.bars.back().timestamp)
            throw ParseError("timestamps not strictly increasing", line_no);
        series.bars.push_back(b);
    }
    return series;
}

void write_bar_csv(const BarSeries& series, std::ostream& out) {
    out << kHeader << "\n";
    for (const Bar& b : series.bars) {
        out << b.timestamp << ',' << format_g17(b.open) << ',' << format_g17(b.high) << ','
            << format_g17(b.low) << ',' << format_g17(b.close) << ',' << format_g17(b.volume)
            << "\n";
    }
}

void SynthConfig::validate() const {
    if (volatility < 0) throw ConfigError("volatility must be >= 0");
    if (regime_shift_period < 1) throw ConfigError("regime_shift_period must be >= 1");
    if (signal_strength < 0 || signal_strength >= 1)
        throw ConfigError("signal_strength must be in [0, 1)");
}

BarSeries generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    BarSeries series;
    series.symbol = "SYNTH";
    series.bars.reserve(cfg.n_bars);

    Rng rng(cfg.seed);
    const std::int64_t t0 = 1600000000000000LL;  // epoch microseconds
    const std::int64_t step = 1000000LL;         // one-second bars

    double close = 100.0;
    double prev_close = close;
    double prev_dev = 0.0;  // AR(1) state: previous log return minus drift

    for (std::size_t t = 0; t < cfg.n_bars; ++t) {
        double vol = cfg.volatility;
        if ((t / cfg.regime_shift_period) % 2 == 1) vol *= 2.0;

        if (t > 0) {
            double shock = vol * rng.normal();
            double lr = cfg.drift + cfg.signal_strength * prev_dev + shock;
            prev_dev = lr - cfg.drift;
            prev_close = close;
            close = close * std::exp(lr);
        }

        Bar b;
        b.timestamp = t0 + static_cast<std::int64_t>(t) * step;
        b.open = (t == 0) ? close : prev_close;
        b.close = close;
        double hi_frac = 0.5 * vol * std::abs(rng.normal());
        double lo_frac = 0.5 * vol * std::abs(rng.normal());
        b.high = std::max(b.open, b.close) * (1.0 + hi_frac);
        b.low = std::min(b.open, b.close) * std::max(0.01, 1.0 - lo_frac);
        b.volume = 10000.0 * std::exp(0.3 * rng.normal());
        series.bars.push_back(b);
    }
    return series;
}

namespace {

// Population mean/std over closes[t-win+1 .. t] style ranges.
struct MeanStd {
    double mean;
    double std;
};

template <typename Get>
MeanStd window_mean_std(Get get, std::size_t lo, std::size_t hi) {  // inclusive range
    double sum = 0.0;
    std::size_t count = hi - lo + 1;
    for (std::size_t i = lo; i <= hi; ++i) sum += get(i);
    double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        double dv = get(i) - mean;
        ss += dv * dv;
    }
    return {mean, std::sqrt(ss / static_cast<double>(count))};
}

double simple_return(const std::vector<Bar>& bars, std::size_t t) {
    return (bars[t].close - bars[t - 1].close) / bars[t - 1].close;
}

// col ids 0..5; requires t >= vol_window - 1 and vol_window >= 2
double engineered_feature(const std::vector<Bar>& bars, std::size_t t, std::size_t col,
                          std::size_t vol_window) {
    switch (col) {
        case 0:  // ret_simple
            return simple_return(bars, t);
        case 1:  // ret_log
            return std::log(bars[t].close / bars[t - 1].close);
        case 2:  // range_ratio
            return (bars[t].high - bars[t].low) / bars[t].close;
        case 3: {  // volume_z
            auto ms = window_mean_std([&](std::size_t i) { return bars[i].volume; },
                                      t - vol_window + 1, t);
            return ms.std > 0 ? (bars[t].volume - ms.mean) / ms.std : 0.0;
        }
        case 4: {  // roll_vol: std of simple returns inside the vol_window bar range
            auto ms = window_mean_std([&](std::size_t i) { return simple_return(bars, i); },
                                      t - vol_window + 2, t);
            return ms.std;
        }
        case 5: {  // close_z
            auto ms = window_mean_std([&](std::size_t i) { return bars[i].close; },
                                      t - vol_window + 1, t);
            return ms.std > 0 ? (bars[t].close - ms.mean) / ms.std : 0.0;
        }
        default:
            throw SizeError("engineered feature column out of range");
    }
}

const char* kEngineeredNames[kEngineeredFeatureCount] = {"ret_simple", "ret_log", "range_ratio",
                                                         "volume_z",   "roll_vol", "close_z"};

}  // namespace

FeatureMatrix build_feature_matrix(const BarSeries& series, std::size_t horizon,
                                   std::size_t vol_window, std::size_t n_noise,
                                   std::uint64_t seed) {
    const auto& bars = series.bars;
    const std::size_t n_bars = bars.size();
    if (vol_window < 2) throw SizeError("vol_window must be >= 2");
    if (horizon < 1) throw SizeError("horizon must be >= 1");
    if (n_bars <= vol_window + horizon)
        throw SizeError("need more than vol_window + horizon bars, got " +
                        std::to_string(n_bars));

    const std::size_t first = vol_window - 1;           // first bar with full lookback
    const std::size_t last = n_bars - 1 - horizon;      // last bar with a target
    const std::size_t rows = last - first + 1;          // = n - vol_window - horizon + 1
    const std::size_t d = kEngineeredFeatureCount + n_noise;

    FeatureMatrix fm;
    fm.first_bar_index = first;
    fm.values = Matrix(rows, d);
    fm.y.resize(rows);
    for (std::size_t c = 0; c < kEngineeredFeatureCount; ++c)
        fm.col_names.push_back(kEngineeredNames[c]);
    for (std::size_t j = 0; j < n_noise; ++j) fm.col_names.push_back("noise_" + std::to_string(j));

    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = first + r;
        for (std::size_t c = 0; c < kEngineeredFeatureCount; ++c)
            fm.values.at(r, c) = engineered_feature(bars, t, c, vol_window);
        for (std::size_t j = 0; j < n_noise; ++j)
            fm.values.at(r, kEngineeredFeatureCount + j) = noise_normal(seed, t, j);
        fm.y[r] = (bars[t + horizon].close - bars[t].close) / bars[t].close;
    }
    if (!fm.values.all_finite()) throw DataError("non-finite feature value");
    return fm;
}

FeatureMatrix select_columns(const FeatureMatrix& fm, const std::vector<std::size_t>& cols) {
    FeatureMatrix out;
    out.first_bar_index = fm.first_bar_index;
    out.y = fm.y;
    out.values = Matrix(fm.n(), cols.size());
    for (std::size_t c : cols)
        if (c >= fm.d()) throw SizeError("select_columns: column index out of range");
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col_names.push_back(fm.col_names[cols[j]]);
        for (std::size_t r = 0; r < fm.n(); ++r) out.values.at(r, j) = fm.values.at(r, cols[j]);
    }
    return out;
}

FeatureMatrix slice_rows(const FeatureMatrix& fm, std::size_t start, std::size_t count) {
    if (start + count > fm.n()) throw SizeError("slice_rows: range out of bounds");
    FeatureMatrix out;
    out.col_names = fm.col_names;
    out.first_bar_index = fm.first_bar_index + start;
    out.values = Matrix(count, fm.d());
    out.y.resize(count);
    for (std::size_t r = 0; r < count; ++r) {
        for (std::size_t c = 0; c < fm.d(); ++c) out.values.at(r, c) = fm.values.at(start + r, c);
        out.y[r] = fm.y[start + r];
    }
    return out;
}

WindowSet make_windows(const FeatureMatrix& fm, std::size_t window) {
    if (window < 1) throw SizeError("window must be >= 1");
    if (window > fm.n())
        throw SizeError("window " + std::to_string(window) + " exceeds row count " +
                        std::to_string(fm.n()));
    WindowSet ws;
    ws.values = fm.values;
    ws.window = window;
    const std::size_t count = fm.n() - window + 1;
    ws.targets.resize(count);
    for (std::size_t i = 0; i < count; ++i) ws.targets[i] = fm.y[i + window - 1];
    return ws;
}

Matrix extract_window_features(const BarSeries& series, std::size_t last_bar,
                               std::size_t window, std::size_t vol_window,
                               const std::vector<std::size_t>& cols, std::uint64_t noise_seed) {
    const auto& bars = series.bars;
    if (window < 1) throw SizeError("window must be >= 1");
    if (last_bar >= bars.size()) throw SizeError("last_bar out of range");
    if (last_bar + 1 < window + vol_window - 1)
        throw SizeError("insufficient lookback for window extraction");

    Matrix out(window, cols.size());
    for (std::size_t r = 0; r < window; ++r) {
        const std::size_t t = last_bar - window + 1 + r;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const std::size_t c = cols[j];
            out.at(r, j) = (c < kEngineeredFeatureCount)
                               ? engineered_feature(bars, t, c, vol_window)
                               : noise_normal(noise_seed, t, c - kEngineeredFeatureCount);
        }
    }
    return out;
}

}  // namespace litenet
