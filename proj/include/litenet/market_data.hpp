#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "litenet/common.hpp"

namespace litenet {

// One OHLCV aggregation interval. Timestamps are epoch microseconds.
struct Bar {
    std::int64_t timestamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

struct BarSeries {
    std::string symbol;
    std::vector<Bar> bars;

    std::size_t size() const { return bars.size(); }
    bool empty() const { return bars.empty(); }
};

struct SynthConfig {
    std::size_t n_bars = 4000;
    std::uint64_t seed = 1;
    double drift = 0.0;            // per-bar log drift
    double volatility = 0.01;      // per-bar log volatility
    std::size_t regime_shift_period = 500;  // volatility x2 toggles at this cadence
    std::size_t n_noise_features = 0;       // pure-noise columns injected downstream
    double signal_strength = 0.0;  // AR(1) coefficient linking consecutive returns

    void validate() const;
};

// Engineered features plus the aligned forward-return target.
// Row r corresponds to source bar index first_bar_index + r.
struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> col_names;
    std::vector<double> y;
    std::size_t first_bar_index = 0;

    std::size_t n() const { return values.rows(); }
    std::size_t d() const { return values.cols(); }
};

// Consecutive-row windows over a FeatureMatrix, each paired with the
// target of its last row.
struct WindowSet {
    Matrix values;  // shared feature rows, windows are row ranges into this
    std::size_t window = 0;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
    std::size_t cols() const { return values.cols(); }
    MatrixView view(std::size_t i) const { return MatrixView(values, i, window); }
};

// CSV schema: `timestamp,open,high,low,close,volume`, LF or CRLF.
BarSeries parse_bar_csv(std::istream& in);
void write_bar_csv(const BarSeries& series, std::ostream& out);

// Deterministic geometric random walk with regime-shift volatility and an
// optional AR(1) return signal.
BarSeries generate_synthetic(const SynthConfig& cfg);

// Canonical engineered columns, in order:
//   ret_simple, ret_log, range_ratio, volume_z, roll_vol, close_z
// followed by n_noise seeded standard-normal noise columns.
inline constexpr std::size_t kEngineeredFeatureCount = 6;

FeatureMatrix build_feature_matrix(const BarSeries& bars, std::size_t horizon,
                                   std::size_t vol_window, std::size_t n_noise,
                                   std::uint64_t seed);

FeatureMatrix select_columns(const FeatureMatrix& fm, const std::vector<std::size_t>& cols);

FeatureMatrix slice_rows(const FeatureMatrix& fm, std::size_t start, std::size_t count);

WindowSet make_windows(const FeatureMatrix& fm, std::size_t window);

// Single-window feature extraction for the per-input execution path.
// Produces the same values as build_feature_matrix for bar indices
// [last_bar - window + 1, last_bar], restricted to the requested columns.
Matrix extract_window_features(const BarSeries& bars, std::size_t last_bar,
                               std::size_t window, std::size_t vol_window,
                               const std::vector<std::size_t>& cols, std::uint64_t noise_seed);

}  // namespace litenet
