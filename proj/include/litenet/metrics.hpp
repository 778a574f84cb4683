#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "litenet/common.hpp"

namespace litenet {

struct MetricsReport {
    double rmse = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
    std::string split_id;
};

struct AcfReport {
    std::vector<double> values;  // index = lag, 0..max_lag
    std::size_t n = 0;

    std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }
};

double rmse(const std::vector<double>& y, const std::vector<double>& y_hat);

// 1 - SS_res / SS_tot; requires length >= 2 and non-constant y.
double r2_score(const std::vector<double>& y, const std::vector<double>& y_hat);

// Biased autocorrelation estimator:
// rho(tau) = sum_{t<n-tau} (x_t - mean)(x_{t+tau} - mean) / sum_t (x_t - mean)^2
AcfReport acf(const std::vector<double>& series, std::size_t max_lag);

std::string acf_table(const AcfReport& close_acf, const AcfReport& return_acf);

}  // namespace litenet
