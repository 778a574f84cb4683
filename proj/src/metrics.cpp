#include "litenet/metrics.hpp"

#include <cmath>
#include <sstream>

namespace litenet {

double rmse(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.empty() || y.size() != y_hat.size())
        throw SizeError("rmse: need equal nonempty vectors");
    double ss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double e = y[i] - y_hat[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(y.size()));
}

double r2_score(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.size() < 2 || y.size() != y_hat.size())
        throw SizeError("r2: need equal vectors of length >= 2");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot <= 0.0) throw DegenerateDataError("r2: zero-variance target");
    return 1.0 - ss_res / ss_tot;
}

AcfReport acf(const std::vector<double>& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n < max_lag + 2) throw SizeError("acf: series too short for max_lag");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : series) denom += (v - mean) * (v - mean);
    if (denom <= 0.0) throw DegenerateDataError("acf: constant series");

    AcfReport report;
    report.n = n;
    report.values.resize(max_lag + 1);
    for (std::size_t tau = 0; tau <= max_lag; ++tau) {
        double num = 0.0;
        for (std::size_t t = 0; t + tau < n; ++t)
            num += (series[t] - mean) * (series[t + tau] - mean);
        report.values[tau] = num / denom;
    }
    return report;
}

std::string acf_table(const AcfReport& close_acf, const AcfReport& return_acf) {
    std::ostringstream out;
    out << "lag\tacf_close\tacf_return\n";
    std::size_t lags = std::min(close_acf.values.size(), return_acf.values.size());
    for (std::size_t tau = 0; tau < lags; ++tau)
        out << tau << '\t' << format_g17(close_acf.values[tau]) << '\t'
            << format_g17(return_acf.values[tau]) << "\n";
    return out.str();
}

}  // namespace litenet
