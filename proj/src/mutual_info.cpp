#include "litenet/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "litenet/clustering.hpp"

namespace litenet {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

struct AxisStats {
    double lo, hi, sd;
};

AxisStats axis_stats(const std::vector<double>& v) {
    double lo = v[0], hi = v[0], sum = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) throw DataError("non-finite sample in KDE input");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
    }
    double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return {lo, hi, sd};
}

// G x n kernel evaluations for one axis, row-major by grid point.
std::vector<double> kernel_table(const std::vector<double>& grid, const std::vector<double>& s,
                                 double h) {
    std::vector<double> out(grid.size() * s.size());
    const double inv_h = 1.0 / h;
    const double scale = kInvSqrt2Pi * inv_h;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double* row = out.data() + g * s.size();
        for (std::size_t t = 0; t < s.size(); ++t) {
            double u = (grid[g] - s[t]) * inv_h;
            row[t] = scale * std::exp(-0.5 * u * u);
        }
    }
    return out;
}

std::vector<double> make_axis(double lo, double hi, double h, std::size_t g) {
    std::vector<double> axis(g);
    double a = lo - 3.0 * h, b = hi + 3.0 * h;
    double step = (b - a) / static_cast<double>(g - 1);
    for (std::size_t i = 0; i < g; ++i) axis[i] = a + step * static_cast<double>(i);
    return axis;
}

}  // namespace

JointDensityGrid kde_joint_grid_fixed(const std::vector<double>& x,
                                      const std::vector<double>& y, std::size_t grid_size,
                                      double h_x, double h_y) {
    if (x.size() != y.size()) throw SizeError("KDE: sample length mismatch");
    if (x.empty()) throw SizeError("KDE: need at least one sample");
    if (grid_size < 2) throw SizeError("KDE: grid size too small");
    if (h_x <= 0 || h_y <= 0) throw SizeError("KDE: bandwidth must be positive");

    auto sx = axis_stats(x);
    auto sy = axis_stats(y);
    const std::size_t g = grid_size, n = x.size();

    JointDensityGrid grid;
    grid.h_x = h_x;
    grid.h_y = h_y;
    grid.n = n;
    grid.x_axis = make_axis(sx.lo, sx.hi, h_x, g);
    grid.y_axis = make_axis(sy.lo, sy.hi, h_y, g);
    grid.dx = grid.x_axis[1] - grid.x_axis[0];
    grid.dy = grid.y_axis[1] - grid.y_axis[0];

    auto kx = kernel_table(grid.x_axis, x, h_x);
    auto ky = kernel_table(grid.y_axis, y, h_y);

    grid.density = Matrix(g, g);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t gx = 0; gx < g; ++gx) {
        const double* rx = kx.data() + gx * n;
        for (std::size_t gy = 0; gy < g; ++gy) {
            const double* ry = ky.data() + gy * n;
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t) acc += rx[t] * ry[t];
            grid.density.at(gx, gy) = acc * inv_n;
        }
    }

    grid.marginal_x.assign(g, 0.0);
    grid.marginal_y.assign(g, 0.0);
    for (std::size_t gx = 0; gx < g; ++gx)
        for (std::size_t gy = 0; gy < g; ++gy) {
            grid.marginal_x[gx] += grid.density.at(gx, gy) * grid.dy;
            grid.marginal_y[gy] += grid.density.at(gx, gy) * grid.dx;
        }
    return grid;
}

JointDensityGrid kde_joint_grid(const std::vector<double>& x, const std::vector<double>& y,
                                std::size_t grid_size) {
    if (x.size() != y.size()) throw SizeError("KDE: sample length mismatch");
    if (x.size() < 2) throw SizeError("KDE: need at least two samples");
    if (grid_size < 8) throw SizeError("KDE: grid size must be >= 8");

    auto sx = axis_stats(x);
    auto sy = axis_stats(y);
    if (sx.sd == 0.0) throw DegenerateDataError("KDE: zero-variance x axis");
    if (sy.sd == 0.0) throw DegenerateDataError("KDE: zero-variance y axis");

    const double n_fac = std::pow(static_cast<double>(x.size()), -0.2);
    double h_x = std::max(1.06 * sx.sd * n_fac, 1e-9 * (sx.hi - sx.lo));
    double h_y = std::max(1.06 * sy.sd * n_fac, 1e-9 * (sy.hi - sy.lo));
    return kde_joint_grid_fixed(x, y, grid_size, h_x, h_y);
}

double mutual_information(const JointDensityGrid& grid) {
    const std::size_t g = grid.grid_size();
    double mi = 0.0;
    for (std::size_t gx = 0; gx < g; ++gx) {
        const double px = grid.marginal_x[gx];
        for (std::size_t gy = 0; gy < g; ++gy) {
            const double p = grid.density.at(gx, gy);
            if (p < 1e-300) continue;
            mi += p * std::log(p / (px * grid.marginal_y[gy]));
        }
    }
    mi *= grid.dx * grid.dy;
    if (mi < 0.0 && mi >= -1e-9) mi = 0.0;
    return mi;
}

SelectionReport select_features(const Matrix& x, const std::vector<double>& y,
                                const FeatureWeightVector& weights, double mi_threshold,
                                std::size_t top_m, std::size_t grid_size) {
    const std::size_t n = x.rows(), d = x.cols();
    if (top_m < 1) throw SizeError("top_m must be >= 1");
    if (d != weights.d()) throw SizeError("selection: weight length mismatch");
    if (y.size() != n) throw SizeError("selection: target length mismatch");
    for (double v : y)
        if (!std::isfinite(v)) throw DataError("non-finite target value");
    if (!x.all_finite()) throw DataError("non-finite feature column");

    SelectionReport report;
    report.mi_threshold = mi_threshold;
    report.grid_size = grid_size;
    report.weights = weights.weights;
    report.mi.resize(d);
    for (std::size_t c = 0; c < d; ++c)
        report.mi[c] = mutual_information(kde_joint_grid(x.column(c), y, grid_size));

    // rank all features by weight (descending, ties to the lower index)
    std::vector<std::size_t> by_weight(d);
    std::iota(by_weight.begin(), by_weight.end(), 0);
    std::stable_sort(by_weight.begin(), by_weight.end(), [&](std::size_t a, std::size_t b) {
        return weights.weights[a] > weights.weights[b];
    });
    report.weight_rank.assign(d, 0);
    for (std::size_t r = 0; r < d; ++r) report.weight_rank[by_weight[r]] = r + 1;

    for (std::size_t c = 0; c < d; ++c)
        if (report.mi[c] >= mi_threshold) report.gate_survivors.push_back(c);

    if (report.gate_survivors.empty()) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < d; ++c)
            if (report.mi[c] > report.mi[best]) best = c;
        report.selected.push_back(best);
        report.fallback = true;
        return report;
    }

    std::vector<std::size_t> order = report.gate_survivors;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return weights.weights[a] > weights.weights[b];
    });
    if (order.size() > top_m) order.resize(top_m);
    report.selected = order;
    return report;
}

SelectionReport run_selection(const Matrix& x, const std::vector<double>& y,
                              const SelectionConfig& cfg) {
    auto standardizer = Standardizer::fit(x);
    Matrix xs = standardizer.apply(x);
    ClusterModel model = fit_kmeans(xs, cfg.k, cfg.kmeans_max_iter, cfg.kmeans_tol, cfg.seed);
    Matrix variances = weighted_cluster_variance(xs, model);
    std::vector<double> probs(model.k());
    for (std::size_t j = 0; j < model.k(); ++j)
        probs[j] = static_cast<double>(model.sizes[j]) / static_cast<double>(x.rows());
    FeatureWeightVector fw = compute_feature_weights(variances, probs);
    return select_features(x, y, fw, cfg.mi_threshold, cfg.top_m, cfg.grid_size);
}

SelectionReport dynamic_reselect(const SelectionReport& prev, const Matrix& x_recent,
                                 const std::vector<double>& y_recent,
                                 const SelectionConfig& cfg) {
    if (x_recent.rows() == 0) throw SizeError("reselect: empty recent slice");
    if (x_recent.cols() != prev.mi.size())
        throw SizeError("reselect: feature universe changed");
    SelectionReport report = run_selection(x_recent, y_recent, cfg);
    report.cycle = prev.cycle + 1;
    return report;
}

std::string selection_table(const SelectionReport& report,
                            const std::vector<std::string>& col_names) {
    std::ostringstream out;
    out << "feature\tweight\tmi\tselected\n";
    for (std::size_t c = 0; c < report.mi.size(); ++c) {
        std::string name =
            c < col_names.size() ? col_names[c] : "f" + std::to_string(c);
        out << name << '\t' << format_g17(report.weights[c]) << '\t'
            << format_g17(report.mi[c]) << '\t' << (report.is_selected(c) ? 1 : 0) << "\n";
    }
    out << "# threshold=" << format_g17(report.mi_threshold) << " cycle=" << report.cycle
        << " fallback=" << (report.fallback ? 1 : 0) << " kernel=" << report.kernel
        << " bandwidth=" << report.bandwidth_rule << " grid=" << report.grid_size << "\n";
    return out.str();
}

}  // namespace litenet
