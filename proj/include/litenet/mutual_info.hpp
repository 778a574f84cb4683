#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litenet/common.hpp"
#include "litenet/feature_weights.hpp"

namespace litenet {

// Product-kernel Gaussian KDE of a joint density, evaluated on a G x G grid
// spanning [min - 3h, max + 3h] per axis.
struct JointDensityGrid {
    std::vector<double> x_axis;      // G grid points
    std::vector<double> y_axis;
    Matrix density;                  // G x G, density[ix][iy]
    std::vector<double> marginal_x;  // sum over y of density * dy
    std::vector<double> marginal_y;
    double h_x = 0.0;
    double h_y = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    std::size_t n = 0;

    std::size_t grid_size() const { return x_axis.size(); }
};

// Silverman bandwidth per axis: 1.06 * sigma_hat * n^(-1/5), clamped below
// at 1e-9 * range. Requires n >= 2 and a non-degenerate spread on each axis.
JointDensityGrid kde_joint_grid(const std::vector<double>& x, const std::vector<double>& y,
                                std::size_t grid_size);

// Explicit-bandwidth variant (n >= 1); the Silverman path delegates here.
JointDensityGrid kde_joint_grid_fixed(const std::vector<double>& x,
                                      const std::vector<double>& y, std::size_t grid_size,
                                      double h_x, double h_y);

// Riemann-sum plug-in estimate in nats. Cells with density below 1e-300
// contribute zero; results within -1e-9 of zero are floored at 0.
double mutual_information(const JointDensityGrid& grid);

struct SelectionReport {
    std::vector<double> mi;            // per feature, nats
    std::vector<double> weights;       // per feature
    std::vector<std::size_t> weight_rank;  // 1 = largest weight, ties -> lower index first
    double mi_threshold = 0.0;
    std::vector<std::size_t> gate_survivors;  // ascending index, before the top_m cut
    std::vector<std::size_t> selected;        // descending weight, ties ascending index
    bool fallback = false;             // nothing passed the gate; best-MI feature returned
    std::uint64_t cycle = 0;
    std::size_t grid_size = 64;
    std::string kernel = "gaussian";
    std::string bandwidth_rule = "silverman";

    bool is_selected(std::size_t i) const {
        for (std::size_t s : selected)
            if (s == i) return true;
        return false;
    }
};

SelectionReport select_features(const Matrix& x, const std::vector<double>& y,
                                const FeatureWeightVector& weights, double mi_threshold,
                                std::size_t top_m, std::size_t grid_size = 64);

struct SelectionConfig {
    std::size_t k = 10;
    std::size_t kmeans_max_iter = 100;
    double kmeans_tol = 1e-6;
    double mi_threshold = 0.05;
    std::size_t top_m = 5;
    std::size_t grid_size = 64;
    std::uint64_t seed = 1;
};

// standardize -> k-means -> cluster variances -> weights -> select_features
SelectionReport run_selection(const Matrix& x, const std::vector<double>& y,
                              const SelectionConfig& cfg);

// Re-runs the selection pipeline on a recent slice; cycle = prev.cycle + 1.
SelectionReport dynamic_reselect(const SelectionReport& prev, const Matrix& x_recent,
                                 const std::vector<double>& y_recent,
                                 const SelectionConfig& cfg);

// Line-oriented table: feature, weight, MI, selected flag.
std::string selection_table(const SelectionReport& report,
                            const std::vector<std::string>& col_names);

}  // namespace litenet
