#pragma once

#include <cstdint>
#include <vector>

#include "litenet/common.hpp"

namespace litenet {

// Per-column z-score normalizer. Columns with zero spread map to 0.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;  // population std; entries of 0 are passed through as 0

    static Standardizer fit(const Matrix& x);
    Matrix apply(const Matrix& x) const;
    void apply_in_place(double* row, std::size_t cols) const;
};

struct ClusterModel {
    Matrix centers;                       // k x d
    std::vector<std::size_t> assignments; // length n, nearest center (ties -> lowest index)
    std::vector<std::size_t> sizes;       // length k, no empty cluster on return
    double objective = 0.0;               // sum over points of squared distance to center
    std::size_t iterations_run = 0;
    std::vector<double> objective_history;  // objective after each assignment step

    std::size_t k() const { return centers.rows(); }
};

// k-means++ seeding followed by Lloyd iterations, best objective over
// `restarts` independently seeded runs. Empty clusters are re-seeded to the
// point farthest from its assigned center. Deterministic given the seed.
ClusterModel fit_kmeans(const Matrix& x, std::size_t k, std::size_t max_iter, double tol,
                        std::uint64_t seed, std::size_t restarts = 10);

// Sum over rows of the squared distance to the nearest center.
double kmeans_objective(const Matrix& x, const ClusterModel& model);

}  // namespace litenet
