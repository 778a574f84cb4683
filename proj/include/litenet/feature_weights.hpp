#pragma once

#include <vector>

#include "litenet/common.hpp"
#include "litenet/clustering.hpp"

namespace litenet {

// Inverse cluster-probability-weighted variance weights. Weights are used
// for ranking only and are not normalized.
struct FeatureWeightVector {
    std::vector<double> weights;        // length d, all > 0 and finite
    Matrix variances;                   // d x k per-cluster population variance
    std::vector<double> cluster_probs;  // length k, sums to 1
    std::vector<bool> clamped;          // per feature: denominator hit the 1e-12 floor

    std::size_t d() const { return weights.size(); }
};

inline constexpr double kWeightDenominatorFloor = 1e-12;

// Per-feature, per-cluster population variance (divisor |C_j|).
Matrix weighted_cluster_variance(const Matrix& x, const ClusterModel& model);

FeatureWeightVector compute_feature_weights(const Matrix& variances,
                                            const std::vector<double>& cluster_probs);

}  // namespace litenet
