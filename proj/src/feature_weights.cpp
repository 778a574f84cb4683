#include "litenet/feature_weights.hpp"

namespace litenet {

Matrix weighted_cluster_variance(const Matrix& x, const ClusterModel& model) {
    const std::size_t n = x.rows(), d = x.cols(), k = model.k();
    if (model.assignments.size() != n || model.centers.cols() != d)
        throw SizeError("variance: model does not match data");

    Matrix means(d, k, 0.0);
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = model.assignments[i];
        counts[j] += 1.0;
        for (std::size_t c = 0; c < d; ++c) means.at(c, j) += x.at(i, c);
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) throw DataError("empty cluster in variance computation");
        for (std::size_t c = 0; c < d; ++c) means.at(c, j) /= counts[j];
    }

    Matrix var(d, k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = model.assignments[i];
        for (std::size_t c = 0; c < d; ++c) {
            double dv = x.at(i, c) - means.at(c, j);
            var.at(c, j) += dv * dv;
        }
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < d; ++c) var.at(c, j) /= counts[j];
    return var;
}

FeatureWeightVector compute_feature_weights(const Matrix& variances,
                                            const std::vector<double>& cluster_probs) {
    const std::size_t d = variances.rows(), k = variances.cols();
    if (cluster_probs.size() != k) throw SizeError("weights: probability length mismatch");
    double prob_sum = 0.0;
    for (double p : cluster_probs) {
        if (p < 0) throw DataError("negative cluster probability");
        prob_sum += p;
    }
    if (std::abs(prob_sum - 1.0) > 1e-9) throw DataError("cluster probabilities must sum to 1");

    FeatureWeightVector fw;
    fw.variances = variances;
    fw.cluster_probs = cluster_probs;
    fw.weights.resize(d);
    fw.clamped.assign(d, false);
    for (std::size_t c = 0; c < d; ++c) {
        double denom = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double v = variances.at(c, j);
            if (v < 0) throw DataError("negative variance input");
            denom += cluster_probs[j] * v;
        }
        if (denom < kWeightDenominatorFloor) {
            denom = kWeightDenominatorFloor;
            fw.clamped[c] = true;
        }
        fw.weights[c] = 1.0 / denom;
    }
    return fw;
}

}  // namespace litenet
