#include "litenet/clustering.hpp"

#include <algorithm>
#include <limits>

namespace litenet {

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    const std::size_t n = x.rows(), d = x.cols();
    s.means.assign(d, 0.0);
    s.stds.assign(d, 0.0);
    if (n == 0) return s;
    for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) sum += x.at(r, c);
        double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double dv = x.at(r, c) - mean;
            ss += dv * dv;
        }
        s.means[c] = mean;
        s.stds[c] = std::sqrt(ss / static_cast<double>(n));
    }
    return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (x.cols() != means.size()) throw SizeError("standardizer dimension mismatch");
    Matrix out = x;
    for (std::size_t r = 0; r < out.rows(); ++r) apply_in_place(out.row_ptr(r), out.cols());
    return out;
}

void Standardizer::apply_in_place(double* row, std::size_t cols) const {
    if (cols != means.size()) throw SizeError("standardizer dimension mismatch");
    for (std::size_t c = 0; c < cols; ++c)
        row[c] = stds[c] > 0 ? (row[c] - means[c]) / stds[c] : 0.0;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double dv = a[i] - b[i];
        s += dv * dv;
    }
    return s;
}

}  // namespace

namespace {

ClusterModel fit_kmeans_single(const Matrix& x, std::size_t k, std::size_t max_iter, double tol,
                               std::uint64_t seed) {
    const std::size_t n = x.rows(), d = x.cols();
    Rng rng(seed);
    ClusterModel model;
    model.centers = Matrix(k, d);

    // k-means++ seeding: first center uniform, then proportional to the
    // squared distance to the nearest chosen center.
    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
    std::size_t first = static_cast<std::size_t>(rng.below(n));
    for (std::size_t c = 0; c < d; ++c) model.centers.at(0, c) = x.at(first, c);
    for (std::size_t j = 1; j < k; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dist = sq_dist(x.row_ptr(i), model.centers.row_ptr(j - 1), d);
            min_sq[i] = std::min(min_sq[i], dist);
            total += min_sq[i];
        }
        std::size_t chosen;
        if (total > 0) {
            double target = rng.uniform01() * total;
            double cum = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += min_sq[i];
                if (cum > target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<std::size_t>(rng.below(n));  // all points coincide
        }
        for (std::size_t c = 0; c < d; ++c) model.centers.at(j, c) = x.at(chosen, c);
    }

    model.assignments.assign(n, 0);
    model.sizes.assign(k, 0);
    Matrix new_centers(k, d);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // assignment step
        double objective = 0.0;
        std::fill(model.sizes.begin(), model.sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < k; ++j) {
                double dist = sq_dist(x.row_ptr(i), model.centers.row_ptr(j), d);
                if (dist < best) {
                    best = dist;
                    best_j = j;
                }
            }
            model.assignments[i] = best_j;
            model.sizes[best_j] += 1;
            objective += best;
        }
        model.objective = objective;
        model.objective_history.push_back(objective);
        model.iterations_run = iter + 1;

        // update step
        new_centers = Matrix(k, d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = model.assignments[i];
            for (std::size_t c = 0; c < d; ++c) new_centers.at(j, c) += x.at(i, c);
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (model.sizes[j] == 0) continue;
            for (std::size_t c = 0; c < d; ++c)
                new_centers.at(j, c) /= static_cast<double>(model.sizes[j]);
        }

        // re-seed empty clusters to the point farthest from its center
        for (std::size_t j = 0; j < k; ++j) {
            if (model.sizes[j] != 0) continue;
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double dist =
                    sq_dist(x.row_ptr(i), new_centers.row_ptr(model.assignments[i]), d);
                if (dist > worst) {
                    worst = dist;
                    worst_i = i;
                }
            }
            for (std::size_t c = 0; c < d; ++c) new_centers.at(j, c) = x.at(worst_i, c);
        }

        double movement = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            movement = std::max(movement, std::sqrt(sq_dist(model.centers.row_ptr(j),
                                                            new_centers.row_ptr(j), d)));
        model.centers = new_centers;
        if (movement < tol) break;
    }

    // final assignment against the converged centers
    double objective = 0.0;
    std::fill(model.sizes.begin(), model.sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < k; ++j) {
            double dist = sq_dist(x.row_ptr(i), model.centers.row_ptr(j), d);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        model.assignments[i] = best_j;
        model.sizes[best_j] += 1;
        objective += best;
    }
    model.objective = objective;
    model.objective_history.push_back(objective);
    for (std::size_t j = 0; j < k; ++j)
        if (model.sizes[j] == 0)
            throw DegenerateDataError("fewer distinct points than clusters");
    return model;
}

}  // namespace

ClusterModel fit_kmeans(const Matrix& x, std::size_t k, std::size_t max_iter, double tol,
                        std::uint64_t seed, std::size_t restarts) {
    if (k < 1) throw SizeError("k must be >= 1");
    if (x.rows() < k) throw SizeError("need at least k points, got " + std::to_string(x.rows()));
    if (max_iter < 1) throw SizeError("max_iter must be >= 1");
    if (tol < 0) throw SizeError("tol must be >= 0");
    if (restarts < 1) throw SizeError("restarts must be >= 1");
    if (!x.all_finite()) throw DataError("non-finite value in clustering input");

    Rng seeder(seed);
    std::vector<std::uint64_t> run_seeds(restarts);
    for (auto& s : run_seeds) s = seeder.next_u64();

    ClusterModel best;
    bool have_best = false;
    for (std::uint64_t run_seed : run_seeds) {
        ClusterModel m = fit_kmeans_single(x, k, max_iter, tol, run_seed);
        if (!have_best || m.objective < best.objective) {
            best = std::move(m);
            have_best = true;
        }
    }
    return best;
}

double kmeans_objective(const Matrix& x, const ClusterModel& model) {
    if (x.cols() != model.centers.cols()) throw SizeError("objective: dimension mismatch");
    const std::size_t n = x.rows(), k = model.centers.rows(), d = x.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j)
            best = std::min(best, sq_dist(x.row_ptr(i), model.centers.row_ptr(j), d));
        total += best;
    }
    return total;
}

}  // namespace litenet
