#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "litenet/market_data.hpp"
#include "litenet/model.hpp"
#include "litenet/mutual_info.hpp"

namespace litenet {

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 128;
    double lr0 = 0.001;
    std::size_t lr_halving_period = 10;  // epochs
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double prune_epsilon = 0.01;
    double penalty_lambda = 0.1;
    std::vector<std::size_t> prune_epochs = {10, 20};
    std::vector<std::size_t> kernel_sizes = {3, 5};
    std::uint64_t seed = 1;

    void validate() const;
};

// lr0 * 0.5^floor(epoch / lr_halving_period)
double lr_at(const TrainConfig& cfg, std::size_t epoch);

struct ModuleGrads {
    Matrix kernel;
    double bias = 0.0;
    double head_w = 0.0;
    double head_b = 0.0;
};

struct Gradients {
    std::vector<ModuleGrads> modules;
    std::vector<double> alpha;
};

// Mean-squared-error loss and analytic gradients for every trainable
// parameter, including the fusion weights. Masked kernel weights get
// gradient 0.
std::pair<double, Gradients> loss_and_gradients(const FusedModel& model,
                                                const std::vector<MatrixView>& windows,
                                                const std::vector<double>& targets);

// MSE plus lambda * count of unmasked kernel weights with |w| <= epsilon.
// The indicator is a reported quantity; it is never differentiated.
double penalized_loss(const FusedModel& model, const std::vector<MatrixView>& windows,
                      const std::vector<double>& targets);

// Optional per-epoch re-selection: the training slice with all candidate
// columns, plus the selection settings to re-run each cycle.
struct ReselectContext {
    FeatureMatrix full;
    SelectionConfig sel_cfg;
};

// Builds the initialized fused model without taking any training step.
FusedModel init_model(const WindowSet& dataset, const TrainConfig& cfg,
                      const SelectionReport& selection);

// Adam over seeded shuffled mini-batches with step-halving lr schedule and
// iterative prune-retrain at the scheduled epochs.
FusedModel train(const WindowSet& dataset, const TrainConfig& cfg,
                 const SelectionReport& selection,
                 const std::optional<ReselectContext>& reselect = std::nullopt);

}  // namespace litenet
