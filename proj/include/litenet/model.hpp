#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "litenet/clustering.hpp"
#include "litenet/common.hpp"
#include "litenet/mutual_info.hpp"

namespace litenet {

// One conv module: f x f valid cross-correlation, rectifier, global average
// pool, scalar affine head.
struct ConvModuleParams {
    Matrix kernel;  // f x f
    double bias = 0.0;
    double head_w = 0.0;
    double head_b = 0.0;

    std::size_t f() const { return kernel.rows(); }
};

// Valid (no padding) cross-correlation with rectifier activation.
// Output dims: (rows - f + 1) x (cols - f + 1).
Matrix conv_forward(const MatrixView& input, const ConvModuleParams& params);

// conv_forward -> global average pool -> affine head.
double module_forward(const MatrixView& input, const ConvModuleParams& params);

// Kernel entry retained by the prune mask; weights are read through the
// flat index so the list stays valid as training updates the kernel.
struct KernelTap {
    std::size_t di;
    std::size_t dj;
    std::size_t flat;
};

struct ModuleState {
    ConvModuleParams params;
    std::vector<std::uint8_t> mask;  // f*f row-major, 1 = retained
    std::vector<KernelTap> taps;     // row-major order over unmasked entries

    void rebuild_taps();
    std::size_t masked_count() const;
};

struct FusedModel {
    std::vector<ModuleState> modules;
    std::vector<double> alpha;      // fusion weights, unconstrained
    double prune_epsilon = 0.01;
    double penalty_lambda = 0.1;
    std::size_t window = 0;         // input contract: rows
    std::size_t d_input = 0;        // input contract: cols (selected features)
    Standardizer normalizer;        // applied to input windows inside fused_forward
    SelectionReport selection;

    std::size_t module_count() const { return modules.size(); }
};

// y_hat = sum_i alpha_i * M_i(X) on the normalized window. Inference skips
// masked weights via the tap lists.
double fused_forward(const MatrixView& window, const FusedModel& model);

// Forward over an already-normalized buffer, optionally capturing per-module
// activation maps and outputs for backpropagation.
double fused_forward_normalized(const double* xn, std::size_t rows, std::size_t cols,
                                const FusedModel& model, std::vector<Matrix>* activations,
                                std::vector<double>* module_outputs);

struct PruneReport {
    double epsilon = 0.0;
    std::size_t newly_masked = 0;
    std::size_t total_masked = 0;
    std::size_t total_kernel_weights = 0;
    double sparsity = 0.0;                   // masked / total kernel weights
    std::vector<std::size_t> skipped_modules;  // pruning would have emptied these
};

// Mask (and zero) every unmasked kernel weight with |w| <= epsilon; weights
// with |w| > epsilon are retained. Masks compose with earlier masks. A kernel
// that would lose all weights is left untouched and flagged in the report.
std::pair<FusedModel, PruneReport> prune_model(const FusedModel& model, double epsilon);

struct ModelStats {
    std::size_t total_params = 0;
    std::size_t unmasked_params = 0;
    std::size_t kernel_weights = 0;
    std::size_t masked_kernel_weights = 0;
    double sparsity = 0.0;
    std::size_t macs_per_inference = 0;
};

ModelStats model_stats(const FusedModel& model);

}  // namespace litenet
