#include "litenet/model.hpp"

#include <algorithm>

namespace litenet {

Matrix conv_forward(const MatrixView& input, const ConvModuleParams& params) {
    const std::size_t f = params.f();
    if (f < 1) throw SizeError("kernel must be at least 1x1");
    if (input.rows < f || input.cols < f)
        throw SizeError("input smaller than kernel (" + std::to_string(input.rows) + "x" +
                        std::to_string(input.cols) + " vs f=" + std::to_string(f) + ")");

    Matrix out(input.rows - f + 1, input.cols - f + 1);
    for (std::size_t m = 0; m < out.rows(); ++m)
        for (std::size_t n = 0; n < out.cols(); ++n) {
            double z = params.bias;
            for (std::size_t i = 0; i < f; ++i)
                for (std::size_t j = 0; j < f; ++j)
                    z += params.kernel.at(i, j) * input.at(m + i, n + j);
            out.at(m, n) = z > 0.0 ? z : 0.0;
        }
    return out;
}

double module_forward(const MatrixView& input, const ConvModuleParams& params) {
    Matrix a = conv_forward(input, params);
    double sum = 0.0;
    for (double v : a.data()) sum += v;
    double pooled = sum / static_cast<double>(a.rows() * a.cols());
    return params.head_w * pooled + params.head_b;
}

void ModuleState::rebuild_taps() {
    const std::size_t f = params.f();
    taps.clear();
    for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < f; ++j) {
            std::size_t flat = i * f + j;
            if (mask[flat]) taps.push_back({i, j, flat});
        }
}

std::size_t ModuleState::masked_count() const {
    std::size_t c = 0;
    for (auto m : mask)
        if (!m) ++c;
    return c;
}

namespace {

// Tap-list forward over a normalized window; shared by inference and training.
double module_forward_taps(const double* xn, std::size_t rows, std::size_t cols,
                           const ModuleState& mod, double* activation_out) {
    const std::size_t f = mod.params.f();
    const std::size_t out_r = rows - f + 1, out_c = cols - f + 1;
    const double* w = mod.params.kernel.data().data();
    double sum = 0.0;
    for (std::size_t m = 0; m < out_r; ++m)
        for (std::size_t n = 0; n < out_c; ++n) {
            double z = mod.params.bias;
            for (const KernelTap& t : mod.taps)
                z += w[t.flat] * xn[(m + t.di) * cols + (n + t.dj)];
            double a = z > 0.0 ? z : 0.0;
            if (activation_out) activation_out[m * out_c + n] = a;
            sum += a;
        }
    double pooled = sum / static_cast<double>(out_r * out_c);
    return mod.params.head_w * pooled + mod.params.head_b;
}

}  // namespace

double fused_forward(const MatrixView& window, const FusedModel& model) {
    if (window.rows != model.window || window.cols != model.d_input)
        throw SizeError("window does not match model input contract");
    std::vector<double> xn(window.rows * window.cols);
    for (std::size_t r = 0; r < window.rows; ++r)
        for (std::size_t c = 0; c < window.cols; ++c) xn[r * window.cols + c] = window.at(r, c);
    for (std::size_t r = 0; r < window.rows; ++r)
        model.normalizer.apply_in_place(xn.data() + r * window.cols, window.cols);

    double y = 0.0;
    for (std::size_t i = 0; i < model.modules.size(); ++i)
        y += model.alpha[i] *
             module_forward_taps(xn.data(), window.rows, window.cols, model.modules[i], nullptr);
    return y;
}

double fused_forward_normalized(const double* xn, std::size_t rows, std::size_t cols,
                                const FusedModel& model, std::vector<Matrix>* activations,
                                std::vector<double>* module_outputs) {
    double y = 0.0;
    for (std::size_t i = 0; i < model.modules.size(); ++i) {
        const std::size_t f = model.modules[i].params.f();
        double* act = nullptr;
        if (activations) {
            (*activations)[i] = Matrix(rows - f + 1, cols - f + 1);
            act = (*activations)[i].data().data();
        }
        double m = module_forward_taps(xn, rows, cols, model.modules[i], act);
        if (module_outputs) (*module_outputs)[i] = m;
        y += model.alpha[i] * m;
    }
    return y;
}

std::pair<FusedModel, PruneReport> prune_model(const FusedModel& model, double epsilon) {
    if (epsilon < 0) throw SizeError("prune epsilon must be >= 0");
    FusedModel out = model;
    PruneReport report;
    report.epsilon = epsilon;

    for (std::size_t mi = 0; mi < out.modules.size(); ++mi) {
        ModuleState& mod = out.modules[mi];
        std::vector<std::size_t> candidates;
        std::size_t survivors = 0;
        for (std::size_t flat = 0; flat < mod.mask.size(); ++flat) {
            if (!mod.mask[flat]) continue;
            if (std::abs(mod.params.kernel.data()[flat]) <= epsilon)
                candidates.push_back(flat);
            else
                ++survivors;
        }
        if (survivors == 0 && !candidates.empty()) {
            report.skipped_modules.push_back(mi);  // would zero the whole kernel
        } else {
            for (std::size_t flat : candidates) {
                mod.mask[flat] = 0;
                mod.params.kernel.data()[flat] = 0.0;
                ++report.newly_masked;
            }
            mod.rebuild_taps();
        }
        report.total_masked += mod.masked_count();
        report.total_kernel_weights += mod.mask.size();
    }
    report.sparsity = report.total_kernel_weights
                          ? static_cast<double>(report.total_masked) /
                                static_cast<double>(report.total_kernel_weights)
                          : 0.0;
    out.prune_epsilon = epsilon;
    return {std::move(out), report};
}

ModelStats model_stats(const FusedModel& model) {
    ModelStats s;
    for (const ModuleState& mod : model.modules) {
        const std::size_t f = mod.params.f();
        const std::size_t kw = f * f;
        const std::size_t masked = mod.masked_count();
        s.kernel_weights += kw;
        s.masked_kernel_weights += masked;
        s.total_params += kw + 3;  // bias, head_w, head_b
        s.unmasked_params += (kw - masked) + 3;
        if (model.window >= f && model.d_input >= f)
            s.macs_per_inference +=
                (model.window - f + 1) * (model.d_input - f + 1) * (kw - masked);
    }
    s.total_params += model.alpha.size();
    s.unmasked_params += model.alpha.size();
    s.sparsity = s.kernel_weights ? static_cast<double>(s.masked_kernel_weights) /
                                        static_cast<double>(s.kernel_weights)
                                  : 0.0;
    return s;
}

}  // namespace litenet
