#include "litenet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace litenet {

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (lr0 <= 0) throw ConfigError("lr0 must be > 0");
    if (lr_halving_period < 1) throw ConfigError("lr_halving_period must be >= 1");
    if (adam_beta1 <= 0 || adam_beta1 >= 1 || adam_beta2 <= 0 || adam_beta2 >= 1)
        throw ConfigError("adam betas must lie in (0, 1)");
    if (adam_eps <= 0) throw ConfigError("adam_eps must be > 0");
    if (prune_epsilon < 0) throw ConfigError("prune_epsilon must be >= 0");
    if (penalty_lambda < 0) throw ConfigError("penalty_lambda must be >= 0");
    if (kernel_sizes.empty()) throw ConfigError("kernel_sizes must be nonempty");
    for (std::size_t f : kernel_sizes)
        if (f < 1) throw ConfigError("kernel sizes must be >= 1");
}

double lr_at(const TrainConfig& cfg, std::size_t epoch) {
    return cfg.lr0 * std::pow(0.5, static_cast<double>(epoch / cfg.lr_halving_period));
}

std::pair<double, Gradients> loss_and_gradients(const FusedModel& model,
                                                const std::vector<MatrixView>& windows,
                                                const std::vector<double>& targets) {
    const std::size_t batch = windows.size();
    if (batch == 0) throw SizeError("empty batch");
    if (targets.size() != batch) throw SizeError("batch target length mismatch");

    const std::size_t rows = model.window, cols = model.d_input;
    const std::size_t n_mod = model.modules.size();

    Gradients g;
    g.alpha.assign(n_mod, 0.0);
    g.modules.resize(n_mod);
    for (std::size_t i = 0; i < n_mod; ++i) {
        const std::size_t f = model.modules[i].params.f();
        g.modules[i].kernel = Matrix(f, f, 0.0);
    }

    std::vector<double> xn(rows * cols);
    std::vector<Matrix> acts(n_mod);
    std::vector<double> mods(n_mod);
    double loss = 0.0;
    const double inv_b = 1.0 / static_cast<double>(batch);

    for (std::size_t b = 0; b < batch; ++b) {
        const MatrixView& win = windows[b];
        if (win.rows != rows || win.cols != cols)
            throw SizeError("window does not match model input contract");
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) xn[r * cols + c] = win.at(r, c);
            model.normalizer.apply_in_place(xn.data() + r * cols, cols);
        }

        double yhat = fused_forward_normalized(xn.data(), rows, cols, model, &acts, &mods);
        double err = yhat - targets[b];
        loss += err * err;
        double dy = 2.0 * err * inv_b;

        for (std::size_t i = 0; i < n_mod; ++i) {
            const ModuleState& mod = model.modules[i];
            ModuleGrads& mg = g.modules[i];
            const Matrix& a = acts[i];
            const std::size_t out_r = a.rows(), out_c = a.cols();
            const double cells = static_cast<double>(out_r * out_c);

            g.alpha[i] += dy * mods[i];
            double pooled = 0.0;
            for (double v : a.data()) pooled += v;
            pooled /= cells;
            mg.head_w += dy * model.alpha[i] * pooled;
            mg.head_b += dy * model.alpha[i];

            const double da = dy * model.alpha[i] * mod.params.head_w / cells;
            if (da == 0.0) continue;
            for (std::size_t m = 0; m < out_r; ++m)
                for (std::size_t n = 0; n < out_c; ++n) {
                    if (a.at(m, n) <= 0.0) continue;  // rectifier gate
                    for (const KernelTap& t : mod.taps)
                        mg.kernel.data()[t.flat] += da * xn[(m + t.di) * cols + (n + t.dj)];
                    mg.bias += da;
                }
        }
    }
    return {loss * inv_b, std::move(g)};
}

double penalized_loss(const FusedModel& model, const std::vector<MatrixView>& windows,
                      const std::vector<double>& targets) {
    const std::size_t batch = windows.size();
    if (batch == 0) throw SizeError("empty batch");
    if (targets.size() != batch) throw SizeError("batch target length mismatch");
    double mse = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        double err = fused_forward(windows[b], model) - targets[b];
        mse += err * err;
    }
    mse /= static_cast<double>(batch);

    std::size_t small = 0;
    for (const ModuleState& mod : model.modules)
        for (const KernelTap& t : mod.taps)
            if (std::abs(mod.params.kernel.data()[t.flat]) <= model.prune_epsilon) ++small;
    return mse + model.penalty_lambda * static_cast<double>(small);
}

FusedModel init_model(const WindowSet& dataset, const TrainConfig& cfg,
                      const SelectionReport& selection) {
    cfg.validate();
    if (dataset.size() == 0) throw SizeError("empty training dataset");
    if (dataset.cols() != selection.selected.size())
        throw SizeError("dataset/selection mismatch: " + std::to_string(dataset.cols()) +
                        " columns vs " + std::to_string(selection.selected.size()) +
                        " selected");
    const std::size_t f_max = *std::max_element(cfg.kernel_sizes.begin(), cfg.kernel_sizes.end());
    if (dataset.cols() < f_max)
        throw SizeError("selected feature count below max kernel size");
    if (dataset.window < f_max) throw SizeError("window below max kernel size");

    Rng rng(cfg.seed);
    FusedModel model;
    model.window = dataset.window;
    model.d_input = dataset.cols();
    model.prune_epsilon = cfg.prune_epsilon;
    model.penalty_lambda = cfg.penalty_lambda;
    model.selection = selection;
    model.normalizer = Standardizer::fit(dataset.values);

    // Head weights start at the target scale so the initial predictions are
    // commensurate with y; otherwise the fixed lr schedule spends the whole
    // budget closing a pure scale gap.
    double target_sd = 0.0;
    {
        double mean = 0.0;
        for (double t : dataset.targets) mean += t;
        mean /= static_cast<double>(dataset.size());
        for (double t : dataset.targets) target_sd += (t - mean) * (t - mean);
        target_sd = std::sqrt(target_sd / static_cast<double>(dataset.size()));
    }
    const double head_scale = target_sd > 0.0 ? target_sd : 1.0;

    const std::size_t n_mod = cfg.kernel_sizes.size();
    for (std::size_t f : cfg.kernel_sizes) {
        ModuleState mod;
        mod.params.kernel = Matrix(f, f);
        const double scale = 1.0 / std::sqrt(static_cast<double>(f * f));
        for (double& w : mod.params.kernel.data()) w = rng.uniform(-scale, scale);
        mod.params.bias = 0.0;
        mod.params.head_w = head_scale * rng.uniform(-1.0, 1.0);
        mod.params.head_b = 0.0;
        mod.mask.assign(f * f, 1);
        mod.rebuild_taps();
        model.modules.push_back(std::move(mod));
    }
    model.alpha.assign(n_mod, 1.0 / static_cast<double>(n_mod));
    return model;
}

namespace {

struct AdamGroup {
    std::vector<double> m, v;
    explicit AdamGroup(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamState {
    std::vector<AdamGroup> kernels;   // per module
    AdamGroup scalars;                // [bias, head_w, head_b] per module, flattened
    AdamGroup alpha;
    std::size_t t = 0;

    AdamState(const FusedModel& model)
        : scalars(model.modules.size() * 3), alpha(model.alpha.size()) {
        for (const ModuleState& mod : model.modules) kernels.emplace_back(mod.mask.size());
    }
};

void adam_update(double g, double& m, double& v, double& w, double lr, double bc1, double bc2,
                 const TrainConfig& cfg) {
    m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
    v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g * g;
    w -= lr * (m / bc1) / (std::sqrt(v / bc2) + cfg.adam_eps);
}

void adam_step(FusedModel& model, const Gradients& g, const TrainConfig& cfg, double lr,
               AdamState& st) {
    ++st.t;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(st.t));
    for (std::size_t i = 0; i < model.modules.size(); ++i) {
        ModuleState& mod = model.modules[i];
        AdamGroup& kg = st.kernels[i];
        for (const KernelTap& t : mod.taps)  // masked entries are never touched
            adam_update(g.modules[i].kernel.data()[t.flat], kg.m[t.flat], kg.v[t.flat],
                        mod.params.kernel.data()[t.flat], lr, bc1, bc2, cfg);
        adam_update(g.modules[i].bias, st.scalars.m[i * 3], st.scalars.v[i * 3],
                    mod.params.bias, lr, bc1, bc2, cfg);
        adam_update(g.modules[i].head_w, st.scalars.m[i * 3 + 1], st.scalars.v[i * 3 + 1],
                    mod.params.head_w, lr, bc1, bc2, cfg);
        adam_update(g.modules[i].head_b, st.scalars.m[i * 3 + 2], st.scalars.v[i * 3 + 2],
                    mod.params.head_b, lr, bc1, bc2, cfg);
    }
    for (std::size_t i = 0; i < model.alpha.size(); ++i)
        adam_update(g.alpha[i], st.alpha.m[i], st.alpha.v[i], model.alpha[i], lr, bc1, bc2, cfg);
}

// Deterministic padding of a re-selection result up to `want` columns:
// gate survivors in report order, then remaining features by descending MI.
std::vector<std::size_t> pad_selection(const SelectionReport& report, std::size_t want) {
    std::vector<std::size_t> cols = report.selected;
    if (cols.size() > want) cols.resize(want);
    if (cols.size() < want) {
        std::vector<std::size_t> rest;
        for (std::size_t c = 0; c < report.mi.size(); ++c)
            if (std::find(cols.begin(), cols.end(), c) == cols.end()) rest.push_back(c);
        std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
            return report.mi[a] > report.mi[b];
        });
        for (std::size_t c : rest) {
            if (cols.size() == want) break;
            cols.push_back(c);
        }
    }
    return cols;
}

}  // namespace

FusedModel train(const WindowSet& dataset, const TrainConfig& cfg,
                 const SelectionReport& selection,
                 const std::optional<ReselectContext>& reselect) {
    FusedModel model = init_model(dataset, cfg, selection);
    if (reselect && reselect->full.n() != dataset.values.rows())
        throw SizeError("reselect context rows do not match dataset");

    WindowSet data = dataset;
    SelectionReport current = selection;
    AdamState adam(model);
    Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> indices(data.size());
    std::iota(indices.begin(), indices.end(), 0);

    std::vector<MatrixView> batch_views;
    std::vector<double> batch_targets;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (reselect && epoch > 0) {
            SelectionConfig sc = reselect->sel_cfg;
            sc.top_m = model.d_input;
            SelectionReport next =
                dynamic_reselect(current, reselect->full.values, reselect->full.y, sc);
            std::vector<std::size_t> cols = pad_selection(next, model.d_input);
            next.selected = cols;
            if (cols != current.selected) {
                data = make_windows(select_columns(reselect->full, cols), model.window);
                model.normalizer = Standardizer::fit(data.values);
            }
            current = next;
            model.selection = next;
        }
        if (std::find(cfg.prune_epochs.begin(), cfg.prune_epochs.end(), epoch) !=
            cfg.prune_epochs.end())
            model = prune_model(model, cfg.prune_epsilon).first;

        const double lr = lr_at(cfg, epoch);
        shuffle_rng.shuffle(indices);
        for (std::size_t start = 0; start < indices.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(start + cfg.batch_size, indices.size());
            batch_views.clear();
            batch_targets.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch_views.push_back(data.view(indices[i]));
                batch_targets.push_back(data.targets[indices[i]]);
            }
            auto [loss, grads] = loss_and_gradients(model, batch_views, batch_targets);
            (void)loss;
            adam_step(model, grads, cfg, lr, adam);
        }
    }
    return model;
}

}  // namespace litenet
