#include "litenet/model_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace litenet {

namespace {

const char* kTag = "litenet-v1";

template <typename T>
void write_list(std::ostream& out, const char* key, const std::vector<T>& values) {
    out << key << " =";
    for (const T& v : values) out << ' ' << v;
    out << "\n";
}

void write_list(std::ostream& out, const char* key, const std::vector<double>& values) {
    out << key << " =";
    for (double v : values) out << ' ' << format_g17(v);
    out << "\n";
}

struct Reader {
    std::istream& in;
    std::size_t line_no = 0;

    std::string next_line() {
        std::string line;
        if (!std::getline(in, line)) throw ParseError("unexpected end of model artifact", line_no);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    // expects `key = value`, returns value
    std::string value(const std::string& key) {
        std::string line = next_line();
        std::string prefix = key + " =";
        if (line.compare(0, prefix.size(), prefix) != 0)
            throw ParseError("expected key '" + key + "', got '" + line + "'", line_no);
        std::string rest = line.substr(prefix.size());
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        return rest;
    }

    double number(const std::string& key) {
        std::string s = value(key);
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || errno == ERANGE)
            throw ParseError("bad numeric value for '" + key + "'", line_no);
        return v;
    }

    long long integer(const std::string& key) {
        std::string s = value(key);
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (end != s.c_str() + s.size() || errno == ERANGE)
            throw ParseError("bad integer value for '" + key + "'", line_no);
        return v;
    }

    std::vector<double> numbers(const std::string& key) {
        std::istringstream ss(value(key));
        std::vector<double> out;
        std::string tok;
        while (ss >> tok) {
            errno = 0;
            char* end = nullptr;
            double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size() || errno == ERANGE)
                throw ParseError("bad numeric list value for '" + key + "'", line_no);
            out.push_back(v);
        }
        return out;
    }

    std::vector<std::size_t> indices(const std::string& key) {
        std::istringstream ss(value(key));
        std::vector<std::size_t> out;
        long long v;
        while (ss >> v) {
            if (v < 0) throw ParseError("negative index for '" + key + "'", line_no);
            out.push_back(static_cast<std::size_t>(v));
        }
        return out;
    }
};

}  // namespace

void save_model(std::ostream& out, const FusedModel& model, const std::string& config_echo) {
    out << kTag << "\n";
    out << "window = " << model.window << "\n";
    out << "d_input = " << model.d_input << "\n";
    out << "prune_epsilon = " << format_g17(model.prune_epsilon) << "\n";
    out << "penalty_lambda = " << format_g17(model.penalty_lambda) << "\n";
    write_list(out, "normalizer_means", model.normalizer.means);
    write_list(out, "normalizer_stds", model.normalizer.stds);

    const SelectionReport& sel = model.selection;
    write_list(out, "selection_mi", sel.mi);
    write_list(out, "selection_weights", sel.weights);
    write_list(out, "selection_weight_rank", sel.weight_rank);
    out << "selection_threshold = " << format_g17(sel.mi_threshold) << "\n";
    write_list(out, "selection_survivors", sel.gate_survivors);
    write_list(out, "selection_selected", sel.selected);
    out << "selection_fallback = " << (sel.fallback ? 1 : 0) << "\n";
    out << "selection_cycle = " << sel.cycle << "\n";
    out << "selection_grid = " << sel.grid_size << "\n";
    out << "selection_kernel = " << sel.kernel << "\n";
    out << "selection_bandwidth = " << sel.bandwidth_rule << "\n";

    out << "modules = " << model.modules.size() << "\n";
    for (const ModuleState& mod : model.modules) {
        out << "f = " << mod.params.f() << "\n";
        write_list(out, "kernel", mod.params.kernel.data());
        out << "mask =";
        for (auto m : mod.mask) out << ' ' << static_cast<int>(m);
        out << "\n";
        out << "bias = " << format_g17(mod.params.bias) << "\n";
        out << "head_w = " << format_g17(mod.params.head_w) << "\n";
        out << "head_b = " << format_g17(mod.params.head_b) << "\n";
    }
    write_list(out, "alpha", model.alpha);

    std::size_t echo_lines = 0;
    for (char c : config_echo)
        if (c == '\n') ++echo_lines;
    if (!config_echo.empty() && config_echo.back() != '\n') ++echo_lines;
    out << "config_echo_lines = " << echo_lines << "\n";
    out << config_echo;
    if (!config_echo.empty() && config_echo.back() != '\n') out << "\n";
    out << "end " << kTag << "\n";
}

LoadedModel load_model(std::istream& in) {
    Reader r{in};
    if (r.next_line() != kTag) throw ParseError("not a litenet-v1 artifact", r.line_no);

    LoadedModel loaded;
    FusedModel& model = loaded.model;
    model.window = static_cast<std::size_t>(r.integer("window"));
    model.d_input = static_cast<std::size_t>(r.integer("d_input"));
    model.prune_epsilon = r.number("prune_epsilon");
    model.penalty_lambda = r.number("penalty_lambda");
    model.normalizer.means = r.numbers("normalizer_means");
    model.normalizer.stds = r.numbers("normalizer_stds");

    SelectionReport& sel = model.selection;
    sel.mi = r.numbers("selection_mi");
    sel.weights = r.numbers("selection_weights");
    sel.weight_rank = r.indices("selection_weight_rank");
    sel.mi_threshold = r.number("selection_threshold");
    sel.gate_survivors = r.indices("selection_survivors");
    sel.selected = r.indices("selection_selected");
    sel.fallback = r.integer("selection_fallback") != 0;
    sel.cycle = static_cast<std::uint64_t>(r.integer("selection_cycle"));
    sel.grid_size = static_cast<std::size_t>(r.integer("selection_grid"));
    sel.kernel = r.value("selection_kernel");
    sel.bandwidth_rule = r.value("selection_bandwidth");

    const long long n_modules = r.integer("modules");
    if (n_modules < 1) throw ParseError("artifact must contain at least one module", r.line_no);
    for (long long i = 0; i < n_modules; ++i) {
        ModuleState mod;
        const std::size_t f = static_cast<std::size_t>(r.integer("f"));
        std::vector<double> kernel = r.numbers("kernel");
        if (kernel.size() != f * f) throw ParseError("kernel size does not match f", r.line_no);
        mod.params.kernel = Matrix(f, f);
        mod.params.kernel.data() = kernel;
        std::vector<std::size_t> mask = r.indices("mask");
        if (mask.size() != f * f) throw ParseError("mask size does not match f", r.line_no);
        mod.mask.resize(mask.size());
        for (std::size_t j = 0; j < mask.size(); ++j)
            mod.mask[j] = mask[j] ? 1 : 0;
        mod.params.bias = r.number("bias");
        mod.params.head_w = r.number("head_w");
        mod.params.head_b = r.number("head_b");
        mod.rebuild_taps();
        model.modules.push_back(std::move(mod));
    }
    model.alpha = r.numbers("alpha");
    if (model.alpha.size() != model.modules.size())
        throw ParseError("alpha length does not match module count", r.line_no);

    const long long echo_lines = r.integer("config_echo_lines");
    std::string echo;
    for (long long i = 0; i < echo_lines; ++i) echo += r.next_line() + "\n";
    loaded.config_echo = echo;
    if (r.next_line() != std::string("end ") + kTag)
        throw ParseError("missing artifact terminator", r.line_no);
    return loaded;
}

}  // namespace litenet
