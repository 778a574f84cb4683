#pragma once

#include <iosfwd>
#include <string>

#include "litenet/market_data.hpp"
#include "litenet/mutual_info.hpp"
#include "litenet/train.hpp"

namespace litenet {

// End-to-end run configuration. Defaults follow the reference operating
// point: k = 10 clusters, prune threshold 0.01, penalty 0.1, lr0 0.001
// halved every 10 epochs, batch 128, kernel sizes 3 and 5.
struct PipelineConfig {
    enum class Source { Synthetic, Csv };

    // [data]
    Source source = Source::Synthetic;
    std::string csv_path;
    SynthConfig synth;

    // [pipeline]
    std::size_t horizon = 1;
    std::size_t vol_window = 20;
    std::size_t window = 20;
    SelectionConfig selection;
    bool dynamic_reselect = false;
    std::uint64_t seed = 1;  // selection seed and feature-noise seed

    // [train]
    TrainConfig train;

    // [bench]
    std::size_t bench_reps = 10000;
    std::size_t bench_warmup = 100;

    void validate() const;
};

// Strict sectioned key = value parser: unknown sections or keys are
// rejected, missing keys take the defaults above.
PipelineConfig load_config(std::istream& in);
PipelineConfig load_config_string(const std::string& text);

// Canonical form: fixed section and key order; load(serialize(cfg)) is the
// identity on serialized text.
std::string serialize_config(const PipelineConfig& cfg);

}  // namespace litenet
