#pragma once

#include <iosfwd>
#include <string>

#include "litenet/model.hpp"

namespace litenet {

// Versioned `litenet-v1` structured-text model artifact. Doubles are written
// with 17 significant digits so a save/load round trip reproduces
// predictions bit for bit.
void save_model(std::ostream& out, const FusedModel& model, const std::string& config_echo);

struct LoadedModel {
    FusedModel model;
    std::string config_echo;
};

LoadedModel load_model(std::istream& in);

}  // namespace litenet
