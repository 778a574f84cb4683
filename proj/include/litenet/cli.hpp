#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace litenet {

// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 degenerate
// numeric condition.
struct CommandOutcome {
    int exit_code = 0;
    std::vector<std::string> outputs;  // paths written on success
    std::string summary;
};

// Subcommands: synth, select, train, predict, bench, acf, sweep.
// Machine output goes to `out` (or to --out files); diagnostics and the
// summary line go to `err`.
CommandOutcome run_cli(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err);

}  // namespace litenet
