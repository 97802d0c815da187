#ifndef MOPRL_CLI_RUNNER_HPP
#define MOPRL_CLI_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace moprl::cli {

// Runs the pipeline at the configured truncation, writes g/S/Sbar/J and
// report.json into the output directory, and returns the process exit
// code: 0 all requested checks pass, 1 a check failed, 2 setup error.
int run(const Config& cfg, std::ostream& log);

// Prints compositions, the multi-index staircase, band supports and sigma
// sets; no moments are computed. Returns 0.
int describe(const Config& cfg, std::ostream& out);

// Writes one matrix (g, S, Sbar or J) in csv or structured-text form.
// digits < 0 means automatic rendering.
int export_matrix(const Config& cfg, const std::string& what, const std::string& format,
                  int digits, std::ostream& log);

}  // namespace moprl::cli

#endif
