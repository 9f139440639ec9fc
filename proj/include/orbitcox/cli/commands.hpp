#pragma once

#include "orbitcox/cli/config.hpp"

#include <string>

namespace orbitcox::cli {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kConfigError = 2, kNonConvergence = 3, kIoError = 4 };

Snapshot cmd_sample(const RunConfig& cfg);

/// which: distance | outage | laplace
CurveTable cmd_analytic(const RunConfig& cfg, const std::string& which);

/// which: distance | outage | laplace | coverage. Tables carry stderr columns.
CurveTable cmd_mc(const RunConfig& cfg, const std::string& which);

/// Evaluates `which` for both configs (each analytically or by simulation)
/// on their common grid and joins the results. The metadata carries the
/// largest absolute deviation and, for distance curves, the KS statistic
/// over the grid.
CurveTable cmd_compare(const RunConfig& a, const RunConfig& b, const std::string& which,
                       const std::string& mode_a, const std::string& mode_b);

/// Coverage curves for every (lambda, total / lambda) pair of run.sweep, their
/// pointwise envelope and, when configured, the binomial curve with N = total.
CurveTable cmd_sweep(const RunConfig& cfg);

/// Entry point of the orbitcox tool.
int main(int argc, char** argv);

}  // namespace orbitcox::cli
