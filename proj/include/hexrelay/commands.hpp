#pragma once

#include <string>
#include <vector>

#include "hexrelay/config.hpp"

namespace hexrelay {

// Batch experiment entry points. Each writes machine-readable outputs under
// config.out_dir and returns a process exit code (0 ok, 1 config error,
// 2 runtime error). Output bytes are a pure function of the config.
int cmd_evaluate(const ExperimentConfig& config);
int cmd_validate(const ExperimentConfig& config);
int cmd_optimize(const ExperimentConfig& config);
int cmd_exhaustive(const ExperimentConfig& config);

// --sweep KEY=V1,V2,... applied to optimize/exhaustive. "tau_star" runs the
// per-n exhaustive sweep and reports tau*(n) and tau_B(n) at each optimum.
int cmd_sweep(const ExperimentConfig& config, const std::string& sweep_arg, bool exhaustive);

}  // namespace hexrelay
