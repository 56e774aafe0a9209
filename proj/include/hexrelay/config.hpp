#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hexrelay/capacity.hpp"
#include "hexrelay/geometry.hpp"
#include "hexrelay/optimizer.hpp"
#include "hexrelay/pipeline.hpp"
#include "hexrelay/propagation.hpp"

namespace hexrelay {

// Invalid or unknown configuration input; mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    double rc_km = 1.0;
    int rings = 10;
};

struct SamplingConfig {
    std::size_t n = 10000;
    SampleScheme scheme = SampleScheme::Grid;
    std::uint64_t seed = 1;
};

struct LayoutConfig {
    int n = 3;
    double rr_over_rc = 0.7;
    double phi_rad = 0.0;
    double pr_dbm = 31.0;
};

struct ValidationConfig {
    double bin_width_over_rc = 0.1;
    std::size_t min_bin_count = 30;
};

struct ExperimentConfig {
    int schema_version = 1;
    Backend backend = Backend::Fluid;
    GridConfig grid;
    PropagationParams propagation;
    LinkAdaptation link_adaptation;
    SamplingConfig sampling;
    LayoutConfig layout;
    int fix_n = -1;  // restrict the search to one relay count; -1 = free
    AnnealingSchedule annealing{35.0, 0.995, 2000, 42};
    TauSpec tau = TauSpec::fixed(0.0);
    ValidationConfig validation;
    std::string out_dir = "out";

    // Parses and validates; unknown keys are rejected with their path.
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);

    // Full round-trippable echo, defaults included.
    nlohmann::json to_json() const;

    CellGrid make_grid() const;
    RelayLayout make_layout() const;
    UESampleSet make_samples(const CellGrid& grid) const;
};

// "fixed:X", "star" or "backhaul:CB" (CLI --tau flag).
TauSpec parse_tau_flag(const std::string& text);

const char* backend_name(Backend b);
Backend parse_backend(const std::string& name);

}  // namespace hexrelay
