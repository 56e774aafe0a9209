#pragma once

#include <optional>
#include <vector>

#include "hexrelay/capacity.hpp"
#include "hexrelay/geometry.hpp"
#include "hexrelay/propagation.hpp"
#include "hexrelay/sinr_exact.hpp"
#include "hexrelay/sinr_fluid.hpp"

namespace hexrelay {

// Backhaul time-share policy applied when turning node capacities into cell
// capacity.
struct TauSpec {
    enum class Policy { Fixed, Star, Backhaul };
    Policy policy = Policy::Fixed;
    double value = 0.0;         // Fixed: the frame fraction itself
    double cb_bps_hz = 4.4;     // Backhaul: feeder capacity per Hz
    bool cb_from_sinr = false;  // Backhaul: derive C_B from the backhaul SINR

    static TauSpec fixed(double v) { return {Policy::Fixed, v, 4.4, false}; }
    static TauSpec star() { return {Policy::Star, 0.0, 4.4, false}; }
    static TauSpec backhaul(double cb, bool from_sinr = false) {
        return {Policy::Backhaul, 0.0, cb, from_sinr};
    }
};

// tau actually applied under a policy, given the node capacities and the
// no-relay baseline. backhaul_gamma (linear) is consulted only by the
// backhaul policy with CB_from_sinr set.
double resolve_tau_value(const TauSpec& tau, const NodeCapacities& caps, double c_cell0,
                         const LinkAdaptation& la, double bandwidth_hz, double backhaul_gamma);

// Capacity evaluation over a fixed UE sample set: attachment by best server,
// per-sample SINR through the chosen backend, node capacities, cell capacity
// under a tau policy. The baseline (no relays, tau = 0) is cached per
// backend.
class CapacityPipeline {
public:
    CapacityPipeline(const CellGrid& grid, const PropagationParams& params, UESampleSet samples,
                     LinkAdaptation la = {});

    std::vector<SinrSample> sinr_field(const RelayLayout& layout, Backend backend) const;

    CapacityReport evaluate(const RelayLayout& layout, Backend backend,
                            const TauSpec& tau) const;

    double baseline_capacity(Backend backend) const;

    // tau actually applied for the given node capacities under the policy.
    double resolve_tau(const TauSpec& tau, const NodeCapacities& caps,
                       const RelayLayout& layout, Backend backend) const;

    // Backhaul SINR for the layout through the requested backend.
    double backhaul_sinr(const RelayLayout& layout, Backend backend) const;

    const CellGrid& grid() const { return grid_; }
    const PropagationParams& params() const { return params_; }
    const UESampleSet& samples() const { return samples_; }
    const LinkAdaptation& link_adaptation() const { return la_; }

private:
    const CellGrid& grid_;
    PropagationParams params_;
    UESampleSet samples_;
    LinkAdaptation la_;
    mutable std::optional<double> baseline_exact_;
    mutable std::optional<double> baseline_fluid_;
};

// Fluid-backend capacity evaluation specialised for optimisation loops: the
// per-UE quantities that do not depend on the relay pattern (distance to the
// central eNB, the eNB interference kernel, the strongest eNB power) are
// precomputed once.
class FluidCapacityEvaluator {
public:
    FluidCapacityEvaluator(const CellGrid& grid, const PropagationParams& params,
                           const UESampleSet& samples, LinkAdaptation la = {});

    NodeCapacities node_caps(const RelayLayout& layout) const;
    double baseline_capacity() const { return baseline_; }

    const CellGrid& grid() const { return grid_; }
    const PropagationParams& params() const { return params_; }

private:
    const CellGrid& grid_;
    PropagationParams params_;
    LinkAdaptation la_;
    std::vector<Vec2> pos_;
    std::vector<double> gamma0_;     // fluid eNB-only SIR at each sample
    std::vector<double> i2_;
    std::vector<double> om_denom_;   // P*K*(2Rc-r)^(2-eta)*(etaR-2)/(eta-2)
    std::vector<double> best_enb_;   // strongest eNB power
    std::vector<int> best_enb_cell_;
    double baseline_ = 0.0;
};

}  // namespace hexrelay
