#pragma once

#include <span>
#include <vector>

#include "hexrelay/propagation.hpp"
#include "hexrelay/vec2.hpp"

namespace hexrelay {

enum class Backend { Exact, Fluid };

// Per-position SINR evaluation with its serving node.
struct SinrSample {
    Vec2 pos;
    NodeRef server;
    double gamma = 0.0;            // linear
    double dist_to_server = 0.0;
    Backend backend = Backend::Exact;

    // Samples whose best server is a neighbouring cell's eNB are excluded
    // from cell-0 capacity integration.
    bool excluded() const { return server.kind == NodeRef::Kind::ENB && server.cell != 0; }
};

// Truncated-Shannon link adaptation: zero below low_db, slope*log2(1+g) in
// between, capped at cap (bits/s/Hz) above high_db.
struct LinkAdaptation {
    double low_db = -10.0;
    double high_db = 22.0;
    double slope = 0.6;
    double cap = 4.4;
};

// Achievable throughput in bits/s at linear SINR gamma.
double spectral_efficiency(double gamma, const LinkAdaptation& la, double bandwidth_hz);

// Compensated (Kahan) accumulator so reduction order does not perturb
// capacity aggregates.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

struct NodeCapacities {
    double c_enb = 0.0;            // bits/s
    std::vector<double> c_rn;      // per relay type
    double p_enb = 0.0;            // serving-area fractions
    std::vector<double> p_rn;
    double excluded_fraction = 0.0;

    double c_rn_sum() const;
};

// Average capacity of each node over the area it serves (surface integrals
// realised as sample means over the attached samples). A node that serves no
// samples gets zero capacity.
NodeCapacities node_capacities(std::span<const SinrSample> samples, int n,
                               const LinkAdaptation& la, double bandwidth_hz);

// (1 - tau) * (C_eNB + sum_i C_RNi).
double cell_capacity(double c_enb, std::span<const double> c_rn, double tau);

// Largest backhaul fraction for which relays still beat the no-relay
// baseline; may be negative. Throws std::domain_error when the denominator
// is zero.
double tau_star(double c_cell0, double c_enb, std::span<const double> c_rn);

// Self-consistent backhaul fraction: tau_B = (S/C_B)/(1+S/C_B) with
// S = sum_i C_RNi. C_B must be positive (same unit as the capacities).
double tau_backhaul(std::span<const double> c_rn, double c_b);

// C_X * (1 - tau) / N for a UE attached to node X.
double per_ue_throughput(double c_x, double tau, int n_attached);

struct CapacityReport {
    double c_enb = 0.0;
    std::vector<double> c_rn;
    double c_cell = 0.0;
    double c_cell0 = 0.0;
    double tau_used = 0.0;
    double p_enb = 0.0;
    std::vector<double> p_rn;
    double excluded_fraction = 0.0;
};

}  // namespace hexrelay
