#pragma once

#include <vector>

#include "hexrelay/geometry.hpp"
#include "hexrelay/propagation.hpp"

namespace hexrelay {

// Decomposition terms of the eNB-served SINR: gamma0 is the eNB-only SIR,
// gamma_ik the per-type relay SIR, omega_i the ratio of type-i relay
// interference to eNB interference, i2 the noise-to-eNB-interference ratio.
// Only defined when the grid has at least one interferer ring.
struct EnbSinrParts {
    double gamma0 = 0.0;
    double i1 = 0.0;
    double i2 = 0.0;
    std::vector<double> gamma_ik;  // indexed by type-1
    std::vector<double> omega_i;
    std::vector<int> kstar;
    bool valid = false;
};

struct EnbSinrResult {
    double gamma = 0.0;  // direct-sum SINR from eNB 0
    bool served = true;  // best server at u is eNB 0
    EnbSinrParts parts;
};

struct RelaySinrResult {
    double gamma = 0.0;  // direct-sum SINR from relay (type, kstar)
    bool served = true;  // best server at u is that relay
    int kstar = 0;
    double gamma_jk = 0.0;
    double omega_j = 0.0;
    double i3 = 0.0;
};

struct BackhaulSinrResult {
    double gamma = 0.0;
    double i4 = 0.0;  // noise over received backhaul signal
};

// Discrete-sum SINR over every node of the finite grid. This is the
// reference the fluid model is validated against.
class ExactSinr {
public:
    ExactSinr(const CellGrid& grid, const RelayLayout& layout, const PropagationParams& params);

    // Highest received power among all eNBs and relays; equal powers resolve
    // to the lowest (cell, type) pair with eNBs as type 0.
    NodeRef best_server(const Vec2& u) const;

    EnbSinrResult sinr_enb(const Vec2& u) const;
    RelaySinrResult sinr_relay(const Vec2& u, int type) const;

    // Feeder-link SINR evaluated at the type-1 relay of cell 0. Throws
    // std::domain_error when the layout has no relays.
    BackhaulSinrResult sinr_backhaul() const;

    // Best server and its SINR in one pass (used by the capacity pipeline).
    struct Evaluation {
        NodeRef server;
        double gamma;
        double dist_to_server;
    };
    Evaluation evaluate(const Vec2& u) const;

    const CellGrid& grid() const { return grid_; }
    const RelayLayout& layout() const { return layout_; }
    const PropagationParams& params() const { return params_; }

private:
    struct Fields;
    void compute_fields(const Vec2& u, Fields& f) const;

    const CellGrid& grid_;
    RelayLayout layout_;
    PropagationParams params_;
};

}  // namespace hexrelay
