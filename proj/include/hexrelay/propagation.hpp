#pragma once

#include "hexrelay/geometry.hpp"
#include "hexrelay/vec2.hpp"

namespace hexrelay {

// Link classes of the model: eNB->UE, RN->UE and the eNB->RN feeder.
enum class LinkType { Direct, Relay, Backhaul };

// Path-loss constants, powers and noise. Distances are in the same unit as
// CellGrid::Rc (kilometres by default); powers are handled in linear
// milliwatts internally and in dBm at the interfaces.
struct PropagationParams {
    double p_dbm = 43.0;    // eNB transmit power
    double pr_dbm = 31.0;   // default relay transmit power
    double k = 1.86;        // direct-link gain constant
    double eta = 4.28;      // direct-link exponent
    double kr = 1.9e3;      // relay-link gain constant
    double eta_r = 3.75;    // relay-link exponent
    double kb = 1.86;       // backhaul gain constant (defaults to k)
    double eta_b = 4.28;    // backhaul exponent (defaults to eta)
    double nth_dbm = -104.0;
    double bandwidth_hz = 1.0e7;

    double p_lin() const;
    double nth_lin() const;
    double gain_const(LinkType t) const;
    double exponent(LinkType t) const;

    // Throws std::invalid_argument when an exponent is <= 2 or the
    // bandwidth is not positive.
    void validate() const;
};

double dbm_to_linear(double dbm);
double linear_to_dbm(double lin);

// K * d^(-eta). d must already be clamped to eps_min.
double path_gain(double d, double k, double eta);

// A transmitter as seen by the propagation layer: an eNB of some cell or a
// relay (type, cell).
struct NodeRef {
    enum class Kind { ENB, Relay } kind = Kind::ENB;
    int cell = 0;
    int type = 0;  // relay type 1..n, 0 for eNBs

    bool operator==(const NodeRef&) const = default;
};

Vec2 node_position(const NodeRef& node, const RelayLayout& layout, const CellGrid& grid);

// Linear received power from `node` at position u, with the distance clamped
// below by grid.eps_min(). Relay power comes from the layout.
double received_power(const NodeRef& node, const Vec2& u, const RelayLayout& layout,
                      const CellGrid& grid, const PropagationParams& params);

}  // namespace hexrelay
