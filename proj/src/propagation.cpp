#include "hexrelay/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexrelay {

double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }

double linear_to_dbm(double lin) { return 10.0 * std::log10(lin); }

double path_gain(double d, double k, double eta) { return k * std::pow(d, -eta); }

double PropagationParams::p_lin() const { return dbm_to_linear(p_dbm); }

double PropagationParams::nth_lin() const { return dbm_to_linear(nth_dbm); }

double PropagationParams::gain_const(LinkType t) const {
    switch (t) {
        case LinkType::Direct: return k;
        case LinkType::Relay: return kr;
        case LinkType::Backhaul: return kb;
    }
    return k;
}

double PropagationParams::exponent(LinkType t) const {
    switch (t) {
        case LinkType::Direct: return eta;
        case LinkType::Relay: return eta_r;
        case LinkType::Backhaul: return eta_b;
    }
    return eta;
}

void PropagationParams::validate() const {
    if (!(eta > 2.0) || !(eta_r > 2.0) || !(eta_b > 2.0))
        throw std::invalid_argument("PropagationParams: path-loss exponents must exceed 2");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("PropagationParams: bandwidth must be positive");
    if (!(k > 0.0) || !(kr > 0.0) || !(kb > 0.0))
        throw std::invalid_argument("PropagationParams: gain constants must be positive");
}

Vec2 node_position(const NodeRef& node, const RelayLayout& layout, const CellGrid& grid) {
    const Vec2 c = grid.centers()[static_cast<std::size_t>(node.cell)];
    if (node.kind == NodeRef::Kind::ENB) return c;
    return c + layout.offset(node.type);
}

double received_power(const NodeRef& node, const Vec2& u, const RelayLayout& layout,
                      const CellGrid& grid, const PropagationParams& params) {
    const double d = std::max(distance(u, node_position(node, layout, grid)), grid.eps_min());
    if (node.kind == NodeRef::Kind::ENB)
        return params.p_lin() * path_gain(d, params.k, params.eta);
    return dbm_to_linear(layout.pr_dbm) * path_gain(d, params.kr, params.eta_r);
}

}  // namespace hexrelay
