#include "hexrelay/sinr_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hexrelay {

// Per-position sums over the grid. Relay sums are accumulated with the
// nearest node excluded so the decomposition terms never suffer the
// cancellation of subtracting a dominant peak from a total.
struct ExactSinr::Fields {
    double g_enb0 = 0.0;          // received power from eNB 0
    double i_enb = 0.0;           // sum over eNBs b >= 1
    double best_enb = 0.0;        // strongest eNB power
    int best_enb_cell = 0;
    std::vector<double> s_excl;   // per type: sum over cells k != kstar
    std::vector<double> peak;     // per type: power from the nearest relay
    std::vector<double> rmin;     // per type: clamped nearest distance
    std::vector<int> kstar;       // per type: nearest cell
};

ExactSinr::ExactSinr(const CellGrid& grid, const RelayLayout& layout,
                     const PropagationParams& params)
    : grid_(grid), layout_(layout), params_(params) {
    params_.validate();
}

void ExactSinr::compute_fields(const Vec2& u, Fields& f) const {
    const auto& centers = grid_.centers();
    const double eps = grid_.eps_min();
    const double p_lin = params_.p_lin();

    f.g_enb0 = 0.0;
    f.i_enb = 0.0;
    f.best_enb = -1.0;
    f.best_enb_cell = 0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        const double d = std::max(distance(u, centers[k]), eps);
        const double g = p_lin * path_gain(d, params_.k, params_.eta);
        if (k == 0)
            f.g_enb0 = g;
        else
            f.i_enb += g;
        if (g > f.best_enb) {
            f.best_enb = g;
            f.best_enb_cell = static_cast<int>(k);
        }
    }

    const int n = layout_.n;
    f.s_excl.assign(n, 0.0);
    f.peak.assign(n, 0.0);
    f.rmin.assign(n, 0.0);
    f.kstar.assign(n, 0);
    if (n == 0) return;

    const double pr_lin = dbm_to_linear(layout_.pr_dbm);
    for (int i = 1; i <= n; ++i) {
        const Vec2 v = layout_.offset(i);
        // pass 1: nearest cell (lowest index wins ties)
        double dmin = std::numeric_limits<double>::infinity();
        int kstar = 0;
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double d = distance(u, centers[k] + v);
            if (d < dmin) {
                dmin = d;
                kstar = static_cast<int>(k);
            }
        }
        // pass 2: sums with the nearest excluded
        double excl = 0.0;
        for (std::size_t k = 0; k < centers.size(); ++k) {
            if (static_cast<int>(k) == kstar) continue;
            const double d = std::max(distance(u, centers[k] + v), eps);
            excl += pr_lin * path_gain(d, params_.kr, params_.eta_r);
        }
        const double dstar = std::max(dmin, eps);
        f.kstar[i - 1] = kstar;
        f.rmin[i - 1] = dstar;
        f.peak[i - 1] = pr_lin * path_gain(dstar, params_.kr, params_.eta_r);
        f.s_excl[i - 1] = excl;
    }
}

NodeRef ExactSinr::best_server(const Vec2& u) const {
    Fields f;
    compute_fields(u, f);

    NodeRef best{NodeRef::Kind::ENB, f.best_enb_cell, 0};
    double best_pow = f.best_enb;
    for (int i = 1; i <= layout_.n; ++i) {
        const double g = f.peak[i - 1];
        const int cell = f.kstar[i - 1];
        // ties resolve to the lowest (cell, type); eNBs carry type 0
        if (g > best_pow ||
            (g == best_pow && (cell < best.cell || (cell == best.cell && i < best.type)))) {
            best = {NodeRef::Kind::Relay, cell, i};
            best_pow = g;
        }
    }
    return best;
}

EnbSinrResult ExactSinr::sinr_enb(const Vec2& u) const {
    Fields f;
    compute_fields(u, f);

    const int n = layout_.n;
    double relay_total = 0.0;
    for (int i = 0; i < n; ++i) relay_total += f.s_excl[i] + f.peak[i];

    EnbSinrResult out;
    out.gamma = f.g_enb0 / (f.i_enb + relay_total + params_.nth_lin());

    const NodeRef server = best_server(u);
    out.served = server.kind == NodeRef::Kind::ENB && server.cell == 0;

    if (f.i_enb > 0.0) {
        auto& p = out.parts;
        p.valid = true;
        p.gamma0 = f.g_enb0 / f.i_enb;
        p.i2 = params_.nth_lin() / f.i_enb;
        p.gamma_ik.resize(n);
        p.omega_i.resize(n);
        p.kstar = f.kstar;
        p.i1 = 0.0;
        for (int i = 0; i < n; ++i) {
            p.gamma_ik[i] = f.peak[i] / f.s_excl[i];
            p.omega_i[i] = f.s_excl[i] / f.i_enb;
            p.i1 += p.omega_i[i] * (1.0 + p.gamma_ik[i]);
        }
    }
    return out;
}

RelaySinrResult ExactSinr::sinr_relay(const Vec2& u, int type) const {
    if (type < 1 || type > layout_.n)
        throw std::invalid_argument("sinr_relay: invalid relay type");

    Fields f;
    compute_fields(u, f);

    const int j = type - 1;
    double other_relays = 0.0;
    for (int i = 0; i < layout_.n; ++i) {
        if (i == j)
            other_relays += f.s_excl[i];
        else
            other_relays += f.s_excl[i] + f.peak[i];
    }

    RelaySinrResult out;
    out.gamma = f.peak[j] / (f.g_enb0 + f.i_enb + other_relays + params_.nth_lin());
    out.kstar = f.kstar[j];
    out.gamma_jk = f.peak[j] / f.s_excl[j];
    out.omega_j = f.s_excl[j] / f.i_enb;
    out.i3 = params_.nth_lin() / f.s_excl[j];

    const NodeRef server = best_server(u);
    out.served = server.kind == NodeRef::Kind::Relay && server.type == type &&
                 server.cell == f.kstar[j];
    return out;
}

BackhaulSinrResult ExactSinr::sinr_backhaul() const {
    if (layout_.n < 1) throw std::domain_error("sinr_backhaul: layout has no relays");

    const auto& centers = grid_.centers();
    const double eps = grid_.eps_min();
    const Vec2 rx = centers[0] + layout_.offset(1);
    const double p_lin = params_.p_lin();

    const double rr = std::max(layout_.rr, eps);
    const double signal = p_lin * path_gain(rr, params_.kb, params_.eta_b);
    double interference = 0.0;
    for (std::size_t b = 1; b < centers.size(); ++b) {
        const double d = std::max(distance(rx, centers[b]), eps);
        interference += p_lin * path_gain(d, params_.kb, params_.eta_b);
    }

    BackhaulSinrResult out;
    out.gamma = signal / (interference + params_.nth_lin());
    out.i4 = params_.nth_lin() / signal;
    return out;
}

ExactSinr::Evaluation ExactSinr::evaluate(const Vec2& u) const {
    Fields f;
    compute_fields(u, f);

    NodeRef server{NodeRef::Kind::ENB, f.best_enb_cell, 0};
    double best_pow = f.best_enb;
    for (int i = 1; i <= layout_.n; ++i) {
        const double g = f.peak[i - 1];
        const int cell = f.kstar[i - 1];
        if (g > best_pow ||
            (g == best_pow && (cell < server.cell || (cell == server.cell && i < server.type)))) {
            server = {NodeRef::Kind::Relay, cell, i};
            best_pow = g;
        }
    }

    Evaluation out;
    out.server = server;
    if (server.kind == NodeRef::Kind::ENB) {
        double relay_total = 0.0;
        for (int i = 0; i < layout_.n; ++i) relay_total += f.s_excl[i] + f.peak[i];
        out.gamma = f.g_enb0 / (f.i_enb + relay_total + params_.nth_lin());
        out.dist_to_server = std::max(distance(u, grid_.centers()[0]), grid_.eps_min());
    } else {
        const int j = server.type - 1;
        double interference = f.g_enb0 + f.i_enb + f.s_excl[j];
        for (int i = 0; i < layout_.n; ++i)
            if (i != j) interference += f.s_excl[i] + f.peak[i];
        out.gamma = f.peak[j] / (interference + params_.nth_lin());
        out.dist_to_server = f.rmin[j];
    }
    return out;
}

}  // namespace hexrelay
