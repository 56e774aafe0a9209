#include "hexrelay/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hexrelay {

namespace {

struct Attachment {
    NodeRef server;
    double r0 = 0.0;                // clamped distance to eNB 0
    std::vector<double> rmin;       // per type, clamped
    std::vector<int> kstar;
};

// Best-server attachment from actual node positions. Both backends attach
// identically; only the SINR evaluation differs.
Attachment attach(const Vec2& u, const RelayLayout& layout, const CellGrid& grid,
                  const PropagationParams& params) {
    Attachment a;
    const auto& centers = grid.centers();
    const double eps = grid.eps_min();
    const double p_lin = params.p_lin();

    double best_pow = -1.0;
    int best_cell = 0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        const double d = std::max(distance(u, centers[k]), eps);
        const double g = p_lin * path_gain(d, params.k, params.eta);
        if (g > best_pow) {
            best_pow = g;
            best_cell = static_cast<int>(k);
        }
    }
    a.server = {NodeRef::Kind::ENB, best_cell, 0};
    a.r0 = std::max(distance(u, centers[0]), eps);

    const double pr_lin = dbm_to_linear(layout.pr_dbm);
    a.rmin.resize(static_cast<std::size_t>(layout.n));
    a.kstar.resize(static_cast<std::size_t>(layout.n));
    for (int i = 1; i <= layout.n; ++i) {
        const NearestRelay nr = nearest_relay_of_type(u, i, layout, grid);
        a.rmin[i - 1] = nr.dist;
        a.kstar[i - 1] = nr.cell;
        const double g = pr_lin * path_gain(nr.dist, params.kr, params.eta_r);
        if (g > best_pow || (g == best_pow && (nr.cell < a.server.cell ||
                                               (nr.cell == a.server.cell && i < a.server.type)))) {
            best_pow = g;
            a.server = {NodeRef::Kind::Relay, nr.cell, i};
        }
    }
    return a;
}

}  // namespace

CapacityPipeline::CapacityPipeline(const CellGrid& grid, const PropagationParams& params,
                                   UESampleSet samples, LinkAdaptation la)
    : grid_(grid), params_(params), samples_(std::move(samples)), la_(la) {
    params_.validate();
    if (samples_.positions.empty())
        throw std::invalid_argument("CapacityPipeline: empty sample set");
}

std::vector<SinrSample> CapacityPipeline::sinr_field(const RelayLayout& layout,
                                                     Backend backend) const {
    std::vector<SinrSample> out;
    out.reserve(samples_.positions.size());

    if (backend == Backend::Exact) {
        ExactSinr exact(grid_, layout, params_);
        for (const Vec2& u : samples_.positions) {
            const auto ev = exact.evaluate(u);
            out.push_back({u, ev.server, ev.gamma, ev.dist_to_server, Backend::Exact});
        }
        return out;
    }

    const FluidModel fluid(params_, grid_, layout.pr_dbm);
    const double hi = 2.0 * grid_.Rc() - grid_.eps_min();
    for (const Vec2& u : samples_.positions) {
        const Attachment a = attach(u, layout, grid_, params_);
        FluidInputs in;
        in.r = std::min(a.r0, hi);
        in.r_i.reserve(a.rmin.size());
        for (double r : a.rmin) in.r_i.push_back(std::min(r, hi));

        SinrSample s;
        s.pos = u;
        s.server = a.server;
        s.backend = Backend::Fluid;
        if (a.server.kind == NodeRef::Kind::Relay) {
            s.gamma = fluid.sinr_relay(in, a.server.type);
            s.dist_to_server = a.rmin[static_cast<std::size_t>(a.server.type - 1)];
        } else {
            s.gamma = fluid.sinr_enb(in);
            s.dist_to_server = a.r0;
        }
        out.push_back(s);
    }
    return out;
}

double CapacityPipeline::baseline_capacity(Backend backend) const {
    auto& cache = backend == Backend::Exact ? baseline_exact_ : baseline_fluid_;
    if (!cache) {
        const RelayLayout none{0, 0.0, 0.0, params_.pr_dbm};
        const auto field = sinr_field(none, backend);
        const auto caps = node_capacities(field, 0, la_, params_.bandwidth_hz);
        cache = cell_capacity(caps.c_enb, caps.c_rn, 0.0);
    }
    return *cache;
}

double CapacityPipeline::backhaul_sinr(const RelayLayout& layout, Backend backend) const {
    if (backend == Backend::Exact) {
        ExactSinr exact(grid_, layout, params_);
        return exact.sinr_backhaul().gamma;
    }
    const FluidModel fluid(params_, grid_, layout.pr_dbm);
    if (layout.n < 1) throw std::domain_error("backhaul_sinr: layout has no relays");
    return fluid.sinr_backhaul(layout.rr);
}

double resolve_tau_value(const TauSpec& tau, const NodeCapacities& caps, double c_cell0,
                         const LinkAdaptation& la, double bandwidth_hz, double backhaul_gamma) {
    switch (tau.policy) {
        case TauSpec::Policy::Fixed:
            if (tau.value < 0.0 || tau.value > 1.0)
                throw std::invalid_argument("tau: fixed value must lie in [0, 1]");
            return tau.value;
        case TauSpec::Policy::Star:
            return std::clamp(tau_star(c_cell0, caps.c_enb, caps.c_rn), 0.0, 1.0);
        case TauSpec::Policy::Backhaul: {
            if (caps.c_rn.empty()) return 0.0;
            double cb_bps = tau.cb_bps_hz * bandwidth_hz;
            if (tau.cb_from_sinr)
                cb_bps = spectral_efficiency(backhaul_gamma, la, bandwidth_hz);
            return tau_backhaul(caps.c_rn, cb_bps);
        }
    }
    return 0.0;
}

double CapacityPipeline::resolve_tau(const TauSpec& tau, const NodeCapacities& caps,
                                     const RelayLayout& layout, Backend backend) const {
    double backhaul_gamma = 0.0;
    if (tau.policy == TauSpec::Policy::Backhaul && tau.cb_from_sinr && layout.n > 0)
        backhaul_gamma = backhaul_sinr(layout, backend);
    return resolve_tau_value(tau, caps, baseline_capacity(backend), la_,
                             params_.bandwidth_hz, backhaul_gamma);
}

CapacityReport CapacityPipeline::evaluate(const RelayLayout& layout, Backend backend,
                                          const TauSpec& tau) const {
    const auto field = sinr_field(layout, backend);
    const auto caps = node_capacities(field, layout.n, la_, params_.bandwidth_hz);

    CapacityReport rep;
    rep.c_enb = caps.c_enb;
    rep.c_rn = caps.c_rn;
    rep.p_enb = caps.p_enb;
    rep.p_rn = caps.p_rn;
    rep.excluded_fraction = caps.excluded_fraction;
    rep.c_cell0 = baseline_capacity(backend);
    rep.tau_used = resolve_tau(tau, caps, layout, backend);
    rep.c_cell = cell_capacity(caps.c_enb, caps.c_rn, rep.tau_used);
    return rep;
}

FluidCapacityEvaluator::FluidCapacityEvaluator(const CellGrid& grid,
                                               const PropagationParams& params,
                                               const UESampleSet& samples, LinkAdaptation la)
    : grid_(grid), params_(params), la_(la), pos_(samples.positions) {
    params_.validate();
    if (pos_.empty()) throw std::invalid_argument("FluidCapacityEvaluator: empty sample set");

    const double Rc = grid.Rc();
    const double eps = grid.eps_min();
    const double rho = grid.rho_enb();
    const double two_pi_rho = 2.0 * std::numbers::pi * rho;
    const double p_lin = params_.p_lin();
    const double nth = params_.nth_lin();
    const auto& centers = grid.centers();

    const std::size_t m = pos_.size();
    gamma0_.resize(m);
    i2_.resize(m);
    om_denom_.resize(m);
    best_enb_.resize(m);
    best_enb_cell_.resize(m);

    KahanSum base;
    std::size_t base_count = 0;
    for (std::size_t s = 0; s < m; ++s) {
        const Vec2& u = pos_[s];
        const double r0 = std::clamp(u.norm(), eps, 2.0 * Rc - eps);
        const double kern0 = std::pow(2.0 * Rc - r0, 2.0 - params_.eta);
        gamma0_[s] = (params_.eta - 2.0) * std::pow(r0, -params_.eta) / (two_pi_rho * kern0);
        i2_[s] = nth * (params_.eta - 2.0) / (two_pi_rho * p_lin * params_.k * kern0);
        om_denom_[s] =
            p_lin * params_.k * kern0 * (params_.eta_r - 2.0) / (params_.eta - 2.0);

        double best = -1.0;
        int best_cell = 0;
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double d = std::max(distance(u, centers[k]), eps);
            const double g = p_lin * path_gain(d, params_.k, params_.eta);
            if (g > best) {
                best = g;
                best_cell = static_cast<int>(k);
            }
        }
        best_enb_[s] = best;
        best_enb_cell_[s] = best_cell;

        if (best_cell == 0) {
            base.add(spectral_efficiency(gamma0_[s] / (1.0 + i2_[s]), la_,
                                         params_.bandwidth_hz));
            ++base_count;
        }
    }
    baseline_ = base_count ? base.value() / static_cast<double>(base_count) : 0.0;
}

NodeCapacities FluidCapacityEvaluator::node_caps(const RelayLayout& layout) const {
    const int n = layout.n;
    NodeCapacities out;
    out.c_rn.assign(static_cast<std::size_t>(n), 0.0);
    out.p_rn.assign(static_cast<std::size_t>(n), 0.0);

    const double Rc = grid_.Rc();
    const double eps = grid_.eps_min();
    const double rho = grid_.rho_enb();
    const double two_pi_rho = 2.0 * std::numbers::pi * rho;
    const double nth = params_.nth_lin();
    const double pr_lin = dbm_to_linear(layout.pr_dbm);
    const double prkr = pr_lin * params_.kr;
    const std::size_t m = pos_.size();

    std::vector<Vec2> offsets(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) offsets[i - 1] = layout.offset(i);

    KahanSum enb_sum;
    std::vector<KahanSum> rn_sum(static_cast<std::size_t>(n));
    std::size_t enb_count = 0, excluded = 0;
    std::vector<std::size_t> rn_count(static_cast<std::size_t>(n), 0);

    std::vector<double> kern(static_cast<std::size_t>(n));
    std::vector<double> gik(static_cast<std::size_t>(n));
    std::vector<double> omega(static_cast<std::size_t>(n));

    for (std::size_t s = 0; s < m; ++s) {
        const Vec2& u = pos_[s];

        int srv_type = 0;  // 0 = eNB
        int srv_cell = best_enb_cell_[s];
        double best = best_enb_[s];
        for (int i = 0; i < n; ++i) {
            const NearestRelay nr = nearest_lattice_node(u, offsets[i], grid_);
            const double ri = std::min(nr.dist, 2.0 * Rc - eps);
            const double rpow = std::pow(ri, -params_.eta_r);
            const double kerni = std::pow(2.0 * Rc - ri, 2.0 - params_.eta_r);
            kern[i] = kerni;
            gik[i] = rpow * (params_.eta_r - 2.0) / (two_pi_rho * kerni);
            omega[i] = prkr * kerni / om_denom_[s];
            const double g = prkr * rpow;
            if (g > best || (g == best && (nr.cell < srv_cell ||
                                           (nr.cell == srv_cell && i + 1 < srv_type)))) {
                best = g;
                srv_type = i + 1;
                srv_cell = nr.cell;
            }
        }

        if (srv_type == 0) {
            if (srv_cell != 0) {
                ++excluded;
                continue;
            }
            double i1 = 0.0;
            for (int i = 0; i < n; ++i) i1 += omega[i] * (1.0 + gik[i]);
            const double gamma = gamma0_[s] / (1.0 + i1 + i2_[s]);
            enb_sum.add(spectral_efficiency(gamma, la_, params_.bandwidth_hz));
            ++enb_count;
        } else {
            const int j = srv_type - 1;
            double cross = 0.0;
            for (int i = 0; i < n; ++i)
                if (i != j) cross += (1.0 + gik[i]) * kern[i];
            cross /= kern[j];
            const double i3 = nth * (params_.eta_r - 2.0) / (two_pi_rho * prkr * kern[j]);
            const double gamma =
                gik[j] / (1.0 + (1.0 + gamma0_[s]) / omega[j] + cross + i3);
            rn_sum[j].add(spectral_efficiency(gamma, la_, params_.bandwidth_hz));
            ++rn_count[j];
        }
    }

    const double total = static_cast<double>(m);
    out.c_enb = enb_count ? enb_sum.value() / static_cast<double>(enb_count) : 0.0;
    out.p_enb = static_cast<double>(enb_count) / total;
    for (int j = 0; j < n; ++j) {
        out.c_rn[j] = rn_count[j] ? rn_sum[j].value() / static_cast<double>(rn_count[j]) : 0.0;
        out.p_rn[j] = static_cast<double>(rn_count[j]) / total;
    }
    out.excluded_fraction = static_cast<double>(excluded) / total;
    return out;
}

}  // namespace hexrelay
