#include "hexrelay/sinr_fluid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hexrelay {

double fluid_interference(double r, double rho, double p_lin, double k, double eta, double Rc) {
    if (!(eta > 2.0)) throw std::domain_error("fluid_interference: eta must exceed 2");
    if (!(r < 2.0 * Rc)) throw std::domain_error("fluid_interference: requires r < 2*Rc");
    return 2.0 * std::numbers::pi * rho * p_lin * k * std::pow(2.0 * Rc - r, 2.0 - eta) /
           (eta - 2.0);
}

FluidInputs make_fluid_inputs(const Vec2& u, const RelayLayout& layout, const CellGrid& grid) {
    FluidInputs in;
    const double lo = grid.eps_min();
    const double hi = 2.0 * grid.Rc() - grid.eps_min();
    in.r = std::clamp(u.norm(), lo, hi);
    in.r_i.reserve(static_cast<std::size_t>(layout.n));
    for (int i = 1; i <= layout.n; ++i)
        in.r_i.push_back(std::clamp(nearest_relay_of_type(u, i, layout, grid).dist, lo, hi));
    return in;
}

FluidModel::FluidModel(const PropagationParams& params, const CellGrid& grid, double pr_dbm)
    : params_(params),
      rc_(grid.Rc()),
      eps_(grid.eps_min()),
      rho_(grid.rho_enb()),
      pr_lin_(dbm_to_linear(pr_dbm)) {
    params_.validate();
}

double FluidModel::clamp(double r) const { return std::clamp(r, eps_, 2.0 * rc_ - eps_); }

double FluidModel::gamma0(double r) const {
    return (params_.eta - 2.0) * std::pow(r, -params_.eta) /
           (2.0 * std::numbers::pi * rho_ * std::pow(2.0 * rc_ - r, 2.0 - params_.eta));
}

double FluidModel::gamma_ik(double ri) const {
    return std::pow(ri, -params_.eta_r) * (params_.eta_r - 2.0) /
           (2.0 * std::numbers::pi * rho_ * std::pow(2.0 * rc_ - ri, 2.0 - params_.eta_r));
}

double FluidModel::omega_i(double r, double ri) const {
    return pr_lin_ * params_.kr * std::pow(2.0 * rc_ - ri, 2.0 - params_.eta_r) *
           (params_.eta - 2.0) /
           (params_.p_lin() * params_.k * std::pow(2.0 * rc_ - r, 2.0 - params_.eta) *
            (params_.eta_r - 2.0));
}

double FluidModel::i2(double r) const {
    return params_.nth_lin() /
           fluid_interference(r, rho_, params_.p_lin(), params_.k, params_.eta, rc_);
}

double FluidModel::omega_ij(double ri, double rj) const {
    return std::pow(2.0 * rc_ - ri, 2.0 - params_.eta_r) /
           std::pow(2.0 * rc_ - rj, 2.0 - params_.eta_r);
}

double FluidModel::i3(double rj) const {
    return params_.nth_lin() /
           fluid_interference(rj, rho_, pr_lin_, params_.kr, params_.eta_r, rc_);
}

double FluidModel::sinr_enb(const FluidInputs& in) const {
    double i1 = 0.0;
    for (double ri : in.r_i) i1 += omega_i(in.r, ri) * (1.0 + gamma_ik(ri));
    return gamma0(in.r) / (1.0 + i1 + i2(in.r));
}

double FluidModel::sinr_relay(const FluidInputs& in, int j) const {
    if (j < 1 || j > static_cast<int>(in.r_i.size()))
        throw std::invalid_argument("sinr_relay: invalid relay type");
    const double rj = in.r_i[static_cast<std::size_t>(j - 1)];
    double cross = 0.0;
    for (std::size_t i = 0; i < in.r_i.size(); ++i) {
        if (static_cast<int>(i) == j - 1) continue;
        cross += (1.0 + gamma_ik(in.r_i[i])) * omega_ij(in.r_i[i], rj);
    }
    const double denom = 1.0 + (1.0 + gamma0(in.r)) / omega_i(in.r, rj) + cross + i3(rj);
    return gamma_ik(rj) / denom;
}

double FluidModel::sinr_backhaul(double rr) const {
    const double r = clamp(rr);
    const double signal = params_.p_lin() * path_gain(r, params_.kb, params_.eta_b);
    const double interference =
        fluid_interference(r, rho_, params_.p_lin(), params_.kb, params_.eta_b, rc_);
    return signal / (interference + params_.nth_lin());
}

}  // namespace hexrelay
