#pragma once

#include <span>
#include <vector>

#include "hexrelay/geometry.hpp"
#include "hexrelay/propagation.hpp"

namespace hexrelay {

// Continuum approximation of the total interference received at distance r
// from the serving node of a lattice with half inter-site distance Rc:
// 2*pi*rho*P*K*(2Rc-r)^(2-eta)/(eta-2). Throws std::domain_error when
// eta <= 2 (divergent) or r >= 2Rc (outside the kernel's domain).
double fluid_interference(double r, double rho, double p_lin, double k, double eta, double Rc);

// Distances feeding the closed forms: r to the serving eNB and, per type i,
// the distance to the nearest type-i relay. All clamped to
// [eps_min, 2Rc - eps_min].
struct FluidInputs {
    double r = 0.0;
    std::vector<double> r_i;
};

FluidInputs make_fluid_inputs(const Vec2& u, const RelayLayout& layout, const CellGrid& grid);

// Closed-form SINR terms for the heterogeneous lattice. Each relay
// sub-lattice shares the eNB lattice density, so every term depends only on
// the serving-node distances.
class FluidModel {
public:
    FluidModel(const PropagationParams& params, const CellGrid& grid, double pr_dbm);

    double clamp(double r) const;

    double gamma0(double r) const;
    double gamma_ik(double ri) const;
    double omega_i(double r, double ri) const;
    double i2(double r) const;
    double omega_ij(double ri, double rj) const;
    double i3(double rj) const;

    double sinr_enb(const FluidInputs& in) const;
    // j is the serving relay type, 1-based.
    double sinr_relay(const FluidInputs& in, int j) const;
    double sinr_backhaul(double rr) const;

    double rho() const { return rho_; }

private:
    PropagationParams params_;
    double rc_;
    double eps_;
    double rho_;
    double pr_lin_;
};

}  // namespace hexrelay
