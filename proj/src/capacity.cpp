#include "hexrelay/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace hexrelay {

double spectral_efficiency(double gamma, const LinkAdaptation& la, double bandwidth_hz) {
    const double low = dbm_to_linear(la.low_db);   // dB and dBm share the 10^(x/10) map
    const double high = dbm_to_linear(la.high_db);
    if (gamma < low) return 0.0;
    if (gamma > high) return la.cap * bandwidth_hz;
    return la.slope * bandwidth_hz * std::log2(1.0 + gamma);
}

double NodeCapacities::c_rn_sum() const {
    KahanSum s;
    for (double c : c_rn) s.add(c);
    return s.value();
}

NodeCapacities node_capacities(std::span<const SinrSample> samples, int n,
                               const LinkAdaptation& la, double bandwidth_hz) {
    NodeCapacities out;
    out.c_rn.assign(static_cast<std::size_t>(n), 0.0);
    out.p_rn.assign(static_cast<std::size_t>(n), 0.0);
    if (samples.empty()) return out;

    KahanSum enb_sum;
    std::vector<KahanSum> rn_sum(static_cast<std::size_t>(n));
    std::size_t enb_count = 0, excluded = 0;
    std::vector<std::size_t> rn_count(static_cast<std::size_t>(n), 0);

    for (const auto& s : samples) {
        if (s.excluded()) {
            ++excluded;
            continue;
        }
        const double c = spectral_efficiency(s.gamma, la, bandwidth_hz);
        if (s.server.kind == NodeRef::Kind::ENB) {
            enb_sum.add(c);
            ++enb_count;
        } else {
            const auto j = static_cast<std::size_t>(s.server.type - 1);
            rn_sum[j].add(c);
            ++rn_count[j];
        }
    }

    const double total = static_cast<double>(samples.size());
    out.c_enb = enb_count ? enb_sum.value() / static_cast<double>(enb_count) : 0.0;
    out.p_enb = static_cast<double>(enb_count) / total;
    for (std::size_t j = 0; j < rn_sum.size(); ++j) {
        out.c_rn[j] = rn_count[j] ? rn_sum[j].value() / static_cast<double>(rn_count[j]) : 0.0;
        out.p_rn[j] = static_cast<double>(rn_count[j]) / total;
    }
    out.excluded_fraction = static_cast<double>(excluded) / total;
    return out;
}

double cell_capacity(double c_enb, std::span<const double> c_rn, double tau) {
    KahanSum s;
    s.add(c_enb);
    for (double c : c_rn) s.add(c);
    return (1.0 - tau) * s.value();
}

double tau_star(double c_cell0, double c_enb, std::span<const double> c_rn) {
    KahanSum s;
    s.add(c_enb);
    for (double c : c_rn) s.add(c);
    if (s.value() <= 0.0) throw std::domain_error("tau_star: zero total capacity");
    return 1.0 - c_cell0 / s.value();
}

double tau_backhaul(std::span<const double> c_rn, double c_b) {
    if (!(c_b > 0.0)) throw std::domain_error("tau_backhaul: backhaul capacity must be positive");
    KahanSum s;
    for (double c : c_rn) s.add(c);
    const double ratio = s.value() / c_b;
    return ratio / (1.0 + ratio);
}

double per_ue_throughput(double c_x, double tau, int n_attached) {
    if (n_attached < 1) throw std::invalid_argument("per_ue_throughput: N must be >= 1");
    return c_x * (1.0 - tau) / static_cast<double>(n_attached);
}

}  // namespace hexrelay
