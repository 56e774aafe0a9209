#include "hexrelay/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hexrelay {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::query(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must lie in (0, 1)");
    const double target = q * static_cast<double>(sorted_.size());
    auto idx = static_cast<std::size_t>(std::ceil(target));
    if (idx < 1) idx = 1;
    if (idx > sorted_.size()) idx = sorted_.size();
    return sorted_[idx - 1];
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    const auto& va = a.sorted();
    const auto& vb = b.sorted();
    double sup = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < va.size() || ib < vb.size()) {
        double x;
        if (ib == vb.size() || (ia < va.size() && va[ia] <= vb[ib]))
            x = va[ia];
        else
            x = vb[ib];
        while (ia < va.size() && va[ia] <= x) ++ia;
        while (ib < vb.size() && vb[ib] <= x) ++ib;
        const double fa = static_cast<double>(ia) / static_cast<double>(va.size());
        const double fb = static_cast<double>(ib) / static_cast<double>(vb.size());
        sup = std::max(sup, std::abs(fa - fb));
    }
    return sup;
}

double outage_percentile(const EmpiricalCdf& cdf, double q) { return cdf.quantile(q); }

std::vector<BinnedMean> mean_sinr_vs_distance(std::span<const double> dist,
                                              std::span<const double> sinr_db,
                                              std::span<const double> edges) {
    if (dist.size() != sinr_db.size())
        throw std::invalid_argument("mean_sinr_vs_distance: size mismatch");
    if (edges.size() < 2)
        throw std::invalid_argument("mean_sinr_vs_distance: need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw std::invalid_argument("mean_sinr_vs_distance: edges must be increasing");

    std::vector<BinnedMean> out(edges.size() - 1);
    std::vector<double> sum(out.size(), 0.0);
    for (std::size_t b = 0; b < out.size(); ++b)
        out[b].center = 0.5 * (edges[b] + edges[b + 1]);

    for (std::size_t s = 0; s < dist.size(); ++s) {
        const double d = dist[s];
        if (d < edges.front() || d >= edges.back()) continue;
        const auto it = std::upper_bound(edges.begin(), edges.end(), d);
        const auto b = static_cast<std::size_t>(it - edges.begin()) - 1;
        sum[b] += sinr_db[s];
        ++out[b].count;
    }
    for (std::size_t b = 0; b < out.size(); ++b)
        out[b].mean_db = out[b].count ? sum[b] / static_cast<double>(out[b].count)
                                      : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace hexrelay
