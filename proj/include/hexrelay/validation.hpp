#pragma once

#include <span>
#include <vector>

namespace hexrelay {

// Right-continuous empirical distribution over a sample of values (dB in
// this project). Throws std::invalid_argument when constructed empty.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> values);

    // Fraction of samples <= x.
    double query(double x) const;

    // Generalized inverse CDF: smallest sample value v with query(v) >= q,
    // q in (0, 1).
    double quantile(double q) const;

    const std::vector<double>& sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

// Two-sample Kolmogorov-Smirnov distance: sup over the pooled support of
// |F_a - F_b|.
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);

// SINR value (dB) at quantile q of the distribution.
double outage_percentile(const EmpiricalCdf& cdf, double q);

struct BinnedMean {
    double center = 0.0;
    double mean_db = 0.0;   // NaN for empty bins
    std::size_t count = 0;
};

// Arithmetic mean of dB values grouped by distance bins [edges[i],
// edges[i+1]). Edges must be strictly increasing; empty bins are flagged by
// count == 0.
std::vector<BinnedMean> mean_sinr_vs_distance(std::span<const double> dist,
                                              std::span<const double> sinr_db,
                                              std::span<const double> edges);

}  // namespace hexrelay
