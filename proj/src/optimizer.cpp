#include "hexrelay/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hexrelay {

SearchSpace SearchSpace::paper_default() {
    SearchSpace s;
    for (int n = 0; n <= 6; ++n) s.n_values.push_back(n);
    for (int i = 0; i <= 10; ++i) s.rr_over_rc.push_back(0.1 * i);
    for (int i = 0; i <= 10; ++i) s.phi_rad.push_back(i * std::numbers::pi / 20.0);
    for (int p = 18; p <= 31; ++p) s.pr_dbm.push_back(static_cast<double>(p));
    return s;
}

void SearchSpace::validate() const {
    if (n_values.empty() || rr_over_rc.empty() || phi_rad.empty() || pr_dbm.empty())
        throw std::invalid_argument("SearchSpace: empty coordinate grid");
    for (int n : n_values)
        if (n < 0) throw std::invalid_argument("SearchSpace: n must be non-negative");
}

std::size_t SearchSpace::size() const {
    const std::size_t per_n = rr_over_rc.size() * phi_rad.size() * pr_dbm.size();
    std::size_t total = 0;
    for (int n : n_values) total += n == 0 ? 1 : per_n;
    return total;
}

RelayLayout to_layout(const SearchSpace& space, const RelayState& s, double Rc) {
    RelayLayout l;
    l.n = space.n_values[static_cast<std::size_t>(s.in)];
    l.rr = space.rr_over_rc[static_cast<std::size_t>(s.ir)] * Rc;
    l.phi = space.phi_rad[static_cast<std::size_t>(s.iphi)];
    l.pr_dbm = space.pr_dbm[static_cast<std::size_t>(s.ip)];
    return l;
}

std::size_t observable_index(const SearchSpace& space, const RelayState& s) {
    const std::size_t nr = space.rr_over_rc.size();
    const std::size_t nphi = space.phi_rad.size();
    const std::size_t np = space.pr_dbm.size();
    std::size_t base = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(s.in); ++i)
        base += space.n_values[i] == 0 ? 1 : nr * nphi * np;
    if (space.n_values[static_cast<std::size_t>(s.in)] == 0) return base;
    return base + (static_cast<std::size_t>(s.ir) * nphi + static_cast<std::size_t>(s.iphi)) * np +
           static_cast<std::size_t>(s.ip);
}

std::vector<RelayState> enumerate_states(const SearchSpace& space) {
    std::vector<RelayState> out;
    out.reserve(space.size());
    for (int in = 0; in < static_cast<int>(space.n_values.size()); ++in) {
        if (space.n_values[static_cast<std::size_t>(in)] == 0) {
            out.push_back({in, 0, 0, 0});
            continue;
        }
        for (int ir = 0; ir < static_cast<int>(space.rr_over_rc.size()); ++ir)
            for (int iphi = 0; iphi < static_cast<int>(space.phi_rad.size()); ++iphi)
                for (int ip = 0; ip < static_cast<int>(space.pr_dbm.size()); ++ip)
                    out.push_back({in, ir, iphi, ip});
    }
    return out;
}

MemoizedEnergy::MemoizedEnergy(const SearchSpace& space, EnergyFn fn)
    : space_(&space), fn_(std::move(fn)) {
    cache_.assign(space.size(), std::numeric_limits<double>::quiet_NaN());
}

double MemoizedEnergy::operator()(const RelayState& s) {
    const std::size_t idx = observable_index(*space_, s);
    if (std::isnan(cache_[idx])) {
        cache_[idx] = fn_(s);
        ++evals_;
    }
    return cache_[idx];
}

void AnnealingSchedule::validate() const {
    if (!(t0 > 0.0)) throw std::invalid_argument("AnnealingSchedule: T0 must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("AnnealingSchedule: alpha must lie in (0, 1)");
    if (iterations < 1)
        throw std::invalid_argument("AnnealingSchedule: iterations must be >= 1");
}

RelayState propose(const SearchSpace& space, const RelayState& s, Rng& rng) {
    const int coord = static_cast<int>(rng.uniform_int(4));
    const int step = rng.bernoulli(0.5) ? 1 : -1;
    RelayState c = s;
    int* v = nullptr;
    int limit = 0;
    switch (coord) {
        case 0: v = &c.in; limit = static_cast<int>(space.n_values.size()); break;
        case 1: v = &c.ir; limit = static_cast<int>(space.rr_over_rc.size()); break;
        case 2: v = &c.iphi; limit = static_cast<int>(space.phi_rad.size()); break;
        default: v = &c.ip; limit = static_cast<int>(space.pr_dbm.size()); break;
    }
    *v += step;
    if (*v < 0 || *v >= limit) return s;
    return c;
}

bool metropolis_accept(double du, double t, Rng& rng) {
    if (du <= 0.0) return true;
    return rng.uniform01() < std::exp(-du / t);
}

SaResult sa_search(const SearchSpace& space, const AnnealingSchedule& schedule,
                   const EnergyFn& energy, std::optional<RelayState> x0) {
    space.validate();
    schedule.validate();
    Rng rng(schedule.seed);

    RelayState x = x0 ? *x0
                      : RelayState{static_cast<int>(rng.uniform_int(
                                       static_cast<std::uint32_t>(space.n_values.size()))),
                                   static_cast<int>(rng.uniform_int(
                                       static_cast<std::uint32_t>(space.rr_over_rc.size()))),
                                   static_cast<int>(rng.uniform_int(
                                       static_cast<std::uint32_t>(space.phi_rad.size()))),
                                   static_cast<int>(rng.uniform_int(
                                       static_cast<std::uint32_t>(space.pr_dbm.size())))};
    double u = energy(x);

    SaResult out;
    out.best = x;
    out.best_energy = u;
    out.trace.reserve(static_cast<std::size_t>(schedule.iterations));

    for (int m = 1; m <= schedule.iterations; ++m) {
        const double t = schedule.t0 * std::pow(schedule.alpha, m);
        const RelayState cand = propose(space, x, rng);
        const double uc = energy(cand);
        if (metropolis_accept(uc - u, t, rng)) {
            x = cand;
            u = uc;
        }
        if (u < out.best_energy) {
            out.best_energy = u;
            out.best = x;
        }
        out.trace.push_back({m, t, u, out.best_energy});
    }
    return out;
}

ExhaustiveResult exhaustive_search(const SearchSpace& space, const EnergyFn& energy) {
    space.validate();
    ExhaustiveResult out;
    out.best_energy = std::numeric_limits<double>::infinity();
    for (const RelayState& s : enumerate_states(space)) {
        const double u = energy(s);
        if (u < out.best_energy) {
            out.best_energy = u;
            out.best_states.clear();
            out.best_states.push_back(s);
        } else if (u == out.best_energy) {
            out.best_states.push_back(s);
        }
    }
    return out;
}

}  // namespace hexrelay
