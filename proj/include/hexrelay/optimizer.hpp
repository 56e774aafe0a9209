#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hexrelay/geometry.hpp"
#include "hexrelay/rng.hpp"

namespace hexrelay {

// Discretised configuration space over (n, R_R, phi, P_R). All n = 0 index
// combinations denote the single no-relay baseline state.
struct SearchSpace {
    std::vector<int> n_values;         // e.g. {0,...,6}
    std::vector<double> rr_over_rc;    // e.g. {0.0, 0.1, ..., 1.0}
    std::vector<double> phi_rad;       // e.g. {0, pi/20, ..., pi/2}
    std::vector<double> pr_dbm;        // e.g. {18, 19, ..., 31}

    static SearchSpace paper_default();

    // Number of distinct configurations (n = 0 collapsed to one state).
    std::size_t size() const;

    void validate() const;
};

// Indices into the SearchSpace value lists. States with n_values[in] == 0
// compare equal regardless of the remaining indices; those act as latent
// coordinates that are retained while n sits at zero.
struct RelayState {
    int in = 0;
    int ir = 0;
    int iphi = 0;
    int ip = 0;

    bool operator==(const RelayState&) const = default;
};

RelayLayout to_layout(const SearchSpace& space, const RelayState& s, double Rc);

// Index of the collapsed (observable) configuration, in [0, space.size()).
std::size_t observable_index(const SearchSpace& space, const RelayState& s);

// All observable states in canonical order (baseline first when present).
std::vector<RelayState> enumerate_states(const SearchSpace& space);

using EnergyFn = std::function<double(const RelayState&)>;

// Cache keyed by observable index; the space is small enough to memoise
// exhaustively.
class MemoizedEnergy {
public:
    MemoizedEnergy(const SearchSpace& space, EnergyFn fn);
    double operator()(const RelayState& s);
    std::size_t evaluations() const { return evals_; }

private:
    const SearchSpace* space_;
    EnergyFn fn_;
    std::vector<double> cache_;
    std::size_t evals_ = 0;
};

struct AnnealingSchedule {
    double t0 = 35.0;
    double alpha = 0.995;
    int iterations = 2000;
    std::uint64_t seed = 0;

    void validate() const;
};

// Symmetric single-coordinate move: pick one of the four coordinates
// uniformly and step it by +-1; a step that would leave the grid proposes
// the current state instead.
RelayState propose(const SearchSpace& space, const RelayState& s, Rng& rng);

// Metropolis rule at temperature t: accept when du <= 0, otherwise with
// probability exp(-du/t).
bool metropolis_accept(double du, double t, Rng& rng);

struct TracePoint {
    int iter;
    double temperature;
    double energy;
    double best_energy;
};

struct SaResult {
    RelayState best;
    double best_energy;
    std::vector<TracePoint> trace;  // exactly `iterations` entries
};

SaResult sa_search(const SearchSpace& space, const AnnealingSchedule& schedule,
                   const EnergyFn& energy, std::optional<RelayState> x0 = std::nullopt);

struct ExhaustiveResult {
    std::vector<RelayState> best_states;  // all ties, canonical order
    double best_energy;
};

ExhaustiveResult exhaustive_search(const SearchSpace& space, const EnergyFn& energy);

}  // namespace hexrelay
