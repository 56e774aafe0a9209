#include "hexrelay/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hexrelay/rng.hpp"

namespace hexrelay {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

int hex_ring(int p, int q) { return (std::abs(p) + std::abs(q) + std::abs(p + q)) / 2; }

Vec2 axial_to_pos(int p, int q, double Rc) {
    return {p * 2.0 * Rc + q * Rc, q * kSqrt3 * Rc};
}

}  // namespace

CellGrid::CellGrid(double Rc, int rings) : rc_(Rc), rings_(rings) {
    if (Rc <= 0.0) throw std::invalid_argument("CellGrid: Rc must be positive");
    if (rings < 0) throw std::invalid_argument("CellGrid: rings must be non-negative");

    struct Entry {
        int p, q, ring;
        double angle;
    };
    std::vector<Entry> entries;
    for (int p = -rings; p <= rings; ++p) {
        for (int q = -rings; q <= rings; ++q) {
            int r = hex_ring(p, q);
            if (r > rings) continue;
            Vec2 pos = axial_to_pos(p, q, Rc);
            double angle = std::atan2(pos.y, pos.x);
            if (angle < 0.0) angle += 2.0 * std::numbers::pi;
            entries.push_back({p, q, r, angle});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.ring != b.ring) return a.ring < b.ring;
        return a.angle < b.angle;
    });

    const int side = 2 * rings + 1;
    index_of_axial_.assign(static_cast<std::size_t>(side) * side, -1);
    centers_.reserve(entries.size());
    axial_.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        centers_.push_back(axial_to_pos(e.p, e.q, Rc));
        axial_.emplace_back(e.p, e.q);
        index_of_axial_[static_cast<std::size_t>(e.p + rings) * side + (e.q + rings)] =
            static_cast<int>(k);
    }
}

double CellGrid::rho_enb() const { return 1.0 / (2.0 * kSqrt3 * rc_ * rc_); }

int CellGrid::cell_index(int p, int q) const {
    if (std::abs(p) > rings_ || std::abs(q) > rings_) return -1;
    const int side = 2 * rings_ + 1;
    return index_of_axial_[static_cast<std::size_t>(p + rings_) * side + (q + rings_)];
}

bool CellGrid::in_central_cell(const Vec2& u) const {
    for (int k = 0; k < 6; ++k) {
        double a = k * std::numbers::pi / 3.0;
        if (u.x * std::cos(a) + u.y * std::sin(a) > rc_ * (1.0 + 1e-12)) return false;
    }
    return true;
}

bool CellGrid::strictly_in_central_cell(const Vec2& u) const {
    for (int k = 0; k < 6; ++k) {
        double a = k * std::numbers::pi / 3.0;
        if (u.x * std::cos(a) + u.y * std::sin(a) >= rc_ * (1.0 - 1e-12)) return false;
    }
    return true;
}

Vec2 RelayLayout::offset(int type) const {
    double theta = phi + 2.0 * std::numbers::pi * type / n;
    return {rr * std::cos(theta), rr * std::sin(theta)};
}

std::vector<RelayRef> place_relays(const CellGrid& grid, const RelayLayout& layout) {
    std::vector<RelayRef> out;
    if (layout.n <= 0) return out;
    out.reserve(grid.cell_count() * static_cast<std::size_t>(layout.n));
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
        for (int i = 1; i <= layout.n; ++i) {
            out.push_back({grid.centers()[k] + layout.offset(i), i, static_cast<int>(k)});
        }
    }
    return out;
}

NearestRelay nearest_lattice_node(const Vec2& u, const Vec2& v, const CellGrid& grid) {
    const double Rc = grid.Rc();

    double best = std::numeric_limits<double>::infinity();
    int best_cell = -1;
    auto consider = [&](int cell) {
        Vec2 rp = grid.centers()[static_cast<std::size_t>(cell)] + v;
        double d = distance(u, rp);
        if (d < best || (d == best && cell < best_cell)) {
            best = d;
            best_cell = cell;
        }
    };

    // Lattice rounding: candidate cells around the fractional axial
    // coordinates of u - v cover the nearest lattice point whenever they all
    // lie inside the grid.
    const double qf = (u.y - v.y) / (kSqrt3 * Rc);
    const double pf = ((u.x - v.x) - Rc * qf) / (2.0 * Rc);
    const int p0 = static_cast<int>(std::floor(pf + 0.5));
    const int q0 = static_cast<int>(std::floor(qf + 0.5));

    bool window_complete = true;
    for (int dp = -1; dp <= 1 && window_complete; ++dp)
        for (int dq = -1; dq <= 1; ++dq)
            if (grid.cell_index(p0 + dp, q0 + dq) < 0) {
                window_complete = false;
                break;
            }

    if (window_complete) {
        for (int dp = -1; dp <= 1; ++dp)
            for (int dq = -1; dq <= 1; ++dq) consider(grid.cell_index(p0 + dp, q0 + dq));
    } else {
        for (std::size_t k = 0; k < grid.cell_count(); ++k) consider(static_cast<int>(k));
    }

    return {best_cell, std::max(best, grid.eps_min())};
}

NearestRelay nearest_relay_of_type(const Vec2& u, int type, const RelayLayout& layout,
                                   const CellGrid& grid) {
    if (layout.n < 1 || type < 1 || type > layout.n)
        throw std::invalid_argument("nearest_relay_of_type: invalid relay type");
    return nearest_lattice_node(u, layout.offset(type), grid);
}

namespace {

UESampleSet sample_cell_grid(const CellGrid& grid, std::size_t N) {
    const double Rc = grid.Rc();
    const double area = 2.0 * kSqrt3 * Rc * Rc;
    const double ymax = 2.0 * Rc / kSqrt3;
    double h = std::sqrt(area / static_cast<double>(N));

    std::vector<Vec2> pts;
    for (;;) {
        pts.clear();
        const double x0 = -Rc + h / 2.0;
        const double y0 = -ymax + h / 2.0;
        for (std::size_t j = 0;; ++j) {
            double y = y0 + static_cast<double>(j) * h;
            if (y >= ymax) break;
            for (std::size_t i = 0;; ++i) {
                double x = x0 + static_cast<double>(i) * h;
                if (x >= Rc) break;
                Vec2 p{x, y};
                if (grid.strictly_in_central_cell(p)) pts.push_back(p);
            }
        }
        if (pts.size() >= N) break;
        h *= 0.99;
    }

    UESampleSet out;
    out.scheme = SampleScheme::Grid;
    out.seed = 0;
    out.positions.reserve(N);
    for (std::size_t j = 0; j < N; ++j)
        out.positions.push_back(pts[j * pts.size() / N]);
    return out;
}

UESampleSet sample_cell_uniform(const CellGrid& grid, std::size_t N, std::uint64_t seed) {
    const double Rc = grid.Rc();
    const double ymax = 2.0 * Rc / kSqrt3;
    Rng rng(seed);
    UESampleSet out;
    out.scheme = SampleScheme::UniformRandom;
    out.seed = seed;
    out.positions.reserve(N);
    while (out.positions.size() < N) {
        Vec2 p{rng.uniform(-Rc, Rc), rng.uniform(-ymax, ymax)};
        if (grid.strictly_in_central_cell(p)) out.positions.push_back(p);
    }
    return out;
}

}  // namespace

UESampleSet sample_cell(const CellGrid& grid, std::size_t N, SampleScheme scheme,
                        std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("sample_cell: N must be >= 1");
    return scheme == SampleScheme::Grid ? sample_cell_grid(grid, N)
                                        : sample_cell_uniform(grid, N, seed);
}

}  // namespace hexrelay
