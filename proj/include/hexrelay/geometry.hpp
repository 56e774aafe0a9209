#pragma once

#include <cstdint>
#include <vector>

#include "hexrelay/vec2.hpp"

namespace hexrelay {

// Hexagonal base-station lattice. Cell 0 sits at the origin; neighbouring
// centres are exactly 2*Rc apart. Cells are ordered ring by ring, and by
// azimuth inside a ring, so indices are stable across runs.
class CellGrid {
public:
    CellGrid(double Rc, int rings);

    double Rc() const { return rc_; }
    int rings() const { return rings_; }
    const std::vector<Vec2>& centers() const { return centers_; }
    std::size_t cell_count() const { return centers_.size(); }

    // Lattice density 1/(2*sqrt(3)*Rc^2).
    double rho_enb() const;

    // Minimum UE-to-node distance used to clamp path-gain singularities.
    double eps_min() const { return 1e-3 * rc_; }

    // Axial coordinates of cell k in the basis a1=(2Rc,0), a2=(Rc,sqrt3*Rc).
    std::pair<int, int> axial(std::size_t k) const { return axial_[k]; }

    // Cell index for axial coordinates, or -1 when outside the grid.
    int cell_index(int p, int q) const;

    // True when u lies in the closed central hexagon (cell 0 is a nearest
    // centre; boundary ties included).
    bool in_central_cell(const Vec2& u) const;

    // True when u lies strictly inside the central hexagon.
    bool strictly_in_central_cell(const Vec2& u) const;

private:
    double rc_;
    int rings_;
    std::vector<Vec2> centers_;
    std::vector<std::pair<int, int>> axial_;
    std::vector<int> index_of_axial_;  // dense (2r+1)^2 lookup
};

inline CellGrid build_grid(double Rc, int rings) { return CellGrid(Rc, rings); }

// Per-cell relay pattern: n relays at radius rr from each cell centre, at
// angles phi + 2*pi*i/n (i = 1..n). Identical in every cell.
struct RelayLayout {
    int n = 0;            // relays per cell, 0..6
    double rr = 0.0;      // eNB-relay distance, same unit as Rc
    double phi = 0.0;     // offset angle, rad
    double pr_dbm = 31.0; // relay transmit power

    // Offset of relay type i (1..n) relative to its cell centre.
    Vec2 offset(int type) const;
};

struct RelayRef {
    Vec2 pos;
    int type;  // 1..n
    int cell;  // grid cell index
};

// All relay positions of the grid, ordered by cell then type.
std::vector<RelayRef> place_relays(const CellGrid& grid, const RelayLayout& layout);

struct NearestRelay {
    int cell;     // k*(i)
    double dist;  // clamped below by grid.eps_min()
};

// Nearest node of the cell lattice translated by `offset`. Equidistant
// candidates resolve to the lowest cell index. Uses lattice rounding with a
// brute-force fallback near the grid boundary.
NearestRelay nearest_lattice_node(const Vec2& u, const Vec2& offset, const CellGrid& grid);

// Nearest type-i relay over the whole grid.
NearestRelay nearest_relay_of_type(const Vec2& u, int type, const RelayLayout& layout,
                                   const CellGrid& grid);

enum class SampleScheme { Grid, UniformRandom };

struct UESampleSet {
    std::vector<Vec2> positions;
    SampleScheme scheme = SampleScheme::Grid;
    std::uint64_t seed = 0;
};

// N points strictly inside the central hexagon. The grid scheme lays a
// uniform rectangular lattice over the cell and stride-subsamples to exactly
// N points; the uniform scheme rejection-samples with the given seed. Both
// are deterministic for fixed arguments.
UESampleSet sample_cell(const CellGrid& grid, std::size_t N, SampleScheme scheme,
                        std::uint64_t seed);

}  // namespace hexrelay
