#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "coplan/geometry.hpp"
#include "coplan/maze.hpp"

namespace coplan {

/// Shortest-path distances from one source cell, restricted to a square
/// window of the grid. Cells never reached within the cap hold +infinity.
struct DistanceField {
    int src_cell = -1;
    double cap = 0.0;
    int nx = 0;        // parent grid width, for cell-index decomposition
    int bx0 = 0, by0 = 0, bw = 0, bh = 0;
    std::vector<double> d;

    std::optional<double> at(int cell) const {
        if (cell < 0) return std::nullopt;
        const int ix = cell % nx;
        const int iy = cell / nx;
        if (ix < bx0 || ix >= bx0 + bw || iy < by0 || iy >= by0 + bh) return std::nullopt;
        const double v = d[static_cast<std::size_t>(iy - by0) * bw + (ix - bx0)];
        if (v == std::numeric_limits<double>::infinity()) return std::nullopt;
        return v;
    }
};

/// Occupancy grid over a maze at a fixed resolution with 8-connected moves
/// (diagonal length sqrt(2), no corner cutting). A cell is blocked when any
/// wall overlaps its interior.
class GridModel {
public:
    struct Move {
        int dx, dy;
        double len;  // in cell units: 1 or sqrt(2)
    };
    static const std::array<Move, 8>& moves();

    GridModel(const MazeMap& map, double res);

    double res() const { return res_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int cell_count() const { return nx_ * ny_; }

    bool cell_free(int cell) const { return cell >= 0 && free_[static_cast<std::size_t>(cell)]; }
    int cell_at(const Point& p) const;
    Point cell_center(int cell) const;

    /// Cell for answering point queries: the containing cell if free, else the
    /// nearest free cell within a 2-cell ring (points hugging a wall fall into
    /// blocked cells).
    std::optional<int> query_cell(const Point& p) const;

    bool move_valid(int cell, int move_idx) const;
    int move_target(int cell, int move_idx) const;

    /// Dijkstra from src_cell, expanding until distance exceeds cap.
    DistanceField field(int src_cell, double cap) const;

    /// Cell path from from_cell to f.src_cell descending the field; empty when
    /// from_cell is not reached by the field.
    std::vector<int> descend(const DistanceField& f, int from_cell) const;

private:
    int index(int ix, int iy) const { return iy * nx_ + ix; }
    bool free_at(int ix, int iy) const {
        return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_ && free_[static_cast<std::size_t>(index(ix, iy))];
    }

    double res_;
    int nx_, ny_;
    Point origin_;
    std::vector<char> free_;
};

}  // namespace coplan
