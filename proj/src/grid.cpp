#include "coplan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace coplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

const std::array<GridModel::Move, 8>& GridModel::moves() {
    static const std::array<Move, 8> m = {{{1, 0, 1.0},
                                           {-1, 0, 1.0},
                                           {0, 1, 1.0},
                                           {0, -1, 1.0},
                                           {1, 1, kSqrt2},
                                           {1, -1, kSqrt2},
                                           {-1, 1, kSqrt2},
                                           {-1, -1, kSqrt2}}};
    return m;
}

GridModel::GridModel(const MazeMap& map, double res) : res_(res) {
    nx_ = std::max(1, static_cast<int>(std::ceil(map.bounds.width() / res - 1e-9)));
    ny_ = std::max(1, static_cast<int>(std::ceil(map.bounds.height() / res - 1e-9)));
    origin_ = {map.bounds.x0, map.bounds.y0};
    free_.assign(static_cast<std::size_t>(nx_) * ny_, 1);
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            const Rect cell{origin_.x + ix * res_, origin_.y + iy * res_,
                            origin_.x + (ix + 1) * res_, origin_.y + (iy + 1) * res_};
            for (const Rect& w : map.walls) {
                // Interior overlap: a wall exactly on the cell face does not block.
                if (w.x0 < cell.x1 - 1e-12 && w.x1 > cell.x0 + 1e-12 && w.y0 < cell.y1 - 1e-12 &&
                    w.y1 > cell.y0 + 1e-12) {
                    free_[static_cast<std::size_t>(index(ix, iy))] = 0;
                    break;
                }
            }
        }
    }
}

int GridModel::cell_at(const Point& p) const {
    const int ix = static_cast<int>(std::floor((p.x - origin_.x) / res_));
    const int iy = static_cast<int>(std::floor((p.y - origin_.y) / res_));
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return -1;
    return index(ix, iy);
}

Point GridModel::cell_center(int cell) const {
    const int ix = cell % nx_;
    const int iy = cell / nx_;
    return {origin_.x + (ix + 0.5) * res_, origin_.y + (iy + 0.5) * res_};
}

std::optional<int> GridModel::query_cell(const Point& p) const {
    const int c = cell_at(p);
    if (c < 0) return std::nullopt;
    if (cell_free(c)) return c;
    const int cx = c % nx_;
    const int cy = c / nx_;
    int best = -1;
    double best_d = kInf;
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            const int ix = cx + dx;
            const int iy = cy + dy;
            if (!free_at(ix, iy)) continue;
            const double d = distance(p, cell_center(index(ix, iy)));
            const int idx = index(ix, iy);
            if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && idx < best)) {
                best_d = d;
                best = idx;
            }
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

bool GridModel::move_valid(int cell, int move_idx) const {
    const Move& m = moves()[static_cast<std::size_t>(move_idx)];
    const int ix = cell % nx_;
    const int iy = cell / nx_;
    if (!free_at(ix + m.dx, iy + m.dy)) return false;
    if (m.dx != 0 && m.dy != 0) {
        // No corner cutting: both orthogonal neighbors must be free.
        if (!free_at(ix + m.dx, iy) || !free_at(ix, iy + m.dy)) return false;
    }
    return true;
}

int GridModel::move_target(int cell, int move_idx) const {
    const Move& m = moves()[static_cast<std::size_t>(move_idx)];
    return cell + m.dy * nx_ + m.dx;
}

DistanceField GridModel::field(int src_cell, double cap) const {
    DistanceField f;
    f.src_cell = src_cell;
    f.cap = cap;
    f.nx = nx_;
    if (src_cell < 0 || !cell_free(src_cell)) {
        f.bx0 = f.by0 = 0;
        f.bw = f.bh = 0;
        return f;
    }
    const int cx = src_cell % nx_;
    const int cy = src_cell / nx_;
    if (cap == kInf || cap >= (nx_ + ny_) * res_ * kSqrt2) {
        f.bx0 = 0;
        f.by0 = 0;
        f.bw = nx_;
        f.bh = ny_;
    } else {
        const int r = static_cast<int>(std::ceil(cap / res_)) + 1;
        f.bx0 = std::max(0, cx - r);
        f.by0 = std::max(0, cy - r);
        f.bw = std::min(nx_, cx + r + 1) - f.bx0;
        f.bh = std::min(ny_, cy + r + 1) - f.by0;
    }
    f.d.assign(static_cast<std::size_t>(f.bw) * f.bh, kInf);

    const auto widx = [&](int cell) -> std::size_t {
        const int ix = cell % nx_;
        const int iy = cell / nx_;
        return static_cast<std::size_t>(iy - f.by0) * f.bw + (ix - f.bx0);
    };
    const auto in_window = [&](int cell) {
        const int ix = cell % nx_;
        const int iy = cell / nx_;
        return ix >= f.bx0 && ix < f.bx0 + f.bw && iy >= f.by0 && iy < f.by0 + f.bh;
    };

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    f.d[widx(src_cell)] = 0.0;
    pq.push({0.0, src_cell});
    while (!pq.empty()) {
        const auto [dv, cell] = pq.top();
        pq.pop();
        if (dv > f.d[widx(cell)]) continue;
        for (int mi = 0; mi < 8; ++mi) {
            if (!move_valid(cell, mi)) continue;
            const int nb = move_target(cell, mi);
            if (!in_window(nb)) continue;
            const double nd = dv + moves()[static_cast<std::size_t>(mi)].len * res_;
            if (nd > cap) continue;
            if (nd < f.d[widx(nb)] - 1e-15) {
                f.d[widx(nb)] = nd;
                pq.push({nd, nb});
            }
        }
    }
    return f;
}

std::vector<int> GridModel::descend(const DistanceField& f, int from_cell) const {
    std::vector<int> path;
    if (!f.at(from_cell)) return path;
    int cur = from_cell;
    path.push_back(cur);
    while (cur != f.src_cell) {
        const double dc = *f.at(cur);
        // Prefer true shortest-path predecessors (d[nb] + move == d[cur]);
        // fall back to steepest descent if rounding leaves none.
        int best = -1;
        double best_d = dc;
        bool best_exact = false;
        for (int mi = 0; mi < 8; ++mi) {
            if (!move_valid(cur, mi)) continue;
            const int nb = move_target(cur, mi);
            const auto dn = f.at(nb);
            if (!dn || *dn >= dc - 1e-12) continue;
            const bool exact = std::abs(*dn + moves()[static_cast<std::size_t>(mi)].len * res_ - dc) <= 1e-9;
            const bool better = (exact && !best_exact) ||
                                (exact == best_exact &&
                                 (*dn < best_d - 1e-12 ||
                                  (std::abs(*dn - best_d) <= 1e-12 && (best < 0 || nb < best))));
            if (better) {
                best_d = *dn;
                best = nb;
                best_exact = exact;
            }
        }
        if (best < 0) return {};  // inconsistent field; should not happen
        cur = best;
        path.push_back(cur);
    }
    return path;
}

}  // namespace coplan
