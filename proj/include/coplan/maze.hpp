#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "coplan/dist.hpp"
#include "coplan/geometry.hpp"

namespace coplan {

/// Per-step cost incurred inside a hazard: a fixed value or a uniform draw
/// over a nonempty list of nonnegative integer atoms.
struct CostModel {
    enum class Kind { Static, Uniform };
    Kind kind = Kind::Static;
    double value = 0.0;
    std::vector<int> atoms;

    double draw(std::mt19937_64& rng) const;
    double max_step_cost() const;
    /// Distribution of a single step's cost on the grid {0, delta, 2*delta, ...}.
    CategoricalDist step_dist(double delta, std::size_t n_atoms) const;
};

struct Hazard {
    Point center;
    double radius = 0.0;
    CostModel cost;

    bool contains(const Point& p) const { return distance(p, center) <= radius; }
};

/// Continuous 2D workspace: impenetrable axis-aligned wall rectangles inside
/// a bounding rectangle, plus penetrable hazard disks that charge a per-step
/// cost. Immutable once loaded; safe to share across threads.
struct MazeMap {
    std::string name;
    Rect bounds;
    std::vector<Rect> walls;
    std::vector<Hazard> hazards;

    // Motion configuration. Defaults keep one step ~ one length unit so the
    // standard horizons 40/60/80/100 cover goal separations up to ~69*0.9.
    double goal_tolerance = 1.0;
    double a_max = 1.0;
    double step_len = 1.0;

    bool in_bounds(const Point& p) const { return bounds.contains(p); }
    bool in_wall(const Point& p) const;
    bool in_free(const Point& p) const { return in_bounds(p) && !in_wall(p); }

    /// Lebesgue measure of bounds minus the wall union.
    double free_area() const;
};

MazeMap load_map(const nlohmann::json& doc);
MazeMap load_map_file(const std::string& path);
nlohmann::json map_to_json(const MazeMap& map);

/// True iff the segment (a, b) touches any wall rectangle (closed obstacles:
/// grazing a corner counts).
bool segment_collides(const MazeMap& map, const Point& a, const Point& b);

struct EpisodeState {
    Point position;
    Point goal;
    int step_count = 0;
    int horizon = 100;
    std::mt19937_64 rng;

    EpisodeState(Point start, Point goal_, int horizon_, std::uint64_t seed)
        : position(start), goal(goal_), horizon(horizon_), rng(seed) {}
};

struct StepResult {
    double reward = -1.0;
    double cost = 0.0;
    bool done = false;
    bool reached_goal = false;
};

/// Advances one step: the agent moves along the straight segment toward
/// position + action (clipped to a_max), stopping just short of the first
/// wall contact or the workspace boundary. Reward is -1; cost is drawn from
/// the cost model of every hazard containing the resulting position.
StepResult step(EpisodeState& state, const MazeMap& map, const Vec2& action);

/// Number of discretized steps of length step_len along the segment (a, b)
/// whose endpoint lies inside each hazard; indexed like map.hazards.
std::vector<int> hazard_step_count(const MazeMap& map, const Point& a, const Point& b, double step_len);

/// Same count over a polyline, stepping continuously in arc length across
/// vertices (no per-segment rounding).
std::vector<int> hazard_step_count_polyline(const MazeMap& map, const std::vector<Point>& pts,
                                            double step_len);

/// Exact area of the union of rectangles clipped to the clip window.
double rect_union_area(const std::vector<Rect>& rects, const Rect& clip);

}  // namespace coplan
