#include "coplan/maze.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace coplan {

namespace {
constexpr double kContactEps = 1e-6;  // stop distance short of a wall face
}

double CostModel::draw(std::mt19937_64& rng) const {
    if (kind == Kind::Static) return value;
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    return static_cast<double>(atoms[pick(rng)]);
}

double CostModel::max_step_cost() const {
    if (kind == Kind::Static) return value;
    return static_cast<double>(*std::max_element(atoms.begin(), atoms.end()));
}

CategoricalDist CostModel::step_dist(double delta, std::size_t n_atoms) const {
    std::vector<double> probs(n_atoms, 0.0);
    if (kind == Kind::Static) {
        const auto idx = static_cast<std::size_t>(std::llround(value / delta));
        probs[std::min(idx, n_atoms - 1)] = 1.0;
    } else {
        const double mass = 1.0 / static_cast<double>(atoms.size());
        for (int a : atoms) {
            const auto idx = static_cast<std::size_t>(std::llround(a / delta));
            probs[std::min(idx, n_atoms - 1)] += mass;
        }
    }
    return CategoricalDist(0.0, delta, std::move(probs));
}

bool MazeMap::in_wall(const Point& p) const {
    return std::any_of(walls.begin(), walls.end(), [&](const Rect& w) { return w.contains(p); });
}

double MazeMap::free_area() const {
    return bounds.area() - rect_union_area(walls, bounds);
}

double rect_union_area(const std::vector<Rect>& rects, const Rect& clip) {
    std::set<double> xs_set, ys_set;
    std::vector<Rect> clipped;
    for (const Rect& r : rects) {
        Rect c{std::max(r.x0, clip.x0), std::max(r.y0, clip.y0), std::min(r.x1, clip.x1),
               std::min(r.y1, clip.y1)};
        if (c.x1 <= c.x0 || c.y1 <= c.y0) continue;
        clipped.push_back(c);
        xs_set.insert(c.x0);
        xs_set.insert(c.x1);
        ys_set.insert(c.y0);
        ys_set.insert(c.y1);
    }
    const std::vector<double> xs(xs_set.begin(), xs_set.end());
    const std::vector<double> ys(ys_set.begin(), ys_set.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const Point mid{(xs[i] + xs[i + 1]) / 2.0, (ys[j] + ys[j + 1]) / 2.0};
            const bool covered = std::any_of(clipped.begin(), clipped.end(),
                                             [&](const Rect& r) { return r.contains(mid); });
            if (covered) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
        }
    }
    return area;
}

namespace {

CostModel cost_from_json(const nlohmann::json& j) {
    CostModel m;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "static") {
        m.kind = CostModel::Kind::Static;
        m.value = j.at("value").get<double>();
        if (!(m.value >= 0.0) || !std::isfinite(m.value)) {
            throw std::invalid_argument("static cost value must be finite and nonnegative");
        }
    } else if (kind == "uniform") {
        m.kind = CostModel::Kind::Uniform;
        m.atoms = j.at("atoms").get<std::vector<int>>();
        if (m.atoms.empty()) throw std::invalid_argument("uniform cost needs at least one atom");
        for (int a : m.atoms) {
            if (a < 0) throw std::invalid_argument("cost atoms must be nonnegative");
        }
    } else {
        throw std::invalid_argument("unknown cost kind: " + kind);
    }
    return m;
}

nlohmann::json cost_to_json(const CostModel& m) {
    if (m.kind == CostModel::Kind::Static) {
        return {{"kind", "static"}, {"value", m.value}};
    }
    return {{"kind", "uniform"}, {"atoms", m.atoms}};
}

Rect rect_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("rectangle must be [x0,y0,x1,y1]");
    return Rect(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

}  // namespace

MazeMap load_map(const nlohmann::json& doc) {
    MazeMap map;
    map.name = doc.value("name", "unnamed");
    map.bounds = rect_from_json(doc.at("bounds"));
    if (map.bounds.width() <= 0.0 || map.bounds.height() <= 0.0) {
        throw std::invalid_argument("bounds must have positive extent");
    }
    for (const auto& w : doc.value("walls", nlohmann::json::array())) {
        const Rect r = rect_from_json(w);
        if (!map.bounds.contains_rect(r)) throw std::invalid_argument("wall outside bounds");
        map.walls.push_back(r);
    }
    for (const auto& h : doc.value("hazards", nlohmann::json::array())) {
        Hazard hz;
        const auto& c = h.at("center");
        hz.center = {c[0].get<double>(), c[1].get<double>()};
        hz.radius = h.at("radius").get<double>();
        if (!(hz.radius > 0.0)) throw std::invalid_argument("hazard radius must be positive");
        const Rect disk_box{hz.center.x - hz.radius, hz.center.y - hz.radius,
                            hz.center.x + hz.radius, hz.center.y + hz.radius};
        if (!map.bounds.contains_rect(disk_box)) throw std::invalid_argument("hazard outside bounds");
        hz.cost = cost_from_json(h.at("cost"));
        map.hazards.push_back(hz);
    }
    if (doc.contains("config")) {
        const auto& cfg = doc.at("config");
        map.goal_tolerance = cfg.value("goal_tolerance", map.goal_tolerance);
        map.a_max = cfg.value("a_max", map.a_max);
        map.step_len = cfg.value("step_len", map.step_len);
    }

    // Free space must be nonempty; probe on a coarse lattice.
    const int probes = 128;
    bool any_free = false;
    for (int i = 0; i < probes && !any_free; ++i) {
        for (int j = 0; j < probes && !any_free; ++j) {
            const Point p{map.bounds.x0 + (i + 0.5) / probes * map.bounds.width(),
                          map.bounds.y0 + (j + 0.5) / probes * map.bounds.height()};
            any_free = !map.in_wall(p);
        }
    }
    if (!any_free) throw std::invalid_argument("map has no free space");
    return map;
}

MazeMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    nlohmann::json doc;
    in >> doc;
    return load_map(doc);
}

nlohmann::json map_to_json(const MazeMap& map) {
    nlohmann::json doc;
    doc["name"] = map.name;
    doc["bounds"] = {map.bounds.x0, map.bounds.y0, map.bounds.x1, map.bounds.y1};
    auto walls = nlohmann::json::array();
    for (const Rect& w : map.walls) walls.push_back({w.x0, w.y0, w.x1, w.y1});
    doc["walls"] = walls;
    auto hazards = nlohmann::json::array();
    for (const Hazard& h : map.hazards) {
        hazards.push_back({{"center", {h.center.x, h.center.y}},
                           {"radius", h.radius},
                           {"cost", cost_to_json(h.cost)}});
    }
    doc["hazards"] = hazards;
    doc["config"] = {{"goal_tolerance", map.goal_tolerance},
                     {"a_max", map.a_max},
                     {"step_len", map.step_len}};
    return doc;
}

bool segment_collides(const MazeMap& map, const Point& a, const Point& b) {
    return std::any_of(map.walls.begin(), map.walls.end(),
                       [&](const Rect& w) { return segment_intersects_rect(a, b, w); });
}

namespace {

/// Largest parameter t in [0,1] keeping a + t*(b-a) inside the closed rect,
/// assuming a is inside.
double bounds_exit_param(const Point& a, const Point& b, const Rect& r) {
    double t = 1.0;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    if (dx > 0.0) t = std::min(t, (r.x1 - a.x) / dx);
    if (dx < 0.0) t = std::min(t, (r.x0 - a.x) / dx);
    if (dy > 0.0) t = std::min(t, (r.y1 - a.y) / dy);
    if (dy < 0.0) t = std::min(t, (r.y0 - a.y) / dy);
    return std::max(t, 0.0);
}

}  // namespace

StepResult step(EpisodeState& state, const MazeMap& map, const Vec2& action) {
    const Vec2 move = action.clipped(map.a_max);
    const Point target = state.position + move;
    const double seg_len = move.norm();

    double stop_len = seg_len * bounds_exit_param(state.position, target, map.bounds);
    bool boundary_hit = stop_len < seg_len;
    for (const Rect& w : map.walls) {
        if (const auto t = segment_rect_entry(state.position, target, w)) {
            const double hit_len = *t * seg_len;
            if (hit_len < stop_len) {
                stop_len = hit_len;
                boundary_hit = true;
            }
        }
    }
    if (boundary_hit) stop_len = std::max(0.0, stop_len - kContactEps);
    if (seg_len > 0.0) state.position = state.position + move * (stop_len / seg_len);

    StepResult result;
    for (const Hazard& h : map.hazards) {
        if (h.contains(state.position)) result.cost += h.cost.draw(state.rng);
    }
    state.step_count += 1;
    result.reached_goal = distance(state.position, state.goal) <= map.goal_tolerance;
    result.done = result.reached_goal || state.step_count >= state.horizon;
    return result;
}

std::vector<int> hazard_step_count(const MazeMap& map, const Point& a, const Point& b,
                                   double step_len) {
    return hazard_step_count_polyline(map, {a, b}, step_len);
}

std::vector<int> hazard_step_count_polyline(const MazeMap& map, const std::vector<Point>& pts,
                                            double step_len) {
    std::vector<int> counts(map.hazards.size(), 0);
    if (pts.size() < 2 || !(step_len > 0.0)) return counts;

    std::vector<double> cum{0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        cum.push_back(cum.back() + distance(pts[i], pts[i + 1]));
    }
    const double total = cum.back();
    if (total <= 0.0) return counts;

    const auto point_at = [&](double s) {
        const auto it = std::upper_bound(cum.begin(), cum.end(), s);
        const std::size_t seg = std::min(pts.size() - 2, static_cast<std::size_t>(it - cum.begin()) - 1);
        const double seg_len = cum[seg + 1] - cum[seg];
        const double frac = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        return pts[seg] + (pts[seg + 1] - pts[seg]) * frac;
    };

    const auto n_steps = static_cast<long>(std::ceil(total / step_len - 1e-9));
    for (long k = 1; k <= n_steps; ++k) {
        const Point p = point_at(std::min(static_cast<double>(k) * step_len, total));
        for (std::size_t h = 0; h < map.hazards.size(); ++h) {
            if (map.hazards[h].contains(p)) counts[h] += 1;
        }
    }
    return counts;
}

}  // namespace coplan
