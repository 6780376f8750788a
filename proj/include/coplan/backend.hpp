#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coplan/dist.hpp"
#include "coplan/errors.hpp"
#include "coplan/geometry.hpp"
#include "coplan/grid.hpp"
#include "coplan/maze.hpp"

namespace coplan {

namespace detail {

/// Thread-safe LRU keyed by cell index. Builders must be deterministic: a
/// racing rebuild produces an identical entry.
template <typename V>
class LruCache {
public:
    explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

    std::shared_ptr<const V> get(int key) const {
        std::lock_guard lock(mu_);
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        order_.splice(order_.begin(), order_, it->second.second);
        return it->second.first;
    }

    void put(int key, std::shared_ptr<const V> value) const {
        std::lock_guard lock(mu_);
        if (entries_.count(key)) return;  // first build wins
        order_.push_front(key);
        entries_.emplace(key, std::make_pair(std::move(value), order_.begin()));
        while (entries_.size() > capacity_) {
            entries_.erase(order_.back());
            order_.pop_back();
        }
    }

    void grow_capacity(std::size_t capacity) const {
        std::lock_guard lock(mu_);
        capacity_ = std::max(capacity_, capacity);
    }

    std::vector<int> keys_sorted() const {
        std::lock_guard lock(mu_);
        std::vector<int> out;
        out.reserve(entries_.size());
        for (const auto& [k, v] : entries_) out.push_back(k);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    mutable std::mutex mu_;
    mutable std::size_t capacity_;
    mutable std::list<int> order_;
    mutable std::unordered_map<int, std::pair<std::shared_ptr<const V>, std::list<int>::iterator>> entries_;
};

}  // namespace detail

/// Goal-conditioned local estimator: expected reward value V(s, s'), the
/// categorical distribution of cumulative cost V_c(s, s'), and a greedy local
/// policy. Estimates are trusted only for pairs within the locality radius
/// eta; queries beyond it raise LocalityError. Immutable after construction;
/// concurrent reads are safe.
class ValueBackend {
public:
    virtual ~ValueBackend() = default;

    virtual std::string kind() const = 0;
    const MazeMap& map() const { return map_; }
    double eta() const { return eta_; }
    virtual double grid_res() const = 0;
    double cost_delta() const { return cost_delta_; }
    std::size_t cost_atoms() const { return cost_atoms_; }

    /// -V estimate for the pair, keyed internally by the first argument (batch
    /// queries sharing a first argument are cheap). Returns nullopt when the
    /// pair cannot be resolved within the locality window.
    virtual std::optional<double> distance(const Point& a, const Point& b) const = 0;

    /// Expected reward V(s, g) <= 0; -value is the shortest-path estimate.
    /// Throws LocalityError beyond eta, UnreachableError when no route exists.
    double value(const Point& s, const Point& g) const;

    /// Distribution of cumulative cost along the backend's greedy route s -> g.
    virtual CategoricalDist cost_dist(const Point& s, const Point& g) const = 0;

    /// Greedy action (length <= a_max) from s toward g; zero once within
    /// goal_tolerance.
    virtual Vec2 local_policy(const Point& s, const Point& g) const = 0;

    virtual void save(const std::string& path) const = 0;

protected:
    ValueBackend(MazeMap map, double eta, double cost_delta, std::size_t cost_atoms)
        : map_(std::move(map)), eta_(eta), cost_delta_(cost_delta), cost_atoms_(cost_atoms) {}

    /// Raised by value() when distance() returned nullopt.
    [[noreturn]] virtual void throw_unresolvable(const Point& a, const Point& b) const;

    MazeMap map_;
    double eta_;
    double cost_delta_;
    std::size_t cost_atoms_;
};

struct OracleConfig {
    double grid_res = 0.5;
    double eta = 15.0;
    double cost_delta = 1.0;
    std::size_t cost_atoms = 129;
    std::size_t field_cache = 1024;
};

/// Exact grid shortest-path backend: V from Dijkstra on an occupancy grid
/// (diagonal moves length sqrt(2)), V_c by convolving per-step cost
/// distributions along the greedy shortest path.
class OracleBackend final : public ValueBackend {
public:
    OracleBackend(MazeMap map, OracleConfig cfg = {});

    std::string kind() const override { return "oracle"; }
    double grid_res() const override { return grid_.res(); }
    const GridModel& grid() const { return grid_; }
    const OracleConfig& config() const { return cfg_; }

    std::optional<double> distance(const Point& a, const Point& b) const override;
    CategoricalDist cost_dist(const Point& s, const Point& g) const override;
    Vec2 local_policy(const Point& s, const Point& g) const override;
    void save(const std::string& path) const override;

    /// Shortest-path distance with no locality cap; nullopt iff unreachable.
    std::optional<double> distance_unrestricted(const Point& a, const Point& b) const;
    /// Whole-grid distance field from the cell containing src.
    std::shared_ptr<const DistanceField> full_field(const Point& src) const;

    /// Greedy shortest-path polyline s -> g (continuous endpoints, cell
    /// centers between).
    std::vector<Point> greedy_polyline(const Point& s, const Point& g) const;

protected:
    void throw_unresolvable(const Point& a, const Point& b) const override;

private:
    std::shared_ptr<const DistanceField> local_field(int cell) const;

    OracleConfig cfg_;
    GridModel grid_;
    detail::LruCache<DistanceField> fields_;
    detail::LruCache<DistanceField> full_fields_;
};

struct TabularConfig {
    double grid_res = 1.0;
    double eta = 15.0;
    // Distance-to-go support [0, (reward_atoms-1)*reward_delta]; an axis move
    // shifts mass exactly 2 atoms, a diagonal move rounds sqrt(2) to 3 atoms.
    double reward_delta = 0.5;
    std::size_t reward_atoms = 61;
    double cost_delta = 1.0;
    std::size_t cost_atoms = 65;
    int max_sweeps = 2000;
    double kl_tolerance = 0.0;  // sweeps stop once the update changes nothing
    std::size_t window_cache = 64;
};

/// Tabular categorical distributional value iteration over (cell, goal-cell)
/// pairs with the goal within eta. Windows around each queried goal cell are
/// trained on demand and cached.
class TabularBackend final : public ValueBackend {
public:
    /// Everything learned for one goal cell: greedy policy pi, distance
    /// distributions for Q/V (as distance-to-go over reward_delta atoms) and
    /// categorical cost distributions under pi.
    struct GoalWindow {
        int goal_cell = -1;
        int bx0 = 0, by0 = 0, bw = 0, bh = 0;
        std::vector<double> neg_v;    // expected distance-to-go per cell; inf unreached
        std::vector<double> v_dist;   // bw*bh x reward_atoms
        std::vector<double> c_dist;   // bw*bh x cost_atoms
        std::vector<std::int8_t> policy;
        std::vector<double> sweep_kl;  // max KL between consecutive Q sweeps
        int q_sweeps = 0;

        std::optional<std::size_t> local_index(int cell, int nx) const;
    };

    TabularBackend(MazeMap map, TabularConfig cfg = {});

    std::string kind() const override { return "tabular"; }
    double grid_res() const override { return grid_.res(); }
    const GridModel& grid() const { return grid_; }
    const TabularConfig& config() const { return cfg_; }
    double reward_delta() const { return cfg_.reward_delta; }
    std::size_t reward_atoms() const { return cfg_.reward_atoms; }

    std::optional<double> distance(const Point& a, const Point& b) const override;
    CategoricalDist cost_dist(const Point& s, const Point& g) const override;
    Vec2 local_policy(const Point& s, const Point& g) const override;
    void save(const std::string& path) const override;

    /// Trains (or fetches) the window for the goal cell containing g.
    std::shared_ptr<const GoalWindow> window_for(const Point& g) const;

    /// Trains windows for free goal cells on a lattice with the given stride.
    void pretrain(double stride);

private:
    friend std::unique_ptr<ValueBackend> load_backend(const std::string& path);
    std::shared_ptr<const GoalWindow> window_for_cell(int goal_cell) const;
    GoalWindow train_window(int goal_cell) const;

    TabularConfig cfg_;
    GridModel grid_;
    detail::LruCache<GoalWindow> windows_;
};

std::unique_ptr<OracleBackend> build_oracle(const MazeMap& map, OracleConfig cfg = {});
std::unique_ptr<OracleBackend> build_oracle(const MazeMap& map, double grid_res);
std::unique_ptr<TabularBackend> train_tabular(const MazeMap& map, const TabularConfig& cfg = {});

/// Loads a backend snapshot written by save(); query answers round-trip
/// exactly.
std::unique_ptr<ValueBackend> load_backend(const std::string& path);

}  // namespace coplan
