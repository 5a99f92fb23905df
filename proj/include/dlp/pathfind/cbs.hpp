#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dlp/core/error.hpp"
#include "dlp/core/scene.hpp"
#include "dlp/core/trajectory.hpp"

namespace dlp::cbs {

struct NoPath : Error {
    using Error::Error;
};
struct NoSolution : Error {
    using Error::Error;
};
struct Timeout : Error {
    using Error::Error;
};

using Cell = std::pair<int, int>;

struct GridMap {
    int width = 0;
    int height = 0;
    double cell_size = 0.5;
    std::set<Cell> blocked;

    bool in_bounds(const Cell& c) const {
        return c.first >= 0 && c.first < width && c.second >= 0 && c.second < height;
    }
    bool free_cell(const Cell& c) const { return in_bounds(c) && !blocked.count(c); }

    static GridMap from_scene_grid(const SceneGrid& grid);
};

struct Constraint {
    int agent = 0;
    bool is_edge = false;
    Cell cell_a;  // vertex cell, or edge source
    Cell cell_b;  // edge destination (edge only)
    int t = 0;
};

struct AgentPath {
    int agent = 0;
    std::vector<Cell> cells;  // cells[t] for t = 0..cost; waits at goal after

    int cost() const { return static_cast<int>(cells.size()) - 1; }
    Cell at(int t) const {
        return t < static_cast<int>(cells.size()) ? cells[t] : cells.back();
    }
};

struct Conflict {
    int t = 0;
    int agent_a = 0;
    int agent_b = 0;
    bool is_edge = false;
    Cell cell_a;  // vertex cell; for an edge conflict, agent_a moves a->b
    Cell cell_b;
};

// Space-time A* under vertex/edge constraints; unit-time 4-adjacent
// moves plus waits, admissible Manhattan heuristic, ties by smaller t
// then lexicographic cell. Throws NoPath.
AgentPath low_level_search(const GridMap& grid, const Cell& start, const Cell& goal,
                           const std::vector<Constraint>& constraints, int agent = 0);

// Earliest conflict between any two paths (vertex before edge at equal
// time, then by agent pair). Paths implicitly wait at their goals.
std::optional<Conflict> detect_conflicts(const std::vector<AgentPath>& paths);

struct CbsConfig {
    int node_budget = 100000;      // constraint-tree nodes before Timeout
    int max_cost_per_agent = -1;   // -1: 2*width*height + 2
};

// Conflict-based search: best-first over the constraint tree on
// sum-of-costs, splitting on the first conflict. Throws NoSolution
// (tree exhausted under the cost bound) or Timeout (node budget).
std::vector<AgentPath> plan_cbs(const GridMap& grid, const std::vector<Cell>& starts,
                                const std::vector<Cell>& goals, const CbsConfig& config = {});

// Piecewise-linear ground trajectory through cell centers at `speed`
// m/s; every step (move or wait) spans cell_size/speed seconds so
// multi-agent timing survives the conversion. Corner facings are
// angle-interpolated; wait steps hold position and facing.
Trajectory path_to_trajectory(const AgentPath& path, double cell_size, double speed = 1.2);

}  // namespace dlp::cbs
