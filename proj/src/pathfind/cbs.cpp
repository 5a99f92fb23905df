#include "dlp/pathfind/cbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace dlp::cbs {

GridMap GridMap::from_scene_grid(const SceneGrid& grid) {
    GridMap g;
    g.width = grid.width;
    g.height = grid.height;
    g.cell_size = grid.cell_size;
    g.blocked = grid.blocked;
    return g;
}

namespace {

int manhattan(const Cell& a, const Cell& b) {
    return std::abs(a.first - b.first) + std::abs(a.second - b.second);
}

struct AgentConstraints {
    std::set<std::pair<Cell, int>> vertex;            // (cell, t)
    std::set<std::tuple<Cell, Cell, int>> edge;       // (from, to, t)
    int latest = -1;
    int latest_at_goal = -1;

    AgentConstraints(const std::vector<Constraint>& all, int agent, const Cell& goal) {
        for (const auto& c : all) {
            if (c.agent != agent) continue;
            latest = std::max(latest, c.t);
            if (c.is_edge) {
                edge.insert({c.cell_a, c.cell_b, c.t});
            } else {
                vertex.insert({c.cell_a, c.t});
                if (c.cell_a == goal) latest_at_goal = std::max(latest_at_goal, c.t);
            }
        }
    }
};

}  // namespace

AgentPath low_level_search(const GridMap& grid, const Cell& start, const Cell& goal,
                           const std::vector<Constraint>& constraints, int agent) {
    if (!grid.free_cell(start) || !grid.free_cell(goal)) {
        throw NoPath("low_level_search: start or goal blocked");
    }
    const AgentConstraints cons(constraints, agent, goal);
    // Arriving at the goal only counts once the agent can sit there forever.
    const int min_goal_time = cons.latest_at_goal + 1;
    const int max_time = grid.width * grid.height * 2 + std::max(0, cons.latest) + 2;

    struct Node {
        int f;
        int t;
        Cell cell;
        bool operator>(const Node& o) const {
            if (f != o.f) return f > o.f;
            if (t != o.t) return t > o.t;
            return cell > o.cell;
        }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    std::map<std::pair<Cell, int>, std::pair<Cell, int>> parent;  // (cell,t) -> (cell,t-1)
    std::set<std::pair<Cell, int>> closed;

    if (!cons.vertex.count({start, 0})) {
        open.push({manhattan(start, goal), 0, start});
        parent[{start, 0}] = {start, -1};
    }

    while (!open.empty()) {
        const Node node = open.top();
        open.pop();
        if (closed.count({node.cell, node.t})) continue;
        closed.insert({node.cell, node.t});

        if (node.cell == goal && node.t >= min_goal_time) {
            std::vector<Cell> cells(node.t + 1);
            std::pair<Cell, int> cur{node.cell, node.t};
            for (int t = node.t; t >= 0; --t) {
                cells[t] = cur.first;
                cur = parent.at(cur);
            }
            AgentPath path;
            path.agent = agent;
            path.cells = std::move(cells);
            return path;
        }
        if (node.t >= max_time) continue;

        const Cell c = node.cell;
        const Cell moves[5] = {c,
                               {c.first + 1, c.second},
                               {c.first - 1, c.second},
                               {c.first, c.second + 1},
                               {c.first, c.second - 1}};
        for (const Cell& next : moves) {
            if (!grid.free_cell(next)) continue;
            const int nt = node.t + 1;
            if (cons.vertex.count({next, nt})) continue;
            if (cons.edge.count({c, next, node.t})) continue;
            if (closed.count({next, nt}) || parent.count({next, nt})) continue;
            parent[{next, nt}] = {c, node.t};
            open.push({nt + manhattan(next, goal), nt, next});
        }
    }
    throw NoPath("low_level_search: exhausted without reaching the goal");
}

std::optional<Conflict> detect_conflicts(const std::vector<AgentPath>& paths) {
    int horizon = 0;
    for (const auto& p : paths) horizon = std::max(horizon, p.cost());
    const int n = static_cast<int>(paths.size());
    for (int t = 0; t <= horizon; ++t) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (paths[i].at(t) == paths[j].at(t)) {
                    return Conflict{t, paths[i].agent, paths[j].agent, false, paths[i].at(t), {}};
                }
            }
        }
        if (t == horizon) continue;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Cell ia = paths[i].at(t), ib = paths[i].at(t + 1);
                const Cell ja = paths[j].at(t), jb = paths[j].at(t + 1);
                if (ia == jb && ib == ja && ia != ib) {
                    return Conflict{t, paths[i].agent, paths[j].agent, true, ia, ib};
                }
            }
        }
    }
    return std::nullopt;
}

std::vector<AgentPath> plan_cbs(const GridMap& grid, const std::vector<Cell>& starts,
                                const std::vector<Cell>& goals, const CbsConfig& config) {
    if (starts.size() != goals.size() || starts.empty()) {
        throw DomainError("plan_cbs: starts and goals must pair up");
    }
    for (std::size_t i = 0; i < starts.size(); ++i) {
        for (std::size_t j = i + 1; j < starts.size(); ++j) {
            if (starts[i] == starts[j] || goals[i] == goals[j]) {
                throw DomainError("plan_cbs: starts and goals must be mutually distinct");
            }
        }
    }
    const int n = static_cast<int>(starts.size());
    const int max_cost =
        config.max_cost_per_agent > 0 ? config.max_cost_per_agent : 2 * grid.width * grid.height + 2;

    struct CtNode {
        std::vector<Constraint> constraints;
        std::vector<AgentPath> paths;
        int sum = 0;
        long order = 0;
    };
    auto cmp = [](const CtNode& a, const CtNode& b) {
        if (a.sum != b.sum) return a.sum > b.sum;
        return a.order > b.order;
    };
    std::priority_queue<CtNode, std::vector<CtNode>, decltype(cmp)> open(cmp);

    CtNode root;
    root.paths.resize(n);
    try {
        for (int i = 0; i < n; ++i) {
            root.paths[i] = low_level_search(grid, starts[i], goals[i], {}, i);
            root.sum += root.paths[i].cost();
        }
    } catch (const NoPath&) {
        throw NoSolution("plan_cbs: an agent cannot reach its goal at all");
    }
    long next_order = 0;
    root.order = next_order++;
    open.push(std::move(root));

    int expanded = 0;
    while (!open.empty()) {
        CtNode node = open.top();
        open.pop();
        if (++expanded > config.node_budget) {
            throw Timeout("plan_cbs: node budget exhausted");
        }
        const auto conflict = detect_conflicts(node.paths);
        if (!conflict) return node.paths;

        for (int side = 0; side < 2; ++side) {
            const int agent = side == 0 ? conflict->agent_a : conflict->agent_b;
            Constraint c;
            c.agent = agent;
            c.t = conflict->t;
            if (conflict->is_edge) {
                c.is_edge = true;
                // each agent is barred from its own traversal of the edge
                if (agent == conflict->agent_a) {
                    c.cell_a = conflict->cell_a;
                    c.cell_b = conflict->cell_b;
                } else {
                    c.cell_a = conflict->cell_b;
                    c.cell_b = conflict->cell_a;
                }
            } else {
                c.is_edge = false;
                c.cell_a = conflict->cell_a;
                // vertex constraints forbid occupancy at time t
            }

            CtNode child;
            child.constraints = node.constraints;
            child.constraints.push_back(c);
            child.paths = node.paths;
            try {
                child.paths[agent] =
                    low_level_search(grid, starts[agent], goals[agent], child.constraints, agent);
            } catch (const NoPath&) {
                continue;
            }
            if (child.paths[agent].cost() > max_cost) continue;
            child.sum = 0;
            for (const auto& p : child.paths) child.sum += p.cost();
            child.order = next_order++;
            open.push(std::move(child));
        }
    }
    throw NoSolution("plan_cbs: constraint tree exhausted under the cost bound");
}

Trajectory path_to_trajectory(const AgentPath& path, double cell_size, double speed) {
    if (path.cells.empty()) throw DomainError("path_to_trajectory: empty path");
    if (!(speed > 0.0)) throw DomainError("path_to_trajectory: speed must be positive");
    const double step = cell_size / speed;

    auto center = [&](const Cell& c) {
        return std::pair<double, double>{(c.first + 0.5) * cell_size, (c.second + 0.5) * cell_size};
    };
    auto move_dir = [&](const Cell& a, const Cell& b) -> std::optional<Vec3> {
        if (a == b) return std::nullopt;
        const Vec3 d{static_cast<double>(b.first - a.first), 0.0,
                     static_cast<double>(b.second - a.second)};
        return normalized(d);
    };
    auto mid_dir = [](const Vec3& a, const Vec3& b) {
        const double ya = std::atan2(a.x, a.z);
        double yb = std::atan2(b.x, b.z);
        while (yb - ya > 3.14159265358979323846) yb -= 2 * 3.14159265358979323846;
        while (ya - yb > 3.14159265358979323846) yb += 2 * 3.14159265358979323846;
        const double y = 0.5 * (ya + yb);
        return Vec3{std::sin(y), 0.0, std::cos(y)};
    };

    Trajectory traj;
    const int T = path.cost();
    Vec3 last_facing{0, 0, 1};
    for (int t = 0; t <= T; ++t) {
        const auto [x, z] = center(path.cells[t]);
        const auto in = t > 0 ? move_dir(path.cells[t - 1], path.cells[t]) : std::nullopt;
        const auto out = t < T ? move_dir(path.cells[t], path.cells[t + 1]) : std::nullopt;
        Vec3 facing = last_facing;
        if (in && out) {
            facing = mid_dir(*in, *out);
        } else if (out) {
            facing = *out;
        } else if (in) {
            facing = *in;
        }
        last_facing = facing;
        traj.samples.push_back({t * step, x, z, facing});
    }
    return traj;
}

}  // namespace dlp::cbs
