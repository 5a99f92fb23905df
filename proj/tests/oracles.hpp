// Independent reference implementations used by the unit and acceptance
// suites. Straight-line code on purpose: no kernels, no staged pipeline.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "dlp/db/motion_database.hpp"
#include "dlp/momat/matcher.hpp"
#include "dlp/pathfind/cbs.hpp"

namespace oracles {

// ---- joint-state MAPF optimum ----
// Dijkstra over (joint cells, done mask): a non-done agent pays 1 per
// step; an agent standing on its goal may flip to done for free and is
// frozen afterwards. Equals the sum over agents of the final arrival
// time. Returns -1 when unsolvable.
inline int joint_optimal_sum_of_costs(const dlp::cbs::GridMap& grid,
                                      const std::vector<dlp::cbs::Cell>& starts,
                                      const std::vector<dlp::cbs::Cell>& goals) {
    using dlp::cbs::Cell;
    const int n = static_cast<int>(starts.size());
    const auto cell_id = [&](const Cell& c) { return c.second * grid.width + c.first; };

    using State = std::uint64_t;  // 8 bits per agent cell + 8 bits done mask
    const auto encode = [&](const std::vector<Cell>& cells, unsigned mask) {
        State s = mask;
        for (int i = 0; i < n; ++i) {
            s = (s << 8) | static_cast<unsigned>(cell_id(cells[i]));
        }
        return s;
    };

    std::map<State, int> dist;
    using Entry = std::pair<int, State>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::map<State, std::pair<std::vector<Cell>, unsigned>> decode;

    const State start = encode(starts, 0);
    dist[start] = 0;
    decode[start] = {starts, 0};
    open.push({0, start});

    const unsigned all_done = (1u << n) - 1;
    while (!open.empty()) {
        const auto [d, s] = open.top();
        open.pop();
        if (dist.at(s) != d) continue;
        const auto [cells, mask] = decode.at(s);
        if (mask == all_done) return d;

        // free done-flips for agents standing on their goals
        for (int i = 0; i < n; ++i) {
            if ((mask >> i & 1u) == 0 && cells[i] == goals[i]) {
                const State next = encode(cells, mask | (1u << i));
                if (!dist.count(next) || dist.at(next) > d) {
                    dist[next] = d;
                    decode[next] = {cells, mask | (1u << i)};
                    open.push({d, next});
                }
            }
        }

        // joint moves of the non-done agents
        std::vector<std::vector<Cell>> choices(n);
        int movers = 0;
        for (int i = 0; i < n; ++i) {
            if (mask >> i & 1u) {
                choices[i] = {cells[i]};
            } else {
                ++movers;
                const Cell c = cells[i];
                const Cell opts[5] = {c,
                                      {c.first + 1, c.second},
                                      {c.first - 1, c.second},
                                      {c.first, c.second + 1},
                                      {c.first, c.second - 1}};
                for (const Cell& o : opts) {
                    if (grid.free_cell(o)) choices[i].push_back(o);
                }
            }
        }
        if (movers == 0) continue;  // all done handled above

        std::vector<std::size_t> pick(n, 0);
        while (true) {
            std::vector<Cell> next(n);
            for (int i = 0; i < n; ++i) next[i] = choices[i][pick[i]];
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                for (int j = i + 1; j < n && ok; ++j) {
                    if (next[i] == next[j]) ok = false;                       // vertex
                    if (next[i] == cells[j] && next[j] == cells[i] &&
                        cells[i] != cells[j]) ok = false;                     // swap
                }
            }
            if (ok) {
                const State ns = encode(next, mask);
                const int nd = d + movers;
                if (!dist.count(ns) || dist.at(ns) > nd) {
                    dist[ns] = nd;
                    decode[ns] = {next, mask};
                    open.push({nd, ns});
                }
            }
            int i = 0;
            while (i < n && ++pick[i] == choices[i].size()) {
                pick[i] = 0;
                ++i;
            }
            if (i == n) break;
        }
    }
    return -1;
}

// ---- exhaustive retrieval ranking ----
// Plain-loop reimplementation of the full matching score over every
// window: corpus z-scored Euclidean groups, facing cosine distance,
// candidate-set z-scoring, weighted sum, (total, clip id, start) order.
inline std::vector<std::pair<std::string, int>> exhaustive_ranking(
    const dlp::MotionDatabase& db, const dlp::KinematicFeature& query,
    const dlp::momat::MatchWeights& weights, bool candidate_set_norm) {
    const int k = db.config().k;
    const std::size_t width = db.feature_width();
    const std::size_t n = db.window_count();
    const auto& stats = db.norm_stats();

    std::vector<std::array<double, 5>> comps(n);
    for (std::size_t w = 0; w < n; ++w) {
        const double* row = db.window_feature(w);
        const double* q = query.values.data();
        double t2 = 0;
        for (int d = 0; d < 2 * k; ++d) {
            const double a = (row[d] - stats.mean[d]) / stats.stddev[d];
            const double b = (q[d] - stats.mean[d]) / stats.stddev[d];
            t2 += (a - b) * (a - b);
        }
        double f = 0;
        for (int s = 0; s < k; ++s) {
            const double* cf = row + 2 * k + 3 * s;
            const double* qf = q + 2 * k + 3 * s;
            const double nc = std::sqrt(cf[0] * cf[0] + cf[1] * cf[1] + cf[2] * cf[2]);
            const double nq = std::sqrt(qf[0] * qf[0] + qf[1] * qf[1] + qf[2] * qf[2]);
            double c = 0;
            if (nc > 0 && nq > 0) c = (cf[0] * qf[0] + cf[1] * qf[1] + cf[2] * qf[2]) / (nc * nq);
            f += 1.0 - c;
        }
        double b2 = 0;
        for (std::size_t d = 5 * k; d < 5 * k + 189; ++d) {
            const double a = (row[d] - stats.mean[d]) / stats.stddev[d];
            const double bb = (q[d] - stats.mean[d]) / stats.stddev[d];
            b2 += (a - bb) * (a - bb);
        }
        const std::size_t h = 5 * k + 189;
        const double hd = (row[h] - stats.mean[h]) / stats.stddev[h] -
                          (q[h] - stats.mean[h]) / stats.stddev[h];
        double p2 = 0;
        for (std::size_t d = h + 1; d < width; ++d) {
            const double a = (row[d] - stats.mean[d]) / stats.stddev[d];
            const double bb = (q[d] - stats.mean[d]) / stats.stddev[d];
            p2 += (a - bb) * (a - bb);
        }
        comps[w] = {std::sqrt(t2), f, std::sqrt(b2), std::fabs(hd), std::sqrt(p2)};
    }

    std::array<double, 5> mean{}, stddev{};
    if (candidate_set_norm) {
        for (int c = 0; c < 5; ++c) {
            double sum = 0;
            for (std::size_t w = 0; w < n; ++w) sum += comps[w][c];
            mean[c] = sum / static_cast<double>(n);
            double sq = 0;
            for (std::size_t w = 0; w < n; ++w) {
                sq += (comps[w][c] - mean[c]) * (comps[w][c] - mean[c]);
            }
            stddev[c] = std::sqrt(sq / static_cast<double>(n));
            if (stddev[c] < 1e-8) stddev[c] = 1.0;
        }
    }

    struct Row {
        double total;
        std::string clip_id;
        int start;
    };
    std::vector<Row> rows(n);
    for (std::size_t w = 0; w < n; ++w) {
        std::array<double, 5> norm = comps[w];
        if (candidate_set_norm) {
            for (int c = 0; c < 5; ++c) norm[c] = (comps[w][c] - mean[c]) / stddev[c];
        }
        const double total = weights.trajectory * norm[0] + weights.facing * norm[1] +
                             weights.body * norm[2] + weights.hip * norm[3] +
                             weights.partner * norm[4];
        const auto& ref = db.window(w);
        rows[w] = {total, db.clip(ref.clip_index).id, ref.start};
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.total != b.total) return a.total < b.total;
        if (a.clip_id != b.clip_id) return a.clip_id < b.clip_id;
        return a.start < b.start;
    });
    std::vector<std::pair<std::string, int>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {rows[i].clip_id, rows[i].start};
    return out;
}

}  // namespace oracles
