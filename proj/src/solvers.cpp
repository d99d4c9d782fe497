#include "gridpath/solvers.hpp"

#include <algorithm>
#include <cstdlib>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace gridpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (priority, insertion sequence, node). The sequence number makes the pop
// order fully deterministic and lets A*(Zero) reproduce Dijkstra's expansion
// sequence exactly.
using QueueEntry = std::tuple<double, std::int64_t, std::int32_t>;
using MinQueue =
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>>;

void check_inputs(const WeightGrid& w, const GridProblem& p) {
    if (w.rows() != p.k || w.cols() != p.k) {
        throw std::invalid_argument("solver: weight grid does not match problem side");
    }
    if (!(w > 0.0).all()) {
        throw std::invalid_argument("solver: weights must be strictly positive");
    }
}

SolveResult finish(const WeightGrid& w, const GridProblem& p,
                   const std::vector<std::int32_t>& parent, const std::vector<char>& settled,
                   std::vector<Cell> order, SolverStats stats,
                   std::chrono::steady_clock::time_point t0) {
    const Eigen::Index k = p.k;
    SolveResult res;
    res.mask = PathMask::Zero(k, k);
    std::int32_t node = static_cast<std::int32_t>(p.goal.row * k + p.goal.col);
    while (node >= 0) {
        res.mask(node / k, node % k) = 1;
        node = parent[node];
    }
    res.expanded = ExpansionMask::Zero(k, k);
    for (Eigen::Index i = 0; i < k * k; ++i) {
        if (settled[i]) res.expanded(i / k, i % k) = 1;
    }
    res.expansion_order = std::move(order);
    res.cost = path_cost(w, res.mask, p.start);
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.stats = stats;
    return res;
}

}  // namespace

SolveResult dijkstra(const WeightGrid& w, const GridProblem& p) {
    check_inputs(w, p);
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index k = p.k;
    const std::int32_t start = static_cast<std::int32_t>(p.start.row * k + p.start.col);
    const std::int32_t goal = static_cast<std::int32_t>(p.goal.row * k + p.goal.col);

    std::vector<double> g(k * k, kInf);
    std::vector<std::int32_t> parent(k * k, -1);
    std::vector<char> settled(k * k, 0);
    std::vector<Cell> order;
    SolverStats stats;
    MinQueue pq;
    std::int64_t seq = 0;

    g[start] = 0.0;
    pq.emplace(0.0, seq++, start);
    ++stats.pq_pushes;

    while (!pq.empty()) {
        const auto [key, s, node] = pq.top();
        pq.pop();
        ++stats.pq_pops;
        if (settled[node]) continue;  // stale entry from lazy decrease-key
        settled[node] = 1;
        ++stats.expansions;
        order.push_back(Cell{node / k, node % k});
        if (node == goal) break;

        const Eigen::Index row = node / k, col = node % k;
        for (Eigen::Index dr = -1; dr <= 1; ++dr) {
            for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const Eigen::Index nr = row + dr, nc = col + dc;
                if (nr < 0 || nr >= k || nc < 0 || nc >= k) continue;
                const std::int32_t nb = static_cast<std::int32_t>(nr * k + nc);
                const double nd = g[node] + w(nr, nc);
                if (nd < g[nb]) {
                    g[nb] = nd;
                    parent[nb] = node;
                    ++stats.relaxations;
                    pq.emplace(nd, seq++, nb);
                    ++stats.pq_pushes;
                }
            }
        }
    }
    return finish(w, p, parent, settled, std::move(order), stats, t0);
}

SolveResult astar(const WeightGrid& w, const GridProblem& p, HeuristicKind h) {
    check_inputs(w, p);
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index k = p.k;
    const std::int32_t start = static_cast<std::int32_t>(p.start.row * k + p.start.col);
    const std::int32_t goal = static_cast<std::int32_t>(p.goal.row * k + p.goal.col);
    const double min_weight = w.minCoeff();  // over all k^2 cells, start included

    std::vector<double> g(k * k, kInf);
    std::vector<std::int32_t> parent(k * k, -1);
    std::vector<char> settled(k * k, 0);
    std::vector<Cell> order;
    SolverStats stats;
    MinQueue pq;
    std::int64_t seq = 0;

    // MinWeightChebyshev is consistent (h drops by at most min_weight per
    // move), so settle-on-first-pop stays exact with lazy decrease-key.
    const auto h_of = [&](Eigen::Index row, Eigen::Index col) -> double {
        if (h == HeuristicKind::Zero) return 0.0;
        ++stats.heuristic_evals;
        return heuristic_value(Cell{row, col}, p.goal, min_weight);
    };

    g[start] = 0.0;
    pq.emplace(0.0 + h_of(p.start.row, p.start.col), seq++, start);
    ++stats.pq_pushes;

    while (!pq.empty()) {
        const auto [key, s, node] = pq.top();
        pq.pop();
        ++stats.pq_pops;
        if (settled[node]) continue;
        settled[node] = 1;
        ++stats.expansions;
        order.push_back(Cell{node / k, node % k});
        if (node == goal) break;

        const Eigen::Index row = node / k, col = node % k;
        for (Eigen::Index dr = -1; dr <= 1; ++dr) {
            for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const Eigen::Index nr = row + dr, nc = col + dc;
                if (nr < 0 || nr >= k || nc < 0 || nc >= k) continue;
                const std::int32_t nb = static_cast<std::int32_t>(nr * k + nc);
                const double nd = g[node] + w(nr, nc);
                if (nd < g[nb]) {
                    g[nb] = nd;
                    parent[nb] = node;
                    ++stats.relaxations;
                    pq.emplace(nd + h_of(nr, nc), seq++, nb);
                    ++stats.pq_pushes;
                }
            }
        }
    }
    return finish(w, p, parent, settled, std::move(order), stats, t0);
}

Eigen::Index chebyshev_steps(Cell a, Cell b) {
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

double heuristic_value(Cell cell, Cell goal, double min_weight) {
    return static_cast<double>(chebyshev_steps(cell, goal)) * min_weight;
}

Eigen::ArrayXXd exact_remaining_costs(const WeightGrid& w, const GridProblem& p) {
    check_inputs(w, p);
    const Eigen::Index k = p.k;
    Eigen::ArrayXXd r = Eigen::ArrayXXd::Constant(k, k, kInf);
    r(p.goal.row, p.goal.col) = 0.0;
    // Bellman-Ford style sweeps to the fixed point. Positive weights make the
    // fixed point the exact min over walks, which equals the min over simple
    // paths.
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index row = 0; row < k; ++row) {
            for (Eigen::Index col = 0; col < k; ++col) {
                if (row == p.goal.row && col == p.goal.col) continue;
                double best = r(row, col);
                for (Eigen::Index dr = -1; dr <= 1; ++dr) {
                    for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const Eigen::Index nr = row + dr, nc = col + dc;
                        if (nr < 0 || nr >= k || nc < 0 || nc >= k) continue;
                        const double via = w(nr, nc) + r(nr, nc);
                        if (via < best) best = via;
                    }
                }
                if (best < r(row, col)) {
                    r(row, col) = best;
                    changed = true;
                }
            }
        }
    }
    return r;
}

namespace {

struct OracleSearch {
    const WeightGrid& w;
    const GridProblem& p;
    Eigen::ArrayXXd remaining;
    PathMask on_path;
    double best = kInf;
    // Small absolute slack so a genuinely optimal path is never pruned by a
    // last-ulp rounding difference between forward sums and the bound table.
    static constexpr double kSlack = 1e-9;
    std::vector<std::pair<double, PathMask>> found;

    void dfs(Cell cur, double cost) {
        if (cur == p.goal) {
            if (cost < best) best = cost;
            if (cost <= best + kSlack) found.emplace_back(cost, on_path);
            return;
        }
        for (Eigen::Index dr = -1; dr <= 1; ++dr) {
            for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const Cell n{cur.row + dr, cur.col + dc};
                if (!in_grid(n, p.k) || on_path(n.row, n.col)) continue;
                const double nd = cost + w(n.row, n.col);
                if (nd + remaining(n.row, n.col) > best + kSlack) continue;
                on_path(n.row, n.col) = 1;
                dfs(n, nd);
                on_path(n.row, n.col) = 0;
            }
        }
    }
};

bool mask_less(const PathMask& a, const PathMask& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
}

}  // namespace

OracleResult brute_force_shortest(const WeightGrid& w, const GridProblem& p) {
    check_inputs(w, p);
    if (p.k > 6) {
        throw std::invalid_argument("brute_force_shortest: refusing k > 6 (exponential search)");
    }
    OracleSearch search{w, p, exact_remaining_costs(w, p), PathMask::Zero(p.k, p.k), kInf, {}};
    search.on_path(p.start.row, p.start.col) = 1;
    search.dfs(p.start, 0.0);

    OracleResult out;
    out.cost = search.best;
    for (auto& [cost, mask] : search.found) {
        if (cost <= search.best + OracleSearch::kSlack) out.optimal_masks.push_back(mask);
    }
    std::sort(out.optimal_masks.begin(), out.optimal_masks.end(), mask_less);
    out.optimal_masks.erase(std::unique(out.optimal_masks.begin(), out.optimal_masks.end(),
                                        [](const PathMask& a, const PathMask& b) {
                                            return (a == b).all();
                                        }),
                            out.optimal_masks.end());
    return out;
}

SolveResult run_solver(SolverId id, const WeightGrid& weights, const GridProblem& problem) {
    switch (id) {
        case SolverId::Dijkstra: return dijkstra(weights, problem);
        case SolverId::AStarZero: return astar(weights, problem, HeuristicKind::Zero);
        case SolverId::AStarMinChebyshev:
            return astar(weights, problem, HeuristicKind::MinWeightChebyshev);
    }
    throw std::logic_error("run_solver: unknown solver id");
}

const char* solver_name(SolverId id) {
    switch (id) {
        case SolverId::Dijkstra: return "dijkstra";
        case SolverId::AStarZero: return "astar_zero";
        case SolverId::AStarMinChebyshev: return "astar_min_chebyshev";
    }
    return "unknown";
}

}  // namespace gridpath
