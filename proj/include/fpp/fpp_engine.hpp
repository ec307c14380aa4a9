#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/graph.hpp"
#include "fpp/layered_ball.hpp"
#include "fpp/weights.hpp"

namespace fpp {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// One realization's level hitting times T_k = Z_k^* (minimal passage time
// from the root to D_k) for k = 1..n.
struct FppRun {
    std::uint32_t n = 0;
    std::vector<double> hitting_times;         // [k-1] -> T_k
    std::vector<VertexKey> argmin_vertices;    // [k-1] -> smallest key attaining T_k
    std::optional<std::vector<VertexKey>> optimal_path;  // root .. argmin of level n

    double level(std::uint32_t k) const { return hitting_times.at(k - 1); }
};

struct PointToPointResult {
    double value = infinity;
    std::size_t settled_vertices = 0;
    std::vector<VertexKey> path;  // source .. target
};

// Weight source over a ball: field lookups through the arc's cached digest.
struct FieldWeights {
    const WeightField& field;
    double operator()(std::uint32_t /*from*/, const LayeredBall::ArcRef& arc) const { return field.at_digest(arc.digest); }
};

// Label-setting sweep over a prebuilt ball. T_k is the first settled
// distance in D_k; since every path into D_k first crosses D_k from B_{k-1},
// the ball-restricted distances give exact level minima even though interior
// per-vertex values may not be exact Z_v. The sweep stops once every vertex at
// distance <= T_n is settled so that ties resolve to the smallest key.
template <class Weights>
FppRun first_passage_levels(const LayeredBall& ball, Weights&& weight, std::uint32_t n, bool want_path = false) {
    if (n == 0 || n > ball.radius()) throw contract_error("first_passage_levels: need 1 <= n <= ball radius");
    if (ball.layer_begin(n) == ball.layer_end(n)) throw config_error("first_passage_levels: level set D_n is empty");

    const auto size = ball.size();
    std::vector<double> dist(size, infinity);
    std::vector<std::uint32_t> parent(size, std::numeric_limits<std::uint32_t>::max());
    std::vector<char> settled(size, 0);
    constexpr auto none = std::numeric_limits<std::uint32_t>::max();
    std::vector<double> level_time(n + 1, infinity);
    std::vector<std::uint32_t> level_arg(n + 1, none);

    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[0] = 0.0;
    heap.emplace(0.0, 0);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (settled[u] || d != dist[u]) continue;
        if (level_arg[n] != none && d > level_time[n]) break;
        settled[u] = 1;

        const auto k = ball.depth(u);
        if (k >= 1 && k <= n) {
            if (level_arg[k] == none) {
                level_time[k] = d;
                level_arg[k] = u;
            } else if (d == level_time[k] && ball.key(u) < ball.key(level_arg[k])) {
                level_arg[k] = u;
            }
        }
        for (const auto& arc : ball.arcs(u)) {
            if (settled[arc.to] || ball.depth(arc.to) > n) continue;
            const double nd = d + weight(u, arc);
            if (nd < dist[arc.to]) {
                dist[arc.to] = nd;
                parent[arc.to] = u;
                heap.emplace(nd, arc.to);
            }
        }
    }

    FppRun run;
    run.n = n;
    for (std::uint32_t k = 1; k <= n; ++k) {
        run.hitting_times.push_back(level_time[k]);
        run.argmin_vertices.push_back(ball.key(level_arg[k]));
    }
    if (want_path) {
        std::vector<VertexKey> path;
        for (auto v = level_arg[n]; v != none; v = parent[v]) path.push_back(ball.key(v));
        std::reverse(path.begin(), path.end());
        run.optimal_path = std::move(path);
    }
    return run;
}

template <RootedGraph G>
FppRun first_passage_levels(const G& graph, const WeightField& field, std::uint32_t n, bool want_path = false,
                            std::size_t vertex_budget = default_vertex_budget) {
    const auto ball = build_ball(graph, n, vertex_budget);
    return first_passage_levels(ball, FieldWeights{field}, n, want_path);
}

// Exact Z between two vertices by lazy label-setting expansion of the
// implicit graph, stopping when the target is settled. A target in another
// component (finite multigraphs only) yields +inf.
template <RootedGraph G>
PointToPointResult point_to_point(const G& graph, const WeightField& field, const VertexKey& source,
                                  const VertexKey& target, std::size_t max_settled = 1'000'000) {
    if (source == target) throw contract_error("point_to_point: source and target must differ");
    graph.neighbors(target);  // decodes (and rejects) a malformed target up front

    struct Node {
        VertexKey key;
        double dist;
        std::uint32_t parent;
        bool settled;
    };
    constexpr auto none = std::numeric_limits<std::uint32_t>::max();
    std::vector<Node> nodes;
    std::unordered_map<VertexKey, std::uint32_t> index;
    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

    nodes.push_back({source, 0.0, none, false});
    index.emplace(source, 0);
    heap.emplace(0.0, 0);
    PointToPointResult result;
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (nodes[u].settled || d != nodes[u].dist) continue;
        nodes[u].settled = true;
        ++result.settled_vertices;
        if (nodes[u].key == target) {
            result.value = d;
            for (auto v = u; v != none; v = nodes[v].parent) result.path.push_back(nodes[v].key);
            std::reverse(result.path.begin(), result.path.end());
            return result;
        }
        if (result.settled_vertices >= max_settled)
            throw resource_error("point_to_point: settled-vertex cap of " + std::to_string(max_settled) +
                                 " reached before the target");
        const VertexKey here = nodes[u].key;
        for (const auto& arc : graph.neighbors(here)) {
            const double nd = d + field.sample(here, arc.to, arc.multiplicity);
            auto [it, inserted] = index.try_emplace(arc.to, static_cast<std::uint32_t>(nodes.size()));
            if (inserted) nodes.push_back({arc.to, infinity, none, false});
            Node& node = nodes[it->second];
            if (!node.settled && nd < node.dist) {
                node.dist = nd;
                node.parent = u;
                heap.emplace(nd, it->second);
            }
        }
    }
    return result;  // different components: value stays +inf
}

namespace detail {

// Depth-first enumeration of simple paths with branch-and-bound. A branch is
// cut when its cost reaches the best complete path, or when the same vertex
// was already reached by a prefix at most as expensive (any completion of the
// current prefix is then dominated by a walk, hence by a simple path, through
// the cheaper one). Both cuts preserve the exact minimum.
template <RootedGraph G, class Allowed, class IsGoal>
double enumerate_simple_paths(const G& graph, const WeightField& field, const VertexKey& start, Allowed&& allowed,
                              IsGoal&& is_goal, std::size_t max_expansions, const char* who) {
    double best = infinity;
    std::unordered_map<VertexKey, double> label;
    std::unordered_map<VertexKey, char> on_path;
    std::size_t expansions = 0;

    std::function<void(const VertexKey&, double)> extend = [&](const VertexKey& u, double cost) {
        if (++expansions > max_expansions)
            throw resource_error(std::string(who) + ": enumeration exceeded " + std::to_string(max_expansions) +
                                 " expansions");
        on_path[u] = 1;
        auto arcs = graph.neighbors(u);
        std::vector<std::pair<double, const Arc*>> steps;
        for (const auto& arc : arcs) {
            if (on_path[arc.to] || !allowed(arc.to)) continue;
            steps.emplace_back(cost + field.sample(u, arc.to, arc.multiplicity), &arc);
        }
        std::sort(steps.begin(), steps.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first || (x.first == y.first && x.second->to < y.second->to); });
        for (const auto& [c, arc] : steps) {
            if (c >= best) break;
            if (is_goal(arc->to)) {
                best = c;
                continue;
            }
            auto [it, fresh] = label.try_emplace(arc->to, c);
            if (!fresh) {
                if (c >= it->second) continue;
                it->second = c;
            }
            extend(arc->to, c);
        }
        on_path[u] = 0;
    };
    label[start] = 0.0;
    extend(start, 0.0);
    return best;
}

}  // namespace detail

// Independent oracle for T_n: minimum over simple paths from the root that
// stay in B_{n-1} until their first arrival in D_n.
template <RootedGraph G>
double brute_force_level(const G& graph, const WeightField& field, std::uint32_t n,
                         std::size_t max_expansions = 20'000'000) {
    if (n == 0 || n > 4) throw resource_error("brute_force_level: only 1 <= n <= 4 is supported");
    const auto ball = build_ball(graph, n, 200'000);
    for (std::uint32_t i = 0; i < ball.size(); ++i)
        if (ball.depth(i) < n && graph.neighbors(ball.key(i)).size() > 16)
            throw resource_error("brute_force_level: vertex degree above 16");
    const auto depth_of = [&](const VertexKey& v) {
        const auto i = ball.find(v);
        return i < 0 ? n + 1 : ball.depth(static_cast<std::uint32_t>(i));
    };
    return detail::enumerate_simple_paths(
        graph, field, graph.root(), [&](const VertexKey& v) { return depth_of(v) <= n; },
        [&](const VertexKey& v) { return depth_of(v) == n; }, max_expansions, "brute_force_level");
}

// Independent oracle for point-to-point: minimum over simple paths from
// source to target inside the radius-`radius` ball around source. Exact for
// Z only when an optimal path stays inside that ball.
template <RootedGraph G>
double brute_force_p2p(const G& graph, const WeightField& field, const VertexKey& source, const VertexKey& target,
                       std::uint32_t radius, std::size_t max_expansions = 50'000'000) {
    if (radius > 6) throw resource_error("brute_force_p2p: radius above 6");
    if (source == target) throw contract_error("brute_force_p2p: source and target must differ");
    const auto ball = build_ball_around(graph, source, radius, 2'000'000);
    if (!ball.contains(target)) throw contract_error("brute_force_p2p: target farther than radius from source");
    return detail::enumerate_simple_paths(
        graph, field, source, [&](const VertexKey& v) { return ball.contains(v); },
        [&](const VertexKey& v) { return v == target; }, max_expansions, "brute_force_p2p");
}

// Left-to-right sum of re-sampled weights along a vertex path (simple-graph
// families; multiplicity 0).
inline double path_weight(const WeightField& field, const std::vector<VertexKey>& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) total += field.sample(path[i - 1], path[i]);
    return total;
}

}  // namespace fpp
