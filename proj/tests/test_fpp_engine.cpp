#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <set>

#include <gtest/gtest.h>

#include "fpp/family_config.hpp"
#include "fpp/fpp_engine.hpp"

using namespace fpp;

namespace {

const WeightLaw u01{UniformLaw{0.0, 1.0}};
const WeightLaw exp1{ExponentialLaw{1.0}};

// Plain Dijkstra over a ball restricted to `allowed` vertices; returns the
// level minima T_1..T_n (inf where unreachable).
std::vector<double> restricted_levels(const LayeredBall& ball, const WeightField& field,
                                      const std::function<bool(const VertexKey&)>& allowed) {
    std::vector<double> dist(ball.size(), infinity);
    using E = std::pair<double, std::uint32_t>;
    std::priority_queue<E, std::vector<E>, std::greater<>> heap;
    dist[0] = 0;
    heap.emplace(0.0, 0);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& a : ball.arcs(u)) {
            if (!allowed(ball.key(a.to))) continue;
            const double nd = d + field.sample(ball.key(u), ball.key(a.to), a.multiplicity);
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                heap.emplace(nd, a.to);
            }
        }
    }
    std::vector<double> out(ball.radius(), infinity);
    for (std::uint32_t i = 1; i < ball.size(); ++i)
        out[ball.depth(i) - 1] = std::min(out[ball.depth(i) - 1], dist[i]);
    return out;
}

bool is_simple(const std::vector<VertexKey>& path) {
    return std::set<VertexKey>(path.begin(), path.end()).size() == path.size();
}

}  // namespace

TEST(Levels, ConstantWeightsGiveLinearTimes) {
    for (double c : {1.0, 0.25, 3.0}) {
        const WeightField field(1, WeightLaw{ConstantLaw{c}});
        const auto run = first_passage_levels(DAryTree(2), field, 7);
        ASSERT_EQ(run.hitting_times.size(), 7u);
        for (std::uint32_t k = 1; k <= 7; ++k) EXPECT_DOUBLE_EQ(run.level(k), c * k);
    }
}

TEST(Levels, TwoCandidateMinimum) {
    const auto ball = build_ball(DAryTree(2), 1);
    const auto weights = [&](std::uint32_t, const LayeredBall::ArcRef& arc) {
        return ball.key(arc.to) == DAryTree::prepend(VertexKey{}, 0) ? 0.3 : 0.7;
    };
    const auto run = first_passage_levels(ball, weights, 1);
    EXPECT_EQ(run.level(1), 0.3);
    EXPECT_EQ(run.argmin_vertices[0], DAryTree::prepend(VertexKey{}, 0));
}

TEST(Levels, TiesResolveToSmallestKey) {
    const WeightField field(1, WeightLaw{ConstantLaw{1.0}});
    for (const AnyGraph& g : {AnyGraph(Grid2D{}), AnyGraph(LamplighterN{}), AnyGraph(Heisenberg{})}) {
        const auto ball = build_ball(g, 5);
        const auto run = first_passage_levels(ball, FieldWeights{field}, 5);
        for (std::uint32_t k = 1; k <= 5; ++k) {
            const auto layer = ball.layer(k);
            EXPECT_EQ(run.argmin_vertices[k - 1], *std::min_element(layer.begin(), layer.end())) << g.name();
        }
    }
}

TEST(Levels, MatchBruteForceOnLamplighter) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const WeightField field(seed, u01);
        const auto run = first_passage_levels(LamplighterN{}, field, 3);
        EXPECT_EQ(run.level(3), brute_force_level(LamplighterN{}, field, 3));
    }
}

TEST(Levels, MatchBruteForceOnSeveralFamilies) {
    const std::vector<AnyGraph> graphs{DAryTree(3), Grid2D{}, Heisenberg{}, HyperbolicTiling(3, 7),
                                       ProductGraph(DAryTree(2), PathGraph{}), RandomRegular(3, 40, 2)};
    for (const auto& g : graphs) {
        for (const auto& law : {u01, exp1, WeightLaw{ShiftedBernoulliLaw{0.1, 0.5}}}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const WeightField field(seed, law);
                const auto run = first_passage_levels(g, field, 3);
                for (std::uint32_t n = 1; n <= 3; ++n)
                    EXPECT_EQ(run.level(n), brute_force_level(g, field, n)) << g.name() << " " << describe(law);
            }
        }
    }
}

// T_n is also the minimum over D_n of the exact point-to-point values.
TEST(Levels, EqualMinimumOfPointToPoint) {
    for (const AnyGraph& g : {AnyGraph(Grid2D{}), AnyGraph(LamplighterN{}), AnyGraph(DAryTree(2))}) {
        const WeightField field(17, exp1);
        const auto ball = build_ball(g, 6);
        const auto run = first_passage_levels(ball, FieldWeights{field}, 6);
        for (std::uint32_t n : {1u, 4u, 6u}) {
            double best = infinity;
            for (const auto& v : ball.layer(n)) best = std::min(best, point_to_point(g, field, g.root(), v).value);
            EXPECT_EQ(run.level(n), best) << g.name() << " n=" << n;
        }
    }
}

TEST(Levels, MonotoneAndGrowthBound) {
    for (const AnyGraph& g : {AnyGraph(DAryTree(2)), AnyGraph(LamplighterN{}), AnyGraph(HyperbolicTiling(3, 7))}) {
        const auto ball = build_ball(g, 7);
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const WeightField field(seed, u01);
            const auto run = first_passage_levels(ball, FieldWeights{field}, 7);
            for (std::uint32_t k = 1; k < 7; ++k) EXPECT_LE(run.level(k), run.level(k + 1));
        }
    }
}

TEST(Levels, OptimalPathIsValid) {
    for (const AnyGraph& g : {AnyGraph(Grid2D{}), AnyGraph(Heisenberg{}), AnyGraph(HyperbolicTiling(4, 5))}) {
        const auto ball = build_ball(g, 6);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const WeightField field(seed, exp1);
            const auto run = first_passage_levels(ball, FieldWeights{field}, 6, true);
            ASSERT_TRUE(run.optimal_path);
            const auto& path = *run.optimal_path;
            EXPECT_TRUE(is_simple(path));
            EXPECT_EQ(path.front(), g.root());
            EXPECT_EQ(path.back(), run.argmin_vertices.back());
            EXPECT_EQ(ball.depth(static_cast<std::uint32_t>(ball.find(path.back()))), 6u);
            const double ulp = std::nextafter(run.level(6), infinity) - run.level(6);
            EXPECT_NEAR(path_weight(field, path), run.level(6), ulp * static_cast<double>(path.size()));
        }
    }
}

// Restricting the sweep to a sub-copy can only increase level minima.
TEST(Levels, SubgraphRestrictionDoesNotDecrease) {
    const auto ball = build_ball(DAryTree(2), 6);
    const auto under_zero = [](const VertexKey& v) { return v.bytes().empty() || v.bytes()[0] == 0; };
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const WeightField field(seed, u01);
        const auto run = first_passage_levels(ball, FieldWeights{field}, 6);
        const auto whole = restricted_levels(ball, field, [](const VertexKey&) { return true; });
        const auto sub = restricted_levels(ball, field, under_zero);
        for (std::uint32_t k = 1; k <= 6; ++k) {
            EXPECT_EQ(run.level(k), whole[k - 1]);
            EXPECT_GE(sub[k - 1], run.level(k));
        }
    }
}

TEST(Levels, Errors) {
    const WeightField field(1, u01);
    EXPECT_THROW(first_passage_levels(DAryTree(2), field, 30, false, 10000), resource_error);
    const auto ball = build_ball(DAryTree(2), 3);
    EXPECT_THROW(first_passage_levels(ball, FieldWeights{field}, 4), contract_error);
    EXPECT_THROW(first_passage_levels(ball, FieldWeights{field}, 0), contract_error);
}

TEST(PointToPoint, Examples) {
    const WeightField one(1, WeightLaw{ConstantLaw{1.0}});
    EXPECT_EQ(point_to_point(PathGraph{}, one, PathGraph{}.root(), PathGraph::key(7)).value, 7.0);
    const auto ball = build_ball(DAryTree(2), 4);
    for (const auto& v : ball.layer(4)) EXPECT_EQ(point_to_point(DAryTree(2), one, VertexKey{}, v).value, 4.0);
}

TEST(PointToPoint, TreeValueIsSumAlongUniquePath) {
    const DAryTree tree(2);
    const auto ball = build_ball(tree, 4);
    const WeightField field(5, WeightLaw{UniformLaw{0.5, 1.5}});
    for (const auto& v : ball.layer(4)) {
        std::vector<VertexKey> path;
        for (std::size_t len = 0; len <= v.size(); ++len) path.push_back(VertexKey(v.bytes().substr(0, len)));
        const double expected = path_weight(field, path);
        EXPECT_DOUBLE_EQ(point_to_point(tree, field, VertexKey{}, v).value, expected);
        EXPECT_DOUBLE_EQ(brute_force_p2p(tree, field, VertexKey{}, v, 4), expected);
    }
}

TEST(PointToPoint, HeisenbergAgainstBruteForce) {
    const Heisenberg g;
    const auto target = Heisenberg::encode({1, 1, 1});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const WeightField field(seed, exp1);
        const auto exact = point_to_point(g, field, g.root(), target);
        const double brute = brute_force_p2p(g, field, g.root(), target, 6);
        EXPECT_GE(brute, exact.value);
        ASSERT_FALSE(exact.path.empty());
        const auto around = build_ball(g, 6);
        const bool inside = std::all_of(exact.path.begin(), exact.path.end(), [&](const VertexKey& v) { return around.contains(v); });
        if (inside) {
            EXPECT_EQ(brute, exact.value) << "seed " << seed;
        }
    }
}

TEST(PointToPoint, GridAgainstBruteForce) {
    const Grid2D g;
    const auto target = Grid2D::key(2, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const WeightField field(seed, WeightLaw{UniformLaw{0.5, 1.5}});
        // weight ratio 3 and distance 3: optimal paths have at most 9 edges, radius 6 contains them all
        EXPECT_EQ(point_to_point(g, field, g.root(), target).value, brute_force_p2p(g, field, g.root(), target, 6));
    }
}

TEST(PointToPoint, AdjacentTargetConstantLaw) {
    const WeightField one(1, WeightLaw{ConstantLaw{1.0}});
    for (const AnyGraph& g : {AnyGraph(Heisenberg{}), AnyGraph(LamplighterN{}), AnyGraph(HyperbolicTiling(3, 7))}) {
        const auto next = g.neighbors(g.root()).front().to;
        EXPECT_EQ(brute_force_p2p(g, one, g.root(), next, 2), 1.0);
        EXPECT_EQ(point_to_point(g, one, g.root(), next).value, 1.0);
    }
}

TEST(PointToPoint, SettledCapAndUnreachable) {
    const WeightField field(1, u01);
    EXPECT_THROW(point_to_point(Grid2D{}, field, Grid2D{}.root(), Grid2D::key(60, 60), 100), resource_error);
    EXPECT_THROW(point_to_point(Grid2D{}, field, Grid2D{}.root(), Grid2D{}.root()), contract_error);

    // find a disconnected 2-regular multigraph by independent union-find
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto mg = realize_random_regular(2, 6, seed);
        std::vector<std::uint32_t> parent(6);
        std::iota(parent.begin(), parent.end(), 0u);
        std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (const auto& e : mg.edges) parent[find(e.u)] = find(e.v);
        for (std::uint32_t x = 1; x < 6; ++x) {
            if (find(x) == find(0)) continue;
            const RandomRegular g(std::make_shared<const RegularMultigraph>(mg));
            EXPECT_TRUE(std::isinf(point_to_point(g, field, g.root(), RandomRegular::key(x)).value));
            return;
        }
    }
    FAIL() << "no disconnected instance found";
}

TEST(BruteForce, Examples) {
    const WeightField one(1, WeightLaw{ConstantLaw{1.0}});
    EXPECT_EQ(brute_force_level(DAryTree(2), one, 2), 2.0);

    const WeightField field(8, exp1);
    const double sum = field.sample(PathGraph::key(0), PathGraph::key(1)) +
                       field.sample(PathGraph::key(1), PathGraph::key(2)) +
                       field.sample(PathGraph::key(2), PathGraph::key(3));
    EXPECT_EQ(brute_force_level(PathGraph{}, field, 3), sum);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const WeightField f(seed, u01);
        EXPECT_EQ(brute_force_level(Grid2D{}, f, 3), first_passage_levels(Grid2D{}, f, 3).level(3));
    }
}

TEST(BruteForce, Guards) {
    const WeightField field(1, u01);
    EXPECT_THROW(brute_force_level(DAryTree(2), field, 5), resource_error);
    EXPECT_THROW(brute_force_level(DAryTree(20), field, 2), resource_error);
    EXPECT_THROW(brute_force_p2p(Grid2D{}, field, Grid2D{}.root(), Grid2D::key(1, 0), 7), resource_error);
    EXPECT_THROW(brute_force_level(Grid2D{}, field, 4, 3), resource_error);
}
