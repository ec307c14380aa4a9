#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/graph.hpp"
#include "fpp/vertex_key.hpp"

namespace fpp {

inline constexpr std::size_t default_vertex_budget = 5'000'000;

class LayeredBall;

template <RootedGraph G>
LayeredBall build_ball_around(const G& graph, const VertexKey& center, std::uint32_t n,
                              std::size_t vertex_budget = default_vertex_budget);
template <RootedGraph G>
LayeredBall build_ball(const G& graph, std::uint32_t n, std::size_t vertex_budget = default_vertex_budget);

// BFS ball B_n around the root. Vertices are stored in BFS order, so each
// level set D_k is a contiguous index range. Adjacency is stored in CSR form
// and is complete inside the ball; every arc remembers the digest of its
// EdgeKey so weight evaluation never re-encodes keys.
class LayeredBall {
public:
    struct ArcRef {
        std::uint32_t to;
        std::uint32_t multiplicity;
        std::uint64_t digest;
    };

    std::uint32_t radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return keys_.size(); }
    std::size_t layer_count() const noexcept { return layer_offsets_.size() - 1; }

    const VertexKey& key(std::uint32_t i) const { return keys_[i]; }
    std::uint32_t depth(std::uint32_t i) const { return depth_[i]; }
    std::span<const VertexKey> keys() const noexcept { return keys_; }

    // D_k as a contiguous range of keys.
    std::span<const VertexKey> layer(std::uint32_t k) const {
        return std::span(keys_).subspan(layer_offsets_.at(k), layer_offsets_.at(k + 1) - layer_offsets_[k]);
    }
    std::uint32_t layer_begin(std::uint32_t k) const { return static_cast<std::uint32_t>(layer_offsets_.at(k)); }
    std::uint32_t layer_end(std::uint32_t k) const { return static_cast<std::uint32_t>(layer_offsets_.at(k + 1)); }

    std::span<const ArcRef> arcs(std::uint32_t i) const {
        return std::span(arcs_).subspan(arc_offsets_[i], arc_offsets_[i + 1] - arc_offsets_[i]);
    }
    // Flat arc index of arcs(i)[j].
    std::size_t arc_index(std::uint32_t i, std::size_t j) const { return arc_offsets_[i] + j; }
    std::size_t arc_count() const noexcept { return arcs_.size(); }

    // Index of `v`, or -1 if it is outside the ball.
    std::int64_t find(const VertexKey& v) const {
        auto it = index_.find(v);
        return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }
    bool contains(const VertexKey& v) const { return index_.contains(v); }

    template <RootedGraph G>
    friend LayeredBall build_ball(const G& graph, std::uint32_t n, std::size_t vertex_budget);
    template <RootedGraph G>
    friend LayeredBall build_ball_around(const G& graph, const VertexKey& center, std::uint32_t n,
                                         std::size_t vertex_budget);

private:
    std::uint32_t radius_ = 0;
    std::vector<VertexKey> keys_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::size_t> layer_offsets_;
    std::vector<std::size_t> arc_offsets_;
    std::vector<ArcRef> arcs_;
    std::unordered_map<VertexKey, std::uint32_t> index_;
};

// Ball of radius n around an arbitrary center.
template <RootedGraph G>
LayeredBall build_ball_around(const G& graph, const VertexKey& center, std::uint32_t n, std::size_t vertex_budget) {
    LayeredBall ball;
    ball.radius_ = n;
    ball.keys_.push_back(center);
    ball.depth_.push_back(0);
    ball.index_.emplace(center, 0);
    ball.layer_offsets_ = {0};

    std::vector<std::vector<Arc>> neighbor_lists;
    for (std::uint32_t head = 0; head < ball.keys_.size(); ++head) {
        const auto d = ball.depth_[head];
        while (ball.layer_offsets_.size() <= d) ball.layer_offsets_.push_back(head);
        neighbor_lists.push_back(graph.neighbors(ball.keys_[head]));
        if (d == n) continue;
        for (const auto& arc : neighbor_lists.back()) {
            if (ball.index_.contains(arc.to)) continue;
            if (ball.keys_.size() >= vertex_budget)
                throw resource_error("build_ball: vertex budget of " + std::to_string(vertex_budget) +
                                     " exceeded at depth " + std::to_string(d + 1));
            ball.index_.emplace(arc.to, static_cast<std::uint32_t>(ball.keys_.size()));
            ball.keys_.push_back(arc.to);
            ball.depth_.push_back(d + 1);
        }
    }
    while (ball.layer_offsets_.size() <= n + 1) ball.layer_offsets_.push_back(ball.keys_.size());

    ball.arc_offsets_.reserve(ball.keys_.size() + 1);
    ball.arc_offsets_.push_back(0);
    for (std::uint32_t i = 0; i < ball.keys_.size(); ++i) {
        for (const auto& arc : neighbor_lists[i]) {
            auto it = ball.index_.find(arc.to);
            if (it == ball.index_.end()) continue;
            const auto digest = edge_digest(make_edge_key(ball.keys_[i], arc.to, arc.multiplicity));
            ball.arcs_.push_back({it->second, arc.multiplicity, digest});
        }
        ball.arc_offsets_.push_back(ball.arcs_.size());
    }
    return ball;
}

// B_n around the root: layers are exactly the graph-distance level sets.
template <RootedGraph G>
LayeredBall build_ball(const G& graph, std::uint32_t n, std::size_t vertex_budget) {
    return build_ball_around(graph, graph.root(), n, vertex_budget);
}

}  // namespace fpp
