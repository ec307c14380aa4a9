#pragma once

// Finite-ball checks of the self-embedding property (two disjoint sub-copies
// isomorphic to the whole graph), the root-distance condition and the
// no-dead-ends condition. Everything here certifies B_n only.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/families.hpp"
#include "fpp/family_config.hpp"
#include "fpp/graph.hpp"
#include "fpp/layered_ball.hpp"

namespace fpp {

using VertexMap = std::function<VertexKey(const VertexKey&)>;

struct EmbeddingSpec {
    std::string name;
    VertexMap phi_1;
    VertexMap phi_2;
    VertexKey root_image_1;
    VertexKey root_image_2;

    const VertexMap& phi(int b) const { return b == 1 ? phi_1 : phi_2; }
    const VertexKey& root_image(int b) const { return b == 1 ? root_image_1 : root_image_2; }
};

struct VerificationReport {
    std::uint32_t radius = 0;

    std::optional<bool> disjoint_ok;
    std::optional<bool> iso_ok;
    std::optional<bool> depth_shift_ok;
    std::optional<bool> no_dead_ends_ok;
    std::optional<std::uint32_t> no_dead_ends_depth;

    std::optional<std::uint32_t> r1;
    std::optional<std::uint32_t> r2;
    std::optional<std::uint32_t> c;

    std::vector<std::string> witnesses;
    std::string caveat;

    bool property2() const { return r1 && r2 && *r1 == *r2; }

    // Folds another partial report into this one.
    VerificationReport& merge(const VerificationReport& other) {
        radius = std::max(radius, other.radius);
        const auto take = [](auto& mine, const auto& theirs) {
            if (theirs) mine = theirs;
        };
        take(disjoint_ok, other.disjoint_ok);
        take(iso_ok, other.iso_ok);
        take(depth_shift_ok, other.depth_shift_ok);
        take(no_dead_ends_ok, other.no_dead_ends_ok);
        take(no_dead_ends_depth, other.no_dead_ends_depth);
        take(r1, other.r1);
        take(r2, other.r2);
        take(c, other.c);
        witnesses.insert(witnesses.end(), other.witnesses.begin(), other.witnesses.end());
        if (caveat.empty()) caveat = other.caveat;
        return *this;
    }
};

namespace detail {

inline std::string ball_caveat(std::uint32_t n) {
    return "certified on the ball B_" + std::to_string(n) + " only";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shipped embedding specs.

// Sub-trees under the root's children 0 and 1.
inline EmbeddingSpec tree_embedding() {
    return EmbeddingSpec{"dary_tree:prepend",
                         [](const VertexKey& v) { return DAryTree::prepend(v, 0); },
                         [](const VertexKey& v) { return DAryTree::prepend(v, 1); },
                         DAryTree::prepend(VertexKey{}, 0), DAryTree::prepend(VertexKey{}, 1)};
}

namespace detail {

// Copy of the lamplighter on positions > shift with lamps 1..shift set to
// `fixed` (bit i-1 of `fixed` is lamp i).
inline LampState shift_lamps(const LampState& s, std::uint32_t shift, std::uint32_t fixed) {
    LampState out;
    for (std::uint32_t i = 1; i <= shift; ++i)
        if (fixed & (1u << (i - 1))) out.lit.push_back(i);
    for (auto p : s.lit) out.lit.push_back(p + shift);
    out.position = s.position + shift;
    return out;
}

}  // namespace detail

// Copy 1 keeps lamps 1 and 2 off and lives on positions >= 3; copy 2 has lamp
// 1 on and lives on positions >= 2. Both root images, (off; 3) and
// (lamp 1; 2), are at distance 2, and both maps shift the word length by
// exactly 2.
inline EmbeddingSpec lamplighter_embedding() {
    const auto phi_1 = [](const VertexKey& v) {
        return LamplighterN::encode(detail::shift_lamps(LamplighterN::decode(v), 2, 0));
    };
    const auto phi_2 = [](const VertexKey& v) {
        return LamplighterN::encode(detail::shift_lamps(LamplighterN::decode(v), 1, 1));
    };
    const auto root = LamplighterN{}.root();
    return EmbeddingSpec{"lamplighter_n:shift", phi_1, phi_2, phi_1(root), phi_2(root)};
}

// The lamp-1-off copy on positions >= 2 composed with the automorphism that
// toggles lamp 2: root images (lamp 2; 2) and (lamp 1; 2). A valid pair of
// disjoint induced copies with R_1 = R_2 = 2, but the first map does not
// shift word length uniformly (kept for comparison; see depth-shift check).
inline EmbeddingSpec lamplighter_xor_embedding() {
    const auto phi_1 = [](const VertexKey& v) {
        return LamplighterN::encode(LamplighterN::toggled(detail::shift_lamps(LamplighterN::decode(v), 1, 0), 2));
    };
    const auto phi_2 = [](const VertexKey& v) {
        return LamplighterN::encode(detail::shift_lamps(LamplighterN::decode(v), 1, 1));
    };
    const auto root = LamplighterN{}.root();
    return EmbeddingSpec{"lamplighter_n:xor", phi_1, phi_2, phi_1(root), phi_2(root)};
}

// G x H with G carrying `inner`: the maps act on the G coordinate only.
inline EmbeddingSpec product_embedding(const EmbeddingSpec& inner, const VertexKey& second_root) {
    const auto lift = [](VertexMap phi) {
        return [phi = std::move(phi)](const VertexKey& v) {
            auto [a, b] = ProductGraph::split(v);
            return ProductGraph::pair(phi(a), b);
        };
    };
    return EmbeddingSpec{"product(" + inner.name + "xid)", lift(inner.phi_1), lift(inner.phi_2),
                         ProductGraph::pair(inner.root_image_1, second_root),
                         ProductGraph::pair(inner.root_image_2, second_root)};
}

// The embedding shipped for a family, if any.
inline std::optional<EmbeddingSpec> shipped_embedding(const FamilyConfig& family) {
    if (std::holds_alternative<DAryTreeSpec>(family.variant)) return tree_embedding();
    if (std::holds_alternative<LamplighterSpec>(family.variant)) return lamplighter_embedding();
    if (const auto* p = std::get_if<ProductSpec>(&family.variant)) {
        if (!p->first || !p->second) return std::nullopt;
        auto inner = shipped_embedding(*p->first);
        if (!inner) return std::nullopt;
        return product_embedding(*inner, make_graph(*p->second).root());
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

// phi_1(B_n) and phi_2(B_n) do not intersect.
template <RootedGraph G>
VerificationReport verify_disjoint(const G& graph, const EmbeddingSpec& emb, std::uint32_t n,
                                   std::size_t vertex_budget = default_vertex_budget) {
    const auto ball = build_ball(graph, n, vertex_budget);
    VerificationReport report;
    report.radius = n;
    report.caveat = detail::ball_caveat(n);
    std::unordered_map<VertexKey, std::uint32_t> first_images;
    for (std::uint32_t i = 0; i < ball.size(); ++i) first_images.emplace(emb.phi_1(ball.key(i)), i);
    report.disjoint_ok = true;
    for (std::uint32_t i = 0; i < ball.size(); ++i) {
        const auto image = emb.phi_2(ball.key(i));
        if (auto it = first_images.find(image); it != first_images.end()) {
            report.disjoint_ok = false;
            report.witnesses.push_back("disjointness: " + graph.format(image) + " = phi_1(" +
                                       graph.format(ball.key(it->second)) + ") = phi_2(" + graph.format(ball.key(i)) +
                                       ")");
            break;
        }
    }
    return report;
}

enum class IsomorphismMode { induced, subgraph };

// For both maps: injective on B_n, phi(root) equals the declared root image,
// u ~ v implies phi(u) ~ phi(v), and (induced mode) phi(u) ~ phi(v) implies
// u ~ v for u, v in B_n.
template <RootedGraph G>
VerificationReport verify_isomorphism(const G& graph, const EmbeddingSpec& emb, std::uint32_t n,
                                      IsomorphismMode mode = IsomorphismMode::induced,
                                      std::size_t vertex_budget = default_vertex_budget) {
    const auto ball = build_ball(graph, n, vertex_budget);
    VerificationReport report;
    report.radius = n;
    report.caveat = detail::ball_caveat(n);
    report.iso_ok = true;
    const auto fail = [&](std::string what) {
        report.iso_ok = false;
        report.witnesses.push_back("isomorphism: " + std::move(what));
    };

    for (int b = 1; b <= 2 && *report.iso_ok; ++b) {
        const auto& phi = emb.phi(b);
        const std::string tag = "phi_" + std::to_string(b);
        if (phi(graph.root()) != emb.root_image(b)) {
            fail(tag + "(root) = " + graph.format(phi(graph.root())) + " differs from the declared root image " +
                 graph.format(emb.root_image(b)));
            break;
        }
        std::vector<VertexKey> image(ball.size());
        std::unordered_map<VertexKey, std::uint32_t> preimage;
        for (std::uint32_t i = 0; i < ball.size() && *report.iso_ok; ++i) {
            image[i] = phi(ball.key(i));
            auto [it, fresh] = preimage.emplace(image[i], i);
            if (!fresh)
                fail(tag + " not injective: " + graph.format(ball.key(it->second)) + " and " +
                     graph.format(ball.key(i)) + " both map to " + graph.format(image[i]));
        }
        for (std::uint32_t u = 0; u < ball.size() && *report.iso_ok; ++u) {
            const auto image_arcs = graph.neighbors(image[u]);
            std::unordered_set<VertexKey> image_nbrs;
            for (const auto& a : image_arcs) image_nbrs.insert(a.to);
            std::unordered_set<std::uint32_t> nbrs;
            for (const auto& arc : ball.arcs(u)) {
                nbrs.insert(arc.to);
                if (!image_nbrs.contains(image[arc.to])) {
                    fail("edge " + graph.format(ball.key(u)) + " ~ " + graph.format(ball.key(arc.to)) + " maps under " +
                         tag + " to non-adjacent " + graph.format(image[u]) + ", " + graph.format(image[arc.to]));
                    break;
                }
            }
            if (mode == IsomorphismMode::subgraph || !*report.iso_ok) continue;
            for (const auto& a : image_arcs) {
                auto it = preimage.find(a.to);
                if (it == preimage.end()) continue;
                if (!nbrs.contains(it->second)) {
                    fail("image edge " + graph.format(image[u]) + " ~ " + graph.format(a.to) + " has non-adjacent " +
                         tag + "-preimages " + graph.format(ball.key(u)) + ", " + graph.format(ball.key(it->second)));
                    break;
                }
            }
        }
    }
    return report;
}

// Graph distance from the root to `target` by BFS.
template <RootedGraph G>
std::uint32_t root_distance(const G& graph, const VertexKey& target, std::size_t vertex_budget = default_vertex_budget) {
    std::unordered_map<VertexKey, std::uint32_t> dist{{graph.root(), 0}};
    std::vector<VertexKey> queue{graph.root()};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexKey u = queue[head];
        const auto d = dist[u];
        if (u == target) return d;
        for (const auto& arc : graph.neighbors(u)) {
            if (dist.contains(arc.to)) continue;
            if (dist.size() >= vertex_budget)
                throw resource_error("root_distance: vertex budget of " + std::to_string(vertex_budget) + " exceeded");
            dist.emplace(arc.to, d + 1);
            queue.push_back(arc.to);
        }
    }
    throw resource_error("root_distance: target unreachable");
}

// (R_1, R_2) = graph distances from the root to the two root images.
template <RootedGraph G>
VerificationReport verify_root_distance(const G& graph, const EmbeddingSpec& emb,
                                        std::size_t vertex_budget = default_vertex_budget) {
    VerificationReport report;
    report.r1 = root_distance(graph, emb.root_image_1, vertex_budget);
    report.r2 = root_distance(graph, emb.root_image_2, vertex_budget);
    report.c = std::max(*report.r1, *report.r2);
    if (*report.r1 < 1 || *report.r2 < 1) report.witnesses.push_back("root distance: a root image is the root itself");
    return report;
}

// dist(root, phi_b(v)) = dist(root, v) + R_b for all v in B_n. This is what
// makes a copy's level set D_m land on the whole graph's level set D_{m+R_b}.
template <RootedGraph G>
VerificationReport verify_depth_shift(const G& graph, const EmbeddingSpec& emb, std::uint32_t n,
                                      std::size_t vertex_budget = default_vertex_budget) {
    auto report = verify_root_distance(graph, emb, vertex_budget);
    report.radius = n;
    report.caveat = detail::ball_caveat(n);
    const auto ball = build_ball(graph, n + *report.c, vertex_budget);
    report.depth_shift_ok = true;
    for (int b = 1; b <= 2 && *report.depth_shift_ok; ++b) {
        const auto shift = b == 1 ? *report.r1 : *report.r2;
        for (std::uint32_t i = 0; i < ball.size() && ball.depth(i) <= n; ++i) {
            const auto image = emb.phi(b)(ball.key(i));
            const auto at = ball.find(image);
            const auto depth = at < 0 ? n + *report.c + 1 : ball.depth(static_cast<std::uint32_t>(at));
            if (depth != ball.depth(i) + shift) {
                report.depth_shift_ok = false;
                report.witnesses.push_back("depth shift: phi_" + std::to_string(b) + "(" + graph.format(ball.key(i)) +
                                           ") = " + graph.format(image) + " at distance " + std::to_string(depth) +
                                           ", expected " + std::to_string(ball.depth(i) + shift));
                break;
            }
        }
    }
    return report;
}

// Every vertex of D_k, k <= n, has a neighbour in D_{k+1}. On failure the
// witness is the smallest key at the smallest failing depth.
template <RootedGraph G>
VerificationReport verify_no_dead_ends(const G& graph, std::uint32_t n,
                                       std::size_t vertex_budget = default_vertex_budget) {
    const auto ball = build_ball(graph, n + 1, vertex_budget);
    VerificationReport report;
    report.radius = n;
    report.caveat = detail::ball_caveat(n + 1);
    report.no_dead_ends_ok = true;
    report.no_dead_ends_depth = n;
    for (std::uint32_t k = 0; k <= n; ++k) {
        std::optional<std::uint32_t> witness;
        for (auto i = ball.layer_begin(k); i < ball.layer_end(k); ++i) {
            const auto arcs = ball.arcs(i);
            const bool forward = std::any_of(arcs.begin(), arcs.end(), [&](const auto& a) { return ball.depth(a.to) == k + 1; });
            if (!forward && (!witness || ball.key(i) < ball.key(*witness))) witness = i;
        }
        if (witness) {
            report.no_dead_ends_ok = false;
            report.no_dead_ends_depth = k;
            report.witnesses.push_back("dead end at depth " + std::to_string(k) + ": " + graph.format(ball.key(*witness)));
            break;
        }
    }
    return report;
}

// Disjointness, isomorphism, depth shift and root distances in one report.
template <RootedGraph G>
VerificationReport verify_embedding(const G& graph, const EmbeddingSpec& emb, std::uint32_t n,
                                    std::size_t vertex_budget = default_vertex_budget) {
    VerificationReport report = verify_disjoint(graph, emb, n, vertex_budget);
    report.merge(verify_isomorphism(graph, emb, n, IsomorphismMode::induced, vertex_budget));
    report.merge(verify_depth_shift(graph, emb, n, vertex_budget));
    return report;
}

}  // namespace fpp
