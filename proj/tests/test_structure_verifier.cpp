#include <map>
#include <set>

#include <gtest/gtest.h>

#include "fpp/family_config.hpp"
#include "fpp/structure_verifier.hpp"

using namespace fpp;

namespace {

// Lamplighter states as (lit bitmask, position); lamps 1..30.
using Lamp = std::pair<std::uint32_t, int>;

std::vector<Lamp> lamp_moves(const Lamp& s) {
    std::vector<Lamp> out{{s.first ^ (1u << (s.second - 1)), s.second}, {s.first, s.second + 1}};
    if (s.second > 1) out.push_back({s.first, s.second - 1});
    return out;
}

std::map<Lamp, int> lamp_distances(int n) {
    std::map<Lamp, int> dist{{{0u, 1}, 0}};
    std::vector<Lamp> frontier{{0u, 1}};
    for (int k = 1; k <= n; ++k) {
        std::vector<Lamp> next;
        for (const auto& s : frontier)
            for (const auto& t : lamp_moves(s))
                if (dist.emplace(t, k).second) next.push_back(t);
        frontier = std::move(next);
    }
    return dist;
}

// Word length in the lamplighter over N: visit every lit lamp and end at x,
// starting from position 1.
int lamp_word_length(const std::set<int>& lit, int x) {
    const int far = lit.empty() ? x : std::max(*lit.rbegin(), x);
    return static_cast<int>(lit.size()) + 2 * far - 1 - x;
}

Lamp to_mask(const VertexKey& v) {
    const auto s = LamplighterN::decode(v);
    std::uint32_t mask = 0;
    for (auto p : s.lit) mask |= 1u << (p - 1);
    return {mask, static_cast<int>(s.position)};
}

VertexKey from_mask(const Lamp& s) {
    LampState out;
    for (std::uint32_t p = 1; p <= 30; ++p)
        if (s.first & (1u << (p - 1))) out.lit.push_back(p);
    out.position = static_cast<std::uint32_t>(s.second);
    return LamplighterN::encode(out);
}

using Triple = std::array<long, 3>;

std::vector<Triple> heis_moves(const Triple& g) {
    return {{g[0] + 1, g[1], g[2]}, {g[0] - 1, g[1], g[2]}, {g[0], g[1] + 1, g[2] + g[0]}, {g[0], g[1] - 1, g[2] - g[0]}};
}

}  // namespace

TEST(WordLength, FormulaMatchesBfs) {
    const auto dist = lamp_distances(9);
    for (const auto& [s, d] : dist) {
        std::set<int> lit;
        for (int p = 1; p <= 30; ++p)
            if (s.first & (1u << (p - 1))) lit.insert(p);
        if (d <= 8) {
            EXPECT_EQ(lamp_word_length(lit, s.second), d);
        }
    }
}

TEST(Disjoint, TreePrependMaps) {
    const auto report = verify_disjoint(DAryTree(2), tree_embedding(), 6);
    EXPECT_EQ(report.disjoint_ok, true);
    EXPECT_TRUE(report.witnesses.empty());
}

TEST(Disjoint, BrokenSpecHasWitness) {
    auto emb = tree_embedding();
    emb.phi_2 = emb.phi_1;
    emb.root_image_2 = emb.root_image_1;
    const auto report = verify_disjoint(DAryTree(2), emb, 3);
    EXPECT_EQ(report.disjoint_ok, false);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_NE(report.witnesses[0].find("disjointness"), std::string::npos);
}

TEST(Disjoint, LamplighterAgainstImageSets) {
    const auto emb = lamplighter_embedding();
    std::set<Lamp> first, second;
    for (const auto& [s, d] : lamp_distances(5)) {
        first.insert(to_mask(emb.phi_1(from_mask(s))));
        second.insert(to_mask(emb.phi_2(from_mask(s))));
    }
    std::vector<Lamp> common;
    std::set_intersection(first.begin(), first.end(), second.begin(), second.end(), std::back_inserter(common));
    EXPECT_TRUE(common.empty());
    EXPECT_EQ(verify_disjoint(LamplighterN{}, emb, 5).disjoint_ok, true);
    EXPECT_EQ(verify_disjoint(LamplighterN{}, lamplighter_xor_embedding(), 5).disjoint_ok, true);
}

TEST(Isomorphism, TreePrependMaps) {
    EXPECT_EQ(verify_isomorphism(DAryTree(2), tree_embedding(), 6).iso_ok, true);
    EXPECT_EQ(verify_isomorphism(DAryTree(3), tree_embedding(), 4).iso_ok, true);
}

// Edge sets compared explicitly: {phi(u), phi(v)} for edges of B_5 against the
// edges of the graph between image vertices.
TEST(Isomorphism, LamplighterAgainstEdgeSets) {
    for (const auto& emb : {lamplighter_embedding(), lamplighter_xor_embedding()}) {
        const auto dist = lamp_distances(5);
        for (int b = 1; b <= 2; ++b) {
            std::set<std::pair<Lamp, Lamp>> mapped, induced;
            std::set<Lamp> image;
            for (const auto& [s, d] : dist) image.insert(to_mask(emb.phi(b)(from_mask(s))));
            for (const auto& [s, d] : dist)
                for (const auto& t : lamp_moves(s))
                    if (dist.count(t)) mapped.insert(std::minmax(to_mask(emb.phi(b)(from_mask(s))), to_mask(emb.phi(b)(from_mask(t)))));
            for (const auto& s : image)
                for (const auto& t : lamp_moves(s))
                    if (image.count(t)) induced.insert(std::minmax(s, t));
            EXPECT_EQ(mapped, induced) << emb.name << " phi_" << b;
            EXPECT_EQ(image.size(), dist.size());
        }
        EXPECT_EQ(verify_isomorphism(LamplighterN{}, emb, 5).iso_ok, true) << emb.name;
    }
}

TEST(Isomorphism, CorruptedMapFailsWithWitnessEdge) {
    // lamps shifted by one more than the marker: toggles no longer map to toggles
    auto emb = lamplighter_embedding();
    emb.phi_1 = [](const VertexKey& v) {
        auto s = LamplighterN::decode(v);
        for (auto& p : s.lit) p += 3;
        s.position += 2;
        return LamplighterN::encode(s);
    };
    const auto report = verify_isomorphism(LamplighterN{}, emb, 3);
    EXPECT_EQ(report.iso_ok, false);
    ASSERT_FALSE(report.witnesses.empty());
    EXPECT_NE(report.witnesses[0].find("edge"), std::string::npos);
}

// Half-line with one extra chord 10 ~ 13. Shifting by 10 preserves every
// edge of B_3 but the non-edge 0, 3 lands on the chord.
struct ChordPath {
    VertexKey root() const { return PathGraph::key(0); }
    std::vector<Arc> neighbors(const VertexKey& v) const {
        auto arcs = PathGraph{}.neighbors(v);
        const auto i = PathGraph::decode(v);
        if (i == 10) arcs.push_back({PathGraph::key(13), 0});
        if (i == 13) arcs.push_back({PathGraph::key(10), 0});
        std::sort(arcs.begin(), arcs.end());
        return arcs;
    }
    std::string name() const { return "chord_path"; }
    std::string format(const VertexKey& v) const { return PathGraph{}.format(v); }
};

TEST(Isomorphism, InducedModeIsStricterThanSubgraph) {
    const auto shift = [](std::uint64_t by) {
        return [by](const VertexKey& v) { return PathGraph::key(PathGraph::decode(v) + by); };
    };
    const EmbeddingSpec emb{"shift", shift(10), shift(20), PathGraph::key(10), PathGraph::key(20)};
    EXPECT_EQ(verify_isomorphism(ChordPath{}, emb, 3, IsomorphismMode::subgraph).iso_ok, true);
    const auto induced = verify_isomorphism(ChordPath{}, emb, 3, IsomorphismMode::induced);
    EXPECT_EQ(induced.iso_ok, false);
    ASSERT_FALSE(induced.witnesses.empty());
    EXPECT_NE(induced.witnesses[0].find("image edge"), std::string::npos);
    EXPECT_EQ(verify_isomorphism(ChordPath{}, emb, 2, IsomorphismMode::induced).iso_ok, true);
}

TEST(RootDistance, Examples) {
    const auto tree = verify_root_distance(DAryTree(2), tree_embedding());
    EXPECT_EQ(tree.r1, 1u);
    EXPECT_EQ(tree.r2, 1u);
    EXPECT_EQ(tree.c, 1u);
    EXPECT_TRUE(tree.property2());

    const auto lamp = verify_root_distance(LamplighterN{}, lamplighter_embedding());
    EXPECT_EQ(lamp.r1, 2u);
    EXPECT_EQ(lamp.r2, 2u);
    EXPECT_EQ(lamp.c, 2u);
    const auto dist = lamp_distances(4);
    const auto emb = lamplighter_embedding();
    EXPECT_EQ(dist.at(to_mask(emb.root_image_1)), 2);
    EXPECT_EQ(dist.at(to_mask(emb.root_image_2)), 2);

    const auto xor_lamp = verify_root_distance(LamplighterN{}, lamplighter_xor_embedding());
    EXPECT_EQ(xor_lamp.r1, 2u);
    EXPECT_EQ(xor_lamp.r2, 2u);

    const auto family = make_product(FamilyConfig{DAryTreeSpec{2}}, FamilyConfig{PathSpec{}});
    const auto product = verify_root_distance(make_graph(family), *shipped_embedding(family));
    EXPECT_EQ(product.r1, 1u);
    EXPECT_EQ(product.r2, 1u);
}

TEST(DepthShift, ShippedMapsShiftDepthUniformly) {
    EXPECT_EQ(verify_depth_shift(DAryTree(2), tree_embedding(), 6).depth_shift_ok, true);
    EXPECT_EQ(verify_depth_shift(LamplighterN{}, lamplighter_embedding(), 6).depth_shift_ok, true);
    const auto family = make_product(FamilyConfig{LamplighterSpec{}}, FamilyConfig{Grid2DSpec{}});
    EXPECT_EQ(verify_depth_shift(make_graph(family), *shipped_embedding(family), 4).depth_shift_ok, true);
}

// The XOR variant sends ({1}; 1), at distance 1, to (off; 2), also at
// distance 1 instead of 3.
TEST(DepthShift, XorVariantDoesNot) {
    const auto report = verify_depth_shift(LamplighterN{}, lamplighter_xor_embedding(), 3);
    EXPECT_EQ(report.depth_shift_ok, false);
    ASSERT_FALSE(report.witnesses.empty());
    const auto emb = lamplighter_xor_embedding();
    const auto image = to_mask(emb.phi_1(LamplighterN::encode({{1}, 1})));
    EXPECT_EQ(image, (Lamp{0u, 2}));
    EXPECT_EQ(lamp_distances(6).at(image), 1);
}

TEST(NoDeadEnds, TreeAndTiling) {
    const auto tree = verify_no_dead_ends(DAryTree(2), 8);
    EXPECT_EQ(tree.no_dead_ends_ok, true);
    EXPECT_EQ(tree.no_dead_ends_depth, 8u);
    EXPECT_EQ(verify_no_dead_ends(HyperbolicTiling(3, 7), 8).no_dead_ends_ok, true);
    EXPECT_EQ(verify_no_dead_ends(Grid2D{}, 8).no_dead_ends_ok, true);
}

// Every neighbour of ({1,2}; 1) is strictly closer to the root.
TEST(NoDeadEnds, LamplighterHasDeadEndAtDepthFour) {
    const auto dist = lamp_distances(9);
    int first_dead = -1;
    Lamp witness{};
    for (const auto& [s, d] : dist) {
        if (d > 8) continue;
        bool forward = false;
        for (const auto& t : lamp_moves(s)) forward = forward || (dist.count(t) && dist.at(t) == d + 1);
        if (!forward && (first_dead < 0 || d < first_dead || (d == first_dead && from_mask(s) < from_mask(witness)))) {
            first_dead = d;
            witness = s;
        }
    }
    EXPECT_EQ(first_dead, 4);
    EXPECT_EQ(witness, (Lamp{0b11u, 1}));

    const auto report = verify_no_dead_ends(LamplighterN{}, 8);
    EXPECT_EQ(report.no_dead_ends_ok, false);
    EXPECT_EQ(report.no_dead_ends_depth, 4u);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_NE(report.witnesses[0].find(LamplighterN{}.format(from_mask(witness))), std::string::npos);
}

TEST(NoDeadEnds, HeisenbergHasDeadEndAtDepthFour) {
    std::map<Triple, int> dist{{{0, 0, 0}, 0}};
    std::vector<Triple> frontier{{0, 0, 0}};
    for (int k = 1; k <= 9; ++k) {
        std::vector<Triple> next;
        for (const auto& g : frontier)
            for (const auto& h : heis_moves(g))
                if (dist.emplace(h, k).second) next.push_back(h);
        frontier = std::move(next);
    }
    std::set<int> dead_depths;
    std::set<Triple> depth4;
    for (const auto& [g, d] : dist) {
        if (d > 8) continue;
        bool forward = false;
        for (const auto& h : heis_moves(g)) forward = forward || dist.at(h) == d + 1;
        if (!forward) {
            dead_depths.insert(d);
            if (d == 4) depth4.insert(g);
        }
    }
    ASSERT_FALSE(dead_depths.empty());
    EXPECT_EQ(*dead_depths.begin(), 4);
    EXPECT_EQ(depth4, (std::set<Triple>{{0, 0, -1}, {0, 0, 1}}));

    const auto report = verify_no_dead_ends(Heisenberg{}, 8);
    EXPECT_EQ(report.no_dead_ends_ok, false);
    EXPECT_EQ(report.no_dead_ends_depth, 4u);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_NE(report.witnesses[0].find(Heisenberg{}.format(Heisenberg::encode({0, 0, -1}))), std::string::npos);
    EXPECT_EQ(verify_no_dead_ends(Heisenberg{}, 3).no_dead_ends_ok, true);
}

TEST(Report, CombinedEmbeddingChecks) {
    for (const auto& family : {FamilyConfig{DAryTreeSpec{2}}, FamilyConfig{DAryTreeSpec{3}}, FamilyConfig{LamplighterSpec{}},
                               make_product(FamilyConfig{DAryTreeSpec{2}}, FamilyConfig{PathSpec{}}),
                               make_product(FamilyConfig{LamplighterSpec{}}, FamilyConfig{DAryTreeSpec{2}})}) {
        const auto emb = shipped_embedding(family);
        ASSERT_TRUE(emb) << describe(family);
        const auto report = verify_embedding(make_graph(family), *emb, 4);
        EXPECT_EQ(report.disjoint_ok, true) << describe(family);
        EXPECT_EQ(report.iso_ok, true) << describe(family);
        EXPECT_EQ(report.depth_shift_ok, true) << describe(family);
        EXPECT_TRUE(report.property2());
        EXPECT_GE(*report.r1, 1u);
        EXPECT_EQ(*report.c, std::max(*report.r1, *report.r2));
        EXPECT_FALSE(report.caveat.empty());
        EXPECT_NE(report.caveat.find("B_4"), std::string::npos);
        EXPECT_TRUE(report.witnesses.empty());
    }
    EXPECT_FALSE(shipped_embedding(FamilyConfig{HeisenbergSpec{}}));
    EXPECT_FALSE(shipped_embedding(FamilyConfig{TilingSpec{3, 7}}));
}

TEST(Report, WrongDeclaredRootImageRejected) {
    auto emb = tree_embedding();
    emb.root_image_2 = DAryTree::prepend(VertexKey{}, 0);
    const auto report = verify_isomorphism(DAryTree(2), emb, 2);
    EXPECT_EQ(report.iso_ok, false);
    ASSERT_FALSE(report.witnesses.empty());
    EXPECT_NE(report.witnesses[0].find("root image"), std::string::npos);
}
