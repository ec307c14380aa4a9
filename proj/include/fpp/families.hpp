#pragma once

// Graph families. Each type models RootedGraph; encodings are documented per
// family and are part of the determinism contract (tie-breaking and edge
// hashing both read the key bytes).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/graph.hpp"
#include "fpp/hash.hpp"
#include "fpp/vertex_key.hpp"

namespace fpp {

namespace detail {

inline std::vector<Arc> sorted_arcs(std::vector<VertexKey> keys) {
    std::sort(keys.begin(), keys.end());
    std::vector<Arc> out;
    out.reserve(keys.size());
    for (auto& k : keys) out.push_back(Arc{std::move(k), 0});
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// d-ary tree. Key = digit string over {0..d-1}, one byte per digit; root is
// the empty string. The root has degree d, every other vertex d+1.
class DAryTree {
public:
    explicit DAryTree(int d) : d_(d) {
        if (d < 2 || d > 255) throw config_error("dary_tree: d must be in [2, 255]");
    }

    int arity() const noexcept { return d_; }
    VertexKey root() const { return VertexKey{}; }
    std::string name() const { return "dary_tree(d=" + std::to_string(d_) + ")"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        check(v);
        std::vector<Arc> out;
        out.reserve(static_cast<std::size_t>(d_) + 1);
        const std::string& s = v.bytes();
        if (!s.empty()) out.push_back(Arc{VertexKey(s.substr(0, s.size() - 1)), 0});
        for (int c = 0; c < d_; ++c) {
            std::string child = s;
            child.push_back(static_cast<char>(c));
            out.push_back(Arc{VertexKey(std::move(child)), 0});
        }
        return out;
    }

    std::string format(const VertexKey& v) const {
        check(v);
        std::string out = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(static_cast<unsigned char>(v.bytes()[i]));
        }
        return out + "]";
    }

    static VertexKey prepend(const VertexKey& v, int digit) {
        std::string s(1, static_cast<char>(digit));
        s += v.bytes();
        return VertexKey(std::move(s));
    }

private:
    void check(const VertexKey& v) const {
        for (unsigned char c : v.bytes())
            if (c >= d_) throw decode_error("dary_tree: digit out of range in vertex key");
    }

    int d_;
};

// ---------------------------------------------------------------------------
// Half-line {0, 1, 2, ...} rooted at 0. Key = big-endian u64.
class PathGraph {
public:
    static VertexKey key(std::uint64_t i) { return KeyWriter{}.u64(i).finish(); }
    static std::uint64_t decode(const VertexKey& v) {
        KeyReader r(v, "path");
        auto i = r.u64();
        r.expect_end();
        return i;
    }

    VertexKey root() const { return key(0); }
    std::string name() const { return "path"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        const auto i = decode(v);
        std::vector<Arc> out;
        if (i > 0) out.push_back(Arc{key(i - 1), 0});
        out.push_back(Arc{key(i + 1), 0});
        return out;
    }

    std::string format(const VertexKey& v) const { return std::to_string(decode(v)); }
};

// ---------------------------------------------------------------------------
// Square lattice Z^2 rooted at the origin. Key = (x, y) order-preserving i64.
class Grid2D {
public:
    static VertexKey key(std::int64_t x, std::int64_t y) { return KeyWriter{}.i64(x).i64(y).finish(); }
    static std::pair<std::int64_t, std::int64_t> decode(const VertexKey& v) {
        KeyReader r(v, "grid2d");
        auto x = r.i64();
        auto y = r.i64();
        r.expect_end();
        return {x, y};
    }

    VertexKey root() const { return key(0, 0); }
    std::string name() const { return "grid2d"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        auto [x, y] = decode(v);
        return detail::sorted_arcs({key(x - 1, y), key(x + 1, y), key(x, y - 1), key(x, y + 1)});
    }

    std::string format(const VertexKey& v) const {
        auto [x, y] = decode(v);
        return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
};

// ---------------------------------------------------------------------------
// Lamplighter over N = {1, 2, ...}: finitely many lit lamps plus a marker
// position. Edges toggle the lamp under the marker or move the marker by one
// (no move left of position 1). Key = u32 count, the lit positions ascending
// (u32 each), then the marker position (u32).
struct LampState {
    std::vector<std::uint32_t> lit;  // strictly ascending, all >= 1
    std::uint32_t position = 1;      // >= 1

    friend bool operator==(const LampState&, const LampState&) = default;
};

class LamplighterN {
public:
    static VertexKey encode(const LampState& s) {
        KeyWriter w;
        w.u32(static_cast<std::uint32_t>(s.lit.size()));
        for (auto p : s.lit) w.u32(p);
        w.u32(s.position);
        return std::move(w).finish();
    }

    static LampState decode(const VertexKey& v) {
        KeyReader r(v, "lamplighter_n");
        LampState s;
        const auto count = r.u32();
        if (count > v.size()) r.fail("lamp count too large");
        s.lit.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            auto p = r.u32();
            if (p == 0 || (!s.lit.empty() && p <= s.lit.back())) r.fail("lamps not ascending and >= 1");
            s.lit.push_back(p);
        }
        s.position = r.u32();
        if (s.position == 0) r.fail("position must be >= 1");
        r.expect_end();
        return s;
    }

    static LampState toggled(LampState s, std::uint32_t lamp) {
        auto it = std::lower_bound(s.lit.begin(), s.lit.end(), lamp);
        if (it != s.lit.end() && *it == lamp)
            s.lit.erase(it);
        else
            s.lit.insert(it, lamp);
        return s;
    }

    VertexKey root() const { return encode(LampState{}); }
    std::string name() const { return "lamplighter_n"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        const LampState s = decode(v);
        std::vector<VertexKey> keys;
        keys.push_back(encode(toggled(s, s.position)));
        LampState right = s;
        ++right.position;
        keys.push_back(encode(right));
        if (s.position > 1) {
            LampState left = s;
            --left.position;
            keys.push_back(encode(left));
        }
        return detail::sorted_arcs(std::move(keys));
    }

    std::string format(const VertexKey& v) const {
        const LampState s = decode(v);
        std::string out = "({";
        for (std::size_t i = 0; i < s.lit.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(s.lit[i]);
        }
        return out + "};" + std::to_string(s.position) + ")";
    }
};

// ---------------------------------------------------------------------------
// Discrete Heisenberg group. (a, b, c) is the matrix
//   [1 a c]
//   [0 1 b]
//   [0 0 1]
// so (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b'). Neighbours are right
// multiplications by x = (1,0,0), y = (0,1,0) and their inverses:
//   x^{+-1}: (a+-1, b, c)      y^{+-1}: (a, b+-1, c+-a)
struct HeisenbergElement {
    std::int64_t a = 0, b = 0, c = 0;
    friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

class Heisenberg {
public:
    static VertexKey encode(const HeisenbergElement& g) { return KeyWriter{}.i64(g.a).i64(g.b).i64(g.c).finish(); }
    static HeisenbergElement decode(const VertexKey& v) {
        KeyReader r(v, "heisenberg");
        HeisenbergElement g;
        g.a = r.i64();
        g.b = r.i64();
        g.c = r.i64();
        r.expect_end();
        return g;
    }

    VertexKey root() const { return encode({}); }
    std::string name() const { return "heisenberg"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        const auto g = decode(v);
        return detail::sorted_arcs({encode({g.a + 1, g.b, g.c}), encode({g.a - 1, g.b, g.c}),
                                    encode({g.a, g.b + 1, g.c + g.a}), encode({g.a, g.b - 1, g.c - g.a})});
    }

    std::string format(const VertexKey& v) const {
        const auto g = decode(v);
        return "(" + std::to_string(g.a) + "," + std::to_string(g.b) + "," + std::to_string(g.c) + ")";
    }
};

// ---------------------------------------------------------------------------
// Cartesian product G x H. Key = u32 length of the G key, G key, H key.
class ProductGraph {
public:
    ProductGraph(AnyGraph first, AnyGraph second) : first_(std::move(first)), second_(std::move(second)) {}

    static VertexKey pair(const VertexKey& a, const VertexKey& b) {
        return KeyWriter{}.u32(static_cast<std::uint32_t>(a.size())).raw(a.bytes()).raw(b.bytes()).finish();
    }
    static std::pair<VertexKey, VertexKey> split(const VertexKey& v) {
        KeyReader r(v, "product");
        const auto n = r.u32();
        VertexKey a(std::string(r.raw(n)));
        VertexKey b(std::string(r.rest()));
        return {std::move(a), std::move(b)};
    }

    const AnyGraph& first() const noexcept { return first_; }
    const AnyGraph& second() const noexcept { return second_; }

    VertexKey root() const { return pair(first_.root(), second_.root()); }
    std::string name() const { return "product(" + first_.name() + "x" + second_.name() + ")"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        auto [a, b] = split(v);
        std::vector<Arc> out;
        for (auto& arc : first_.neighbors(a)) out.push_back(Arc{pair(arc.to, b), arc.multiplicity});
        for (auto& arc : second_.neighbors(b)) out.push_back(Arc{pair(a, arc.to), arc.multiplicity});
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string format(const VertexKey& v) const {
        auto [a, b] = split(v);
        return "<" + first_.format(a) + "|" + second_.format(b) + ">";
    }

private:
    AnyGraph first_;
    AnyGraph second_;
};

// ---------------------------------------------------------------------------
// Regular {p,q} tiling (p-gonal faces, q at each vertex), built layer by layer
// from the root. Layer L+1 is the corona of faces glued to the boundary cycle
// of layers 0..L: going around the boundary, every vertex that still lacks
// edges emits q - deg spokes; between two consecutive spokes a new p-gon is
// closed using the boundary path between their bases, the two spokes and
// p - g - 2 new outer edges (g = boundary edges between the bases). A face
// with no outer edge makes its two spokes share an endpoint. The new outer
// vertices, in order, are the next boundary cycle.
//
// Key = (construction layer u32, index within layer u32). For p = 3 the
// construction layers coincide with graph distance; for p > 3 they do not,
// and build_ball's BFS is what defines D_n. Layers are grown lazily under a
// mutex, so neighbors() is safe to call concurrently.
class HyperbolicTiling {
public:
    HyperbolicTiling(int p, int q, std::size_t max_vertices = 5'000'000)
        : p_(p), q_(q), state_(std::make_shared<State>()) {
        if (p < 3 || q < 3 || (p - 2) * (q - 2) <= 4)
            throw config_error("hyperbolic_tiling: need 1/p + 1/q < 1/2");
        state_->max_vertices = max_vertices;
        state_->adjacency.emplace_back();
        state_->layer_start = {0, 1};
        state_->boundary = {0};
    }

    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }

    static VertexKey key(std::uint32_t layer, std::uint32_t index) { return KeyWriter{}.u32(layer).u32(index).finish(); }

    VertexKey root() const { return key(0, 0); }
    std::string name() const { return "hyperbolic_tiling(p=" + std::to_string(p_) + ";q=" + std::to_string(q_) + ")"; }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        KeyReader r(v, "hyperbolic_tiling");
        const auto layer = r.u32();
        const auto index = r.u32();
        r.expect_end();
        if (layer > (1u << 20)) r.fail("layer out of range");

        std::vector<VertexKey> keys;
        {
            std::lock_guard lock(state_->mutex);
            grow_to(layer + 1);
            const auto& starts = state_->layer_start;
            if (index >= starts[layer + 1] - starts[layer]) r.fail("index out of range");
            const auto id = starts[layer] + index;
            for (auto w : state_->adjacency[id]) keys.push_back(key_of(w));
        }
        return detail::sorted_arcs(std::move(keys));
    }

    std::string format(const VertexKey& v) const {
        KeyReader r(v, "hyperbolic_tiling");
        const auto layer = r.u32();
        const auto index = r.u32();
        r.expect_end();
        return "L" + std::to_string(layer) + "#" + std::to_string(index);
    }

    // Number of vertices in construction layer `layer` (grows the tiling).
    std::size_t layer_size(std::uint32_t layer) const {
        std::lock_guard lock(state_->mutex);
        grow_to(layer);
        return state_->layer_start[layer + 1] - state_->layer_start[layer];
    }

private:
    struct State {
        std::mutex mutex;
        std::vector<std::vector<std::uint32_t>> adjacency;
        std::vector<std::uint32_t> layer_start;  // layer L = [start[L], start[L+1])
        std::vector<std::uint32_t> boundary;     // outermost layer, cyclic order
        std::size_t max_vertices = 0;
    };

    VertexKey key_of(std::uint32_t id) const {
        const auto& starts = state_->layer_start;
        const auto it = std::upper_bound(starts.begin(), starts.end(), id);
        const auto layer = static_cast<std::uint32_t>(it - starts.begin() - 1);
        return key(layer, id - starts[layer]);
    }

    // Ensures construction layers 0..layer exist. Caller holds the mutex.
    void grow_to(std::uint32_t layer) const {
        while (state_->layer_start.size() - 1 <= layer) add_layer();
    }

    void add_layer() const {
        State& s = *state_;
        const auto& boundary = s.boundary;
        const std::size_t len = boundary.size();

        std::vector<std::size_t> spoke_base;  // boundary position of each spoke
        for (std::size_t i = 0; i < len; ++i) {
            const auto deg = s.adjacency[boundary[i]].size();
            if (deg > static_cast<std::size_t>(q_)) throw invariant_error("hyperbolic_tiling: vertex degree exceeds q");
            spoke_base.insert(spoke_base.end(), static_cast<std::size_t>(q_) - deg, i);
        }
        const std::size_t spokes = spoke_base.size();
        if (spokes == 0) throw invariant_error("hyperbolic_tiling: closed boundary");

        // outer[j]: outer edges of the face between spoke j and spoke j+1.
        std::vector<int> outer(spokes);
        bool any_open = false;
        for (std::size_t j = 0; j < spokes; ++j) {
            const auto a = spoke_base[j];
            const auto b = spoke_base[(j + 1) % spokes];
            std::size_t gap;
            if (j + 1 < spokes)
                gap = b - a;
            else if (len == 1)
                gap = 0;
            else
                gap = a == b ? len : (b + len - a) % len;
            const long t = static_cast<long>(p_) - static_cast<long>(gap) - 2;
            if (t < 0) throw invariant_error("hyperbolic_tiling: face would close inside the boundary");
            outer[j] = static_cast<int>(t);
            any_open = any_open || t > 0;
        }
        if (!any_open) throw invariant_error("hyperbolic_tiling: degenerate corona");

        // Start at a spoke whose predecessor face has an outer edge, so that
        // spoke endpoints shared through zero-length faces are contiguous.
        std::size_t start = 0;
        while (outer[(start + spokes - 1) % spokes] == 0) ++start;

        std::vector<std::uint32_t> fresh;
        const auto new_vertex = [&] {
            if (s.adjacency.size() + 1 > s.max_vertices)
                throw resource_error("hyperbolic_tiling: vertex budget of " + std::to_string(s.max_vertices) +
                                     " exceeded while growing layer " + std::to_string(s.layer_start.size() - 1));
            const auto id = static_cast<std::uint32_t>(s.adjacency.size());
            s.adjacency.emplace_back();
            fresh.push_back(id);
        };
        const auto link = [&](std::uint32_t u, std::uint32_t w) {
            s.adjacency[u].push_back(w);
            s.adjacency[w].push_back(u);
        };

        for (std::size_t k = 0; k < spokes; ++k) {
            const std::size_t j = (start + k) % spokes;
            if (k == 0 || outer[(j + spokes - 1) % spokes] > 0) new_vertex();
            link(boundary[spoke_base[j]], fresh.back());
            for (int extra = 1; extra < outer[j]; ++extra) new_vertex();
        }
        for (std::size_t k = 0; k < fresh.size(); ++k) link(fresh[k], fresh[(k + 1) % fresh.size()]);

        s.layer_start.push_back(static_cast<std::uint32_t>(s.adjacency.size()));
        s.boundary = std::move(fresh);
    }

    int p_;
    int q_;
    std::shared_ptr<State> state_;
};

// ---------------------------------------------------------------------------
// Configuration-model multigraph: d stubs per vertex, uniformly random
// perfect matching. Self-loops and parallel edges are kept; parallel copies
// between the same pair get multiplicity indices 0, 1, ... in matching order.
struct MultiEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;  // u <= v
    std::uint32_t multiplicity = 0;
    friend bool operator==(const MultiEdge&, const MultiEdge&) = default;
};

struct RegularMultigraph {
    std::uint32_t d = 0;
    std::uint32_t n_vertices = 0;
    std::vector<MultiEdge> edges;
    std::vector<std::vector<std::uint32_t>> incident;  // edge ids per vertex (loops once)

    // Degree counting multiplicity; a self-loop contributes 2.
    std::uint32_t degree(std::uint32_t x) const {
        std::uint32_t deg = 0;
        for (auto e : incident[x]) deg += edges[e].u == edges[e].v ? 2 : 1;
        return deg;
    }
};

inline RegularMultigraph realize_random_regular(std::uint32_t d, std::uint32_t n_vertices, std::uint64_t graph_seed) {
    if (d < 1 || n_vertices < 1) throw config_error("random_regular: d and n_vertices must be positive");
    if ((static_cast<std::uint64_t>(d) * n_vertices) % 2 != 0)
        throw config_error("random_regular: d * n_vertices must be even");

    std::vector<std::uint32_t> stubs;
    stubs.reserve(static_cast<std::size_t>(d) * n_vertices);
    for (std::uint32_t x = 0; x < n_vertices; ++x) stubs.insert(stubs.end(), d, x);

    SplitMix64 rng(graph_seed);
    for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[rng.below(i + 1)]);

    RegularMultigraph g;
    g.d = d;
    g.n_vertices = n_vertices;
    g.incident.resize(n_vertices);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        const auto u = std::min(stubs[i], stubs[i + 1]);
        const auto v = std::max(stubs[i], stubs[i + 1]);
        const auto id = static_cast<std::uint32_t>(g.edges.size());
        g.edges.push_back(MultiEdge{u, v, seen[{u, v}]++});
        g.incident[u].push_back(id);
        if (v != u) g.incident[v].push_back(id);
    }
    return g;
}

// RootedGraph view of a realized multigraph. Key = big-endian u32 vertex id;
// root is vertex 0.
class RandomRegular {
public:
    explicit RandomRegular(std::shared_ptr<const RegularMultigraph> graph) : graph_(std::move(graph)) {}
    RandomRegular(std::uint32_t d, std::uint32_t n_vertices, std::uint64_t graph_seed)
        : graph_(std::make_shared<const RegularMultigraph>(realize_random_regular(d, n_vertices, graph_seed))) {}

    static VertexKey key(std::uint32_t x) { return KeyWriter{}.u32(x).finish(); }
    std::uint32_t decode(const VertexKey& v) const {
        KeyReader r(v, "random_regular");
        const auto x = r.u32();
        r.expect_end();
        if (x >= graph_->n_vertices) r.fail("vertex id out of range");
        return x;
    }

    const RegularMultigraph& graph() const noexcept { return *graph_; }

    VertexKey root() const { return key(0); }
    std::string name() const {
        return "random_regular(d=" + std::to_string(graph_->d) + ";n=" + std::to_string(graph_->n_vertices) + ")";
    }

    std::vector<Arc> neighbors(const VertexKey& v) const {
        const auto x = decode(v);
        std::vector<Arc> out;
        for (auto id : graph_->incident[x]) {
            const auto& e = graph_->edges[id];
            out.push_back(Arc{key(e.u == x ? e.v : e.u), e.multiplicity});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string format(const VertexKey& v) const { return std::to_string(decode(v)); }

private:
    std::shared_ptr<const RegularMultigraph> graph_;
};

}  // namespace fpp
