#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fpp/vertex_key.hpp"

namespace fpp {

// One incidence of a vertex: the far endpoint plus the multiplicity index of
// the edge (0 outside multigraphs). A self-loop appears once.
struct Arc {
    VertexKey to;
    std::uint32_t multiplicity = 0;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

// A rooted, locally finite, undirected graph given implicitly by its root and
// a deterministic neighbour enumeration. neighbors() returns arcs sorted by
// (key, multiplicity) and is symmetric.
template <class G>
concept RootedGraph = requires(const G& g, const VertexKey& v) {
    { g.root() } -> std::convertible_to<VertexKey>;
    { g.neighbors(v) } -> std::convertible_to<std::vector<Arc>>;
    { g.name() } -> std::convertible_to<std::string>;
    { g.format(v) } -> std::convertible_to<std::string>;
};

// Type-erased RootedGraph with shared, immutable (or internally synchronized)
// state. Cheap to copy.
class AnyGraph {
public:
    template <RootedGraph G>
        requires(!std::same_as<std::remove_cvref_t<G>, AnyGraph>)
    AnyGraph(G graph) : self_(std::make_shared<Model<G>>(std::move(graph))) {}

    VertexKey root() const { return self_->root(); }
    std::vector<Arc> neighbors(const VertexKey& v) const { return self_->neighbors(v); }
    std::string name() const { return self_->name(); }
    std::string format(const VertexKey& v) const { return self_->format(v); }

private:
    struct Concept {
        virtual ~Concept() = default;
        virtual VertexKey root() const = 0;
        virtual std::vector<Arc> neighbors(const VertexKey& v) const = 0;
        virtual std::string name() const = 0;
        virtual std::string format(const VertexKey& v) const = 0;
    };

    template <class G>
    struct Model final : Concept {
        explicit Model(G g) : graph(std::move(g)) {}
        VertexKey root() const override { return graph.root(); }
        std::vector<Arc> neighbors(const VertexKey& v) const override { return graph.neighbors(v); }
        std::string name() const override { return graph.name(); }
        std::string format(const VertexKey& v) const override { return graph.format(v); }
        G graph;
    };

    std::shared_ptr<const Concept> self_;
};

static_assert(RootedGraph<AnyGraph>);

}  // namespace fpp
