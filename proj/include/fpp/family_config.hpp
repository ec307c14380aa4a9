#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/families.hpp"
#include "fpp/graph.hpp"

namespace fpp {

struct FamilyConfig;

struct DAryTreeSpec {
    int d = 2;
    friend bool operator==(const DAryTreeSpec&, const DAryTreeSpec&) = default;
};
struct LamplighterSpec {
    friend bool operator==(const LamplighterSpec&, const LamplighterSpec&) = default;
};
struct TilingSpec {
    int p = 3;
    int q = 7;
    friend bool operator==(const TilingSpec&, const TilingSpec&) = default;
};
struct HeisenbergSpec {
    friend bool operator==(const HeisenbergSpec&, const HeisenbergSpec&) = default;
};
struct PathSpec {
    friend bool operator==(const PathSpec&, const PathSpec&) = default;
};
struct Grid2DSpec {
    friend bool operator==(const Grid2DSpec&, const Grid2DSpec&) = default;
};
struct RandomRegularSpec {
    int d = 3;
    std::int64_t n_vertices = 0;
    std::uint64_t graph_seed = 0;
    friend bool operator==(const RandomRegularSpec&, const RandomRegularSpec&) = default;
};
struct ProductSpec {
    std::shared_ptr<const FamilyConfig> first;
    std::shared_ptr<const FamilyConfig> second;
    friend bool operator==(const ProductSpec& a, const ProductSpec& b);
};

struct FamilyConfig {
    std::variant<DAryTreeSpec, LamplighterSpec, TilingSpec, ProductSpec, HeisenbergSpec, PathSpec, Grid2DSpec,
                 RandomRegularSpec>
        variant;

    friend bool operator==(const FamilyConfig&, const FamilyConfig&) = default;
};

inline bool operator==(const ProductSpec& a, const ProductSpec& b) {
    const auto same = [](const auto& x, const auto& y) { return (!x && !y) || (x && y && *x == *y); };
    return same(a.first, b.first) && same(a.second, b.second);
}

inline FamilyConfig make_product(FamilyConfig first, FamilyConfig second) {
    return FamilyConfig{ProductSpec{std::make_shared<const FamilyConfig>(std::move(first)),
                                    std::make_shared<const FamilyConfig>(std::move(second))}};
}

// Short identifier without commas, used in CSV rows and reports.
inline std::string describe(const FamilyConfig& f) {
    struct Visitor {
        std::string operator()(const DAryTreeSpec& s) const { return "dary_tree(d=" + std::to_string(s.d) + ")"; }
        std::string operator()(const LamplighterSpec&) const { return "lamplighter_n"; }
        std::string operator()(const TilingSpec& s) const {
            return "hyperbolic_tiling(p=" + std::to_string(s.p) + ";q=" + std::to_string(s.q) + ")";
        }
        std::string operator()(const ProductSpec& s) const {
            return "product(" + (s.first ? describe(*s.first) : "?") + "x" + (s.second ? describe(*s.second) : "?") +
                   ")";
        }
        std::string operator()(const HeisenbergSpec&) const { return "heisenberg"; }
        std::string operator()(const PathSpec&) const { return "path"; }
        std::string operator()(const Grid2DSpec&) const { return "grid2d"; }
        std::string operator()(const RandomRegularSpec& s) const {
            return "random_regular(d=" + std::to_string(s.d) + ";n=" + std::to_string(s.n_vertices) +
                   ";graph_seed=" + std::to_string(s.graph_seed) + ")";
        }
    };
    return std::visit(Visitor{}, f.variant);
}

// Every parameter problem, prefixed by `where`.
inline std::vector<std::string> validate(const FamilyConfig& f, const std::string& where = "family") {
    std::vector<std::string> problems;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DAryTreeSpec>) {
                if (s.d < 2 || s.d > 255) problems.push_back(where + ".d: dary_tree requires 2 <= d <= 255");
            } else if constexpr (std::is_same_v<S, TilingSpec>) {
                if (s.p < 3 || s.q < 3 || (s.p - 2) * (s.q - 2) <= 4)
                    problems.push_back(where + ": hyperbolic_tiling requires p, q >= 3 and 1/p + 1/q < 1/2 (got p=" +
                                       std::to_string(s.p) + ", q=" + std::to_string(s.q) + ")");
            } else if constexpr (std::is_same_v<S, RandomRegularSpec>) {
                if (s.d < 2) problems.push_back(where + ".d: random_regular requires d >= 2");
                if (s.n_vertices < 1 || s.n_vertices > (1LL << 31))
                    problems.push_back(where + ".n_vertices: must be in [1, 2^31]");
                else if ((static_cast<std::int64_t>(s.d) * s.n_vertices) % 2 != 0)
                    problems.push_back(where + ": random_regular requires d * n_vertices even");
            } else if constexpr (std::is_same_v<S, ProductSpec>) {
                if (!s.first || !s.second) {
                    problems.push_back(where + ": product needs two factors");
                } else {
                    for (const auto* part : {s.first.get(), s.second.get()}) {
                        if (std::holds_alternative<RandomRegularSpec>(part->variant))
                            problems.push_back(where + ": random_regular cannot be a product factor");
                    }
                    auto a = validate(*s.first, where + ".first");
                    auto b = validate(*s.second, where + ".second");
                    problems.insert(problems.end(), a.begin(), a.end());
                    problems.insert(problems.end(), b.begin(), b.end());
                }
            }
        },
        f.variant);
    return problems;
}

// Instantiates the family. `max_vertices` bounds lazily grown state (tilings).
inline AnyGraph make_graph(const FamilyConfig& f, std::size_t max_vertices = 5'000'000) {
    if (auto problems = validate(f); !problems.empty()) throw config_error(std::move(problems));
    struct Visitor {
        std::size_t budget;
        AnyGraph operator()(const DAryTreeSpec& s) const { return DAryTree(s.d); }
        AnyGraph operator()(const LamplighterSpec&) const { return LamplighterN{}; }
        AnyGraph operator()(const TilingSpec& s) const { return HyperbolicTiling(s.p, s.q, budget); }
        AnyGraph operator()(const ProductSpec& s) const {
            return ProductGraph(make_graph(*s.first, budget), make_graph(*s.second, budget));
        }
        AnyGraph operator()(const HeisenbergSpec&) const { return Heisenberg{}; }
        AnyGraph operator()(const PathSpec&) const { return PathGraph{}; }
        AnyGraph operator()(const Grid2DSpec&) const { return Grid2D{}; }
        AnyGraph operator()(const RandomRegularSpec& s) const {
            return RandomRegular(static_cast<std::uint32_t>(s.d), static_cast<std::uint32_t>(s.n_vertices), s.graph_seed);
        }
    };
    return std::visit(Visitor{max_vertices}, f.variant);
}

}  // namespace fpp
