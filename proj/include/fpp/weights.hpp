#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/hash.hpp"
#include "fpp/vertex_key.hpp"

namespace fpp {

struct ConstantLaw {
    double c = 1.0;
    friend bool operator==(const ConstantLaw&, const ConstantLaw&) = default;
};
struct UniformLaw {
    double a = 0.0;
    double b = 1.0;
    friend bool operator==(const UniformLaw&, const UniformLaw&) = default;
};
struct ExponentialLaw {
    double rate = 1.0;
    friend bool operator==(const ExponentialLaw&, const ExponentialLaw&) = default;
};
// delta with probability 1 - p_one, delta + 1 with probability p_one.
struct ShiftedBernoulliLaw {
    double delta = 0.1;
    double p_one = 0.5;
    friend bool operator==(const ShiftedBernoulliLaw&, const ShiftedBernoulliLaw&) = default;
};

struct WeightLaw {
    std::variant<ConstantLaw, UniformLaw, ExponentialLaw, ShiftedBernoulliLaw> variant;
    friend bool operator==(const WeightLaw&, const WeightLaw&) = default;
};

struct LawBounds {
    double mean;                    // E X_e
    std::optional<double> as_bound; // K with X_e <= K a.s., if the support is bounded
};

inline std::vector<std::string> validate(const WeightLaw& law, const std::string& where = "law") {
    std::vector<std::string> problems;
    const auto finite = [](double x) { return std::isfinite(x); };
    std::visit(
        [&](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ConstantLaw>) {
                if (!(finite(l.c) && l.c > 0)) problems.push_back(where + ".c: constant law requires c > 0");
            } else if constexpr (std::is_same_v<L, UniformLaw>) {
                if (!(finite(l.a) && finite(l.b) && l.a >= 0 && l.a < l.b))
                    problems.push_back(where + ": uniform law requires 0 <= a < b");
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                if (!(finite(l.rate) && l.rate > 0)) problems.push_back(where + ".rate: exponential law requires rate > 0");
            } else {
                if (!(finite(l.delta) && l.delta > 0))
                    problems.push_back(where + ".delta: shifted_bernoulli requires delta > 0");
                if (!(l.p_one >= 0 && l.p_one <= 1))
                    problems.push_back(where + ".p_one: shifted_bernoulli requires 0 <= p_one <= 1");
            }
        },
        law.variant);
    return problems;
}

inline LawBounds law_bounds(const WeightLaw& law) {
    struct Visitor {
        LawBounds operator()(const ConstantLaw& l) const { return {l.c, l.c}; }
        LawBounds operator()(const UniformLaw& l) const { return {(l.a + l.b) / 2, l.b}; }
        LawBounds operator()(const ExponentialLaw& l) const { return {1.0 / l.rate, std::nullopt}; }
        LawBounds operator()(const ShiftedBernoulliLaw& l) const { return {l.delta + l.p_one, l.delta + 1.0}; }
    };
    return std::visit(Visitor{}, law.variant);
}

// Inverse-CDF transform of a uniform u in (0,1).
inline double transform_uniform(const WeightLaw& law, double u) {
    struct Visitor {
        double u;
        double operator()(const ConstantLaw& l) const { return l.c; }
        double operator()(const UniformLaw& l) const { return l.a + (l.b - l.a) * u; }
        double operator()(const ExponentialLaw& l) const { return -std::log1p(-u) / l.rate; }
        double operator()(const ShiftedBernoulliLaw& l) const { return u < 1.0 - l.p_one ? l.delta : l.delta + 1.0; }
    };
    return std::visit(Visitor{u}, law.variant);
}

// Cumulative distribution function; used by the distributional tests.
inline double law_cdf(const WeightLaw& law, double x) {
    struct Visitor {
        double x;
        double operator()(const ConstantLaw& l) const { return x < l.c ? 0.0 : 1.0; }
        double operator()(const UniformLaw& l) const {
            return x <= l.a ? 0.0 : (x >= l.b ? 1.0 : (x - l.a) / (l.b - l.a));
        }
        double operator()(const ExponentialLaw& l) const { return x <= 0 ? 0.0 : -std::expm1(-l.rate * x); }
        double operator()(const ShiftedBernoulliLaw& l) const {
            return x < l.delta ? 0.0 : (x < l.delta + 1.0 ? 1.0 - l.p_one : 1.0);
        }
    };
    return std::visit(Visitor{x}, law.variant);
}

inline std::string describe(const WeightLaw& law) {
    const auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    struct Visitor {
        decltype(num)& fmt;
        std::string operator()(const ConstantLaw& l) const { return "constant(c=" + fmt(l.c) + ")"; }
        std::string operator()(const UniformLaw& l) const { return "uniform(a=" + fmt(l.a) + ";b=" + fmt(l.b) + ")"; }
        std::string operator()(const ExponentialLaw& l) const { return "exponential(rate=" + fmt(l.rate) + ")"; }
        std::string operator()(const ShiftedBernoulliLaw& l) const {
            return "shifted_bernoulli(delta=" + fmt(l.delta) + ";p_one=" + fmt(l.p_one) + ")";
        }
    };
    return std::visit(Visitor{num}, law.variant);
}

// The i.i.d. field {X_e}: a pure function of (seed, law, EdgeKey). The edge
// key bytes are digested once, then combined with the seed by keyed_word; the
// resulting word becomes a uniform in (0,1) and goes through the inverse CDF.
class WeightField {
public:
    WeightField(std::uint64_t seed, WeightLaw law) : seed_(seed), law_(std::move(law)) {
        if (auto problems = validate(law_); !problems.empty()) throw config_error(std::move(problems));
    }

    std::uint64_t seed() const noexcept { return seed_; }
    const WeightLaw& law() const noexcept { return law_; }

    double uniform_at(std::uint64_t digest) const noexcept { return word_to_open_unit(keyed_word(seed_, digest)); }

    // Weight of the edge whose EdgeKey digest is `digest`.
    double at_digest(std::uint64_t digest) const { return transform_uniform(law_, uniform_at(digest)); }

    double sample(const EdgeKey& e) const { return at_digest(edge_digest(e)); }
    double sample(const VertexKey& u, const VertexKey& v, std::uint32_t multiplicity = 0) const {
        return sample(make_edge_key(u, v, multiplicity));
    }

private:
    std::uint64_t seed_;
    WeightLaw law_;
};

inline double sample_weight(const WeightField& field, const EdgeKey& e) { return field.sample(e); }

}  // namespace fpp
