#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "fpp/families.hpp"
#include "fpp/statistics.hpp"
#include "fpp/weights.hpp"

using namespace fpp;

namespace {

// Distinct edges: horizontal grid edges (i, 0)-(i+1, 0).
EdgeKey edge(std::int64_t i) { return make_edge_key(Grid2D::key(i, 0), Grid2D::key(i + 1, 0)); }

std::vector<double> draw(const WeightField& field, std::size_t count, std::int64_t offset = 0) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = sample_weight(field, edge(static_cast<std::int64_t>(i) + offset));
    return out;
}

}  // namespace

TEST(SampleWeight, ConstantLaw) {
    const WeightField field(3, WeightLaw{ConstantLaw{1.0}});
    for (std::int64_t i = 0; i < 100; ++i) EXPECT_EQ(sample_weight(field, edge(i)), 1.0);
}

TEST(SampleWeight, UniformRangeAndMean) {
    const WeightField field(42, WeightLaw{UniformLaw{0.0, 1.0}});
    const auto xs = draw(field, 100000);
    for (double x : xs) {
        ASSERT_GT(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
    const auto s = summarize(xs);
    EXPECT_NEAR(s.mean, 0.5, 3 * s.se_mean);
}

TEST(SampleWeight, ExponentialInverseCdf) {
    EXPECT_NEAR(transform_uniform(WeightLaw{ExponentialLaw{1.0}}, 0.5), 0.693147, 1e-6);
    EXPECT_DOUBLE_EQ(transform_uniform(WeightLaw{ExponentialLaw{1.0}}, 0.5), std::log(2.0));
    EXPECT_DOUBLE_EQ(transform_uniform(WeightLaw{ExponentialLaw{4.0}}, 0.5), std::log(2.0) / 4);
}

TEST(SampleWeight, ShiftedBernoulliValues) {
    const WeightField field(5, WeightLaw{ShiftedBernoulliLaw{0.1, 0.5}});
    std::set<double> values;
    for (double x : draw(field, 1000)) values.insert(x);
    EXPECT_EQ(values, (std::set<double>{0.1, 1.1}));
}

TEST(SampleWeight, PositiveAtExtremeWords) {
    EXPECT_GT(word_to_open_unit(0), 0.0);
    EXPECT_LT(word_to_open_unit(~0ULL), 1.0);
    const WeightLaw u01{UniformLaw{0.0, 1.0}};
    EXPECT_GT(transform_uniform(u01, word_to_open_unit(0)), 0.0);
    EXPECT_TRUE(std::isfinite(transform_uniform(WeightLaw{ExponentialLaw{1.0}}, word_to_open_unit(~0ULL))));
}

TEST(LawBounds, Examples) {
    const auto u = law_bounds(WeightLaw{UniformLaw{0.0, 1.0}});
    EXPECT_EQ(u.mean, 0.5);
    EXPECT_EQ(u.as_bound, 1.0);
    const auto e = law_bounds(WeightLaw{ExponentialLaw{2.0}});
    EXPECT_EQ(e.mean, 0.5);
    EXPECT_FALSE(e.as_bound);
    const auto b = law_bounds(WeightLaw{ShiftedBernoulliLaw{0.1, 0.5}});
    EXPECT_DOUBLE_EQ(b.mean, 0.6);
    EXPECT_DOUBLE_EQ(*b.as_bound, 1.1);
    const auto c = law_bounds(WeightLaw{ConstantLaw{2.5}});
    EXPECT_EQ(c.mean, 2.5);
    EXPECT_EQ(c.as_bound, 2.5);
}

TEST(LawBounds, MeanMatchesSamples) {
    for (const auto& law : {WeightLaw{UniformLaw{0.5, 1.5}}, WeightLaw{ExponentialLaw{2.0}},
                            WeightLaw{ShiftedBernoulliLaw{0.25, 0.3}}}) {
        const auto s = summarize(draw(WeightField(11, law), 100000));
        const auto bounds = law_bounds(law);
        EXPECT_NEAR(s.mean, bounds.mean, 4 * s.se_mean) << describe(law);
        if (bounds.as_bound) {
            EXPECT_LE(s.max, *bounds.as_bound);
            EXPECT_GE(*bounds.as_bound, bounds.mean);
        }
    }
}

TEST(Validate, RejectsNonPositiveSupports) {
    EXPECT_FALSE(validate(WeightLaw{ConstantLaw{0.0}}).empty());
    EXPECT_FALSE(validate(WeightLaw{UniformLaw{-0.1, 1.0}}).empty());
    EXPECT_FALSE(validate(WeightLaw{UniformLaw{1.0, 1.0}}).empty());
    EXPECT_FALSE(validate(WeightLaw{ExponentialLaw{0.0}}).empty());
    EXPECT_FALSE(validate(WeightLaw{ExponentialLaw{NAN}}).empty());
    EXPECT_FALSE(validate(WeightLaw{ShiftedBernoulliLaw{0.0, 0.5}}).empty());
    EXPECT_FALSE(validate(WeightLaw{ShiftedBernoulliLaw{0.1, 1.5}}).empty());
    EXPECT_TRUE(validate(WeightLaw{UniformLaw{0.0, 1.0}}).empty());
    EXPECT_THROW(WeightField(1, WeightLaw{ExponentialLaw{-1.0}}), config_error);
}

TEST(Describe, StableNames) {
    EXPECT_EQ(describe(WeightLaw{UniformLaw{0.0, 1.0}}), "uniform(a=0;b=1)");
    EXPECT_EQ(describe(WeightLaw{ExponentialLaw{1.0}}), "exponential(rate=1)");
    EXPECT_EQ(describe(WeightLaw{ConstantLaw{0.1}}), "constant(c=0.10000000000000001)");
}

TEST(Field, DeterministicAndSymmetric) {
    const WeightField a(123, WeightLaw{ExponentialLaw{1.0}});
    const WeightField b(123, WeightLaw{ExponentialLaw{1.0}});
    SplitMix64 rng(9);
    for (int i = 0; i < 10000; ++i) {
        const auto u = Heisenberg::encode({static_cast<std::int64_t>(rng.below(50)) - 25,
                                           static_cast<std::int64_t>(rng.below(50)) - 25,
                                           static_cast<std::int64_t>(rng.below(50)) - 25});
        const auto v = Heisenberg::encode({static_cast<std::int64_t>(rng.below(50)) - 25,
                                           static_cast<std::int64_t>(rng.below(50)) - 25,
                                           static_cast<std::int64_t>(rng.below(50)) - 25});
        const double w = a.sample(u, v);
        EXPECT_EQ(w, a.sample(v, u));
        EXPECT_EQ(w, b.sample(u, v));
        EXPECT_EQ(w, a.at_digest(edge_digest(make_edge_key(v, u))));
    }
}

TEST(Field, SeedAndMultiplicityMatter) {
    const WeightLaw law{UniformLaw{0.0, 1.0}};
    const auto u = RandomRegular::key(1), v = RandomRegular::key(2);
    EXPECT_NE(WeightField(1, law).sample(u, v, 0), WeightField(1, law).sample(u, v, 1));
    EXPECT_NE(WeightField(1, law).sample(u, v), WeightField(2, law).sample(u, v));
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(derive_seed(7, i));
    EXPECT_EQ(seeds.size(), 10000u);
    EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
}

// One-sample KS against CDFs written out here, at significance 0.01.
TEST(Distribution, KolmogorovSmirnov) {
    struct Case {
        WeightLaw law;
        std::function<double(double)> cdf;
    };
    const std::vector<Case> cases{
        {WeightLaw{UniformLaw{0.0, 1.0}}, [](double x) { return std::clamp(x, 0.0, 1.0); }},
        {WeightLaw{UniformLaw{0.5, 1.5}}, [](double x) { return std::clamp(x - 0.5, 0.0, 1.0); }},
        {WeightLaw{ExponentialLaw{1.0}}, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); }},
        {WeightLaw{ExponentialLaw{3.0}}, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-3.0 * x); }},
    };
    const std::size_t count = 100000;
    const double critical = std::sqrt(-0.5 * std::log(0.01 / 2)) / std::sqrt(static_cast<double>(count));
    for (const auto& c : cases) {
        const auto xs = draw(WeightField(2024, c.law), count);
        EXPECT_LT(ks_statistic(xs, c.cdf), critical) << describe(c.law);
        EXPECT_LT(ks_statistic(xs, [&](double x) { return law_cdf(c.law, x); }), critical) << describe(c.law);
    }
    EXPECT_NEAR(ks_critical_value(count, 0.01), critical, 1e-15);
}

TEST(Distribution, ShiftedBernoulliFrequency) {
    const auto xs = draw(WeightField(3, WeightLaw{ShiftedBernoulliLaw{0.1, 0.3}}), 100000);
    const double ones = static_cast<double>(std::count(xs.begin(), xs.end(), 1.1)) / static_cast<double>(xs.size());
    EXPECT_NEAR(ones, 0.3, 4 * std::sqrt(0.3 * 0.7 / 1e5));
}

// Edges (i,0)-(i+1,0) and (i+1,0)-(i+2,0) share a vertex. Pairs are spread
// over distinct vertices so they are disjoint from each other.
TEST(Distribution, AdjacentEdgesUncorrelated) {
    const WeightField field(77, WeightLaw{UniformLaw{0.0, 1.0}});
    const std::size_t pairs = 1000000;
    std::vector<double> x(pairs), y(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto k = static_cast<std::int64_t>(3 * i);
        x[i] = sample_weight(field, edge(k));
        y[i] = sample_weight(field, edge(k + 1));
    }
    EXPECT_LT(std::abs(pearson_correlation(x, y)), 0.01);

    // vertical neighbour at the shared vertex
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto k = static_cast<std::int64_t>(i);
        y[i] = field.sample(Grid2D::key(k, 0), Grid2D::key(k, 1));
        x[i] = sample_weight(field, edge(k));
    }
    EXPECT_LT(std::abs(pearson_correlation(x, y)), 0.01);
}

TEST(Hash, SplitMixBelowIsInRangeAndRoughlyUniform) {
    SplitMix64 rng(1);
    std::vector<int> counts(7);
    for (int i = 0; i < 70000; ++i) {
        const auto r = rng.below(7);
        ASSERT_LT(r, 7u);
        ++counts[r];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
    EXPECT_EQ(rng.below(1), 0u);
}

TEST(Hash, DigestDependsOnEveryByte) {
    const std::string base(37, 'x');
    std::set<std::uint64_t> digests{hash_bytes(base)};
    for (std::size_t i = 0; i < base.size(); ++i) {
        auto s = base;
        s[i] = 'y';
        digests.insert(hash_bytes(s));
    }
    EXPECT_EQ(digests.size(), base.size() + 1);
    EXPECT_NE(hash_bytes(""), hash_bytes(std::string(1, '\0')));
}
