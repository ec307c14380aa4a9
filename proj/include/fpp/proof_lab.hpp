#pragma once

// Monte Carlo layer: replicated level runs, pathwise checks of the
// monotonicity / bounded-extension / embedding inequalities, the coupling
// statistic E|Z - Z'| against 2 K C, and tightness / variance diagnostics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/family_config.hpp"
#include "fpp/fpp_engine.hpp"
#include "fpp/layered_ball.hpp"
#include "fpp/parallel.hpp"
#include "fpp/statistics.hpp"
#include "fpp/structure_verifier.hpp"
#include "fpp/weights.hpp"

namespace fpp {

struct RunOptions {
    unsigned threads = 1;
    std::size_t vertex_budget = default_vertex_budget;
    std::size_t settled_cap = 1'000'000;
};

// Replicated level passage times. Replicate i uses the field seeded with
// derive_seed(master_seed, i); its samples at every grid level come from one
// sweep over B_{max n}.
struct SampleSet {
    FamilyConfig family;
    WeightLaw law;
    std::vector<std::uint32_t> n_grid;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> seeds;                  // [replicate]
    std::vector<std::vector<double>> hitting_times;    // [replicate][k-1] = T_k, k = 1..max n
    std::vector<std::vector<double>> samples;          // [grid index][replicate]

    std::size_t replicates() const { return seeds.size(); }
    std::uint32_t max_n() const { return n_grid.empty() ? 0 : *std::max_element(n_grid.begin(), n_grid.end()); }

    const std::vector<double>& at(std::uint32_t n) const {
        for (std::size_t g = 0; g < n_grid.size(); ++g)
            if (n_grid[g] == n) return samples[g];
        throw contract_error("SampleSet: level " + std::to_string(n) + " not in the grid");
    }
};

inline SampleSet run_replicates(const FamilyConfig& family, const WeightLaw& law, std::vector<std::uint32_t> n_grid,
                                std::size_t replicates, std::uint64_t master_seed, const RunOptions& options = {}) {
    if (replicates < 2 || replicates % 2 != 0) throw contract_error("run_replicates: replicates must be even and >= 2");
    if (n_grid.empty()) throw contract_error("run_replicates: empty level grid");
    for (auto n : n_grid)
        if (n < 1) throw contract_error("run_replicates: levels must be >= 1");

    SampleSet set{family, law, std::move(n_grid), master_seed, {}, {}, {}};
    const auto graph = make_graph(family, options.vertex_budget);
    const auto max_n = set.max_n();
    const auto ball = build_ball(graph, max_n, options.vertex_budget);

    set.seeds.resize(replicates);
    set.hitting_times.resize(replicates);
    parallel_for(replicates, options.threads, [&](std::size_t i) {
        set.seeds[i] = derive_seed(master_seed, i);
        const WeightField field(set.seeds[i], law);
        try {
            set.hitting_times[i] = first_passage_levels(ball, FieldWeights{field}, max_n).hitting_times;
        } catch (const resource_error& e) {
            throw resource_error("replicate " + std::to_string(i) + ": " + e.what());
        }
    });
    set.samples.assign(set.n_grid.size(), std::vector<double>(replicates));
    for (std::size_t g = 0; g < set.n_grid.size(); ++g)
        for (std::size_t i = 0; i < replicates; ++i) set.samples[g][i] = set.hitting_times[i][set.n_grid[g] - 1];
    return set;
}

inline SampleSet run_replicates(const FamilyConfig& family, const WeightLaw& law, std::uint32_t n,
                                std::size_t replicates, std::uint64_t master_seed, const RunOptions& options = {}) {
    return run_replicates(family, law, std::vector<std::uint32_t>{n}, replicates, master_seed, options);
}

// ---------------------------------------------------------------------------
// Pathwise checks.

// T_1 <= T_2 <= ... <= T_n.
inline bool check_monotone(std::span<const double> hitting_times) {
    return std::is_sorted(hitting_times.begin(), hitting_times.end());
}
inline bool check_monotone(const FppRun& run) { return check_monotone(run.hitting_times); }

// T_{n+i} <= T_n + K i for the same field, K the a.s. bound of the law.
inline bool check_growth_bound(std::span<const double> hitting_times, std::uint32_t n, std::uint32_t i, double k_as) {
    if (n < 1 || n + i > hitting_times.size()) throw contract_error("check_growth_bound: run too short for (n, i)");
    return hitting_times[n + i - 1] <= hitting_times[n - 1] + k_as * i;
}
inline bool check_growth_bound(const FppRun& run, std::uint32_t n, std::uint32_t i, const WeightLaw& law) {
    const auto bounds = law_bounds(law);
    if (!bounds.as_bound)
        throw contract_error("check_growth_bound: the law has no almost-sure upper bound (" + describe(law) + ")");
    return check_growth_bound(run.hitting_times, n, i, *bounds.as_bound);
}

struct EmbeddingCheck {
    double whole = 0;            // T_{n+1} of the whole graph
    double connect[2] = {0, 0};  // cost of the connecting path root -> phi_b(root)
    double copy[2] = {0, 0};     // level-(n+1-R_b) passage time inside copy b
    double bound[2] = {0, 0};    // connect + copy
    bool ok = false;             // whole <= min(bound) up to summation-order rounding
};

inline constexpr double embedding_relative_slack = 1e-12;

// Pathwise skeleton of E Z_{n+1} <= E min(Z_{n-R_1+1}, Z'_{n-R_2+1}) + K C:
// going to phi_b(root) along a fixed shortest path and then optimally inside
// copy b to its level n+1-R_b reaches D_{n+1}, so T_{n+1} <= min_b A_b.
// Built once per (graph, embedding, n); evaluate() is cheap per field.
class EmbeddingInequality {
public:
    template <RootedGraph G>
    EmbeddingInequality(const G& graph, const EmbeddingSpec& emb, std::uint32_t n,
                        std::size_t vertex_budget = default_vertex_budget)
        : n_(n) {
        const auto distances = verify_root_distance(graph, emb, vertex_budget);
        r_[0] = *distances.r1;
        r_[1] = *distances.r2;
        if (r_[0] > n + 1 || r_[1] > n + 1) throw contract_error("embedding inequality: R_b exceeds n + 1");
        ball_ = std::make_shared<LayeredBall>(build_ball(graph, n + 1, vertex_budget));
        for (int b = 0; b < 2; ++b) {
            connect_path_[b] = lexicographic_shortest_path(graph, emb.root_image(b + 1), r_[b], vertex_budget);
            const auto level = n + 1 - r_[b];
            auto& images = images_[b];
            images.resize(ball_->layer_end(level));
            for (std::uint32_t i = 0; i < images.size(); ++i) images[i] = emb.phi(b + 1)(ball_->key(i));
        }
    }

    std::uint32_t r(int b) const { return r_[b - 1]; }
    const std::vector<VertexKey>& connecting_path(int b) const { return connect_path_[b - 1]; }

    EmbeddingCheck evaluate(const WeightField& field) const {
        EmbeddingCheck out;
        out.whole = first_passage_levels(*ball_, FieldWeights{field}, n_ + 1).level(n_ + 1);
        for (int b = 0; b < 2; ++b) {
            out.connect[b] = path_weight(field, connect_path_[b]);
            const auto level = n_ + 1 - r_[b];
            if (level == 0) {
                out.copy[b] = 0.0;
            } else {
                const auto& images = images_[b];
                const auto pulled_back = [&](std::uint32_t from, const LayeredBall::ArcRef& arc) {
                    return field.sample(images[from], images[arc.to], arc.multiplicity);
                };
                out.copy[b] = first_passage_levels(*ball_, pulled_back, level).level(level);
            }
            out.bound[b] = out.connect[b] + out.copy[b];
        }
        const double bound = std::min(out.bound[0], out.bound[1]);
        out.ok = out.whole <= bound + embedding_relative_slack * bound;
        return out;
    }

private:
    // Smallest-key-first walk along a shortest path from the root to target.
    template <RootedGraph G>
    static std::vector<VertexKey> lexicographic_shortest_path(const G& graph, const VertexKey& target,
                                                              std::uint32_t length, std::size_t budget) {
        const auto around = build_ball_around(graph, target, length, budget);
        std::vector<VertexKey> path{graph.root()};
        for (std::uint32_t remaining = length; remaining > 0; --remaining) {
            std::optional<VertexKey> next;
            for (const auto& arc : graph.neighbors(path.back())) {
                const auto at = around.find(arc.to);
                if (at >= 0 && around.depth(static_cast<std::uint32_t>(at)) == remaining - 1) {
                    next = arc.to;
                    break;  // arcs are sorted by key
                }
            }
            if (!next) throw invariant_error("embedding inequality: no shortest path to the root image");
            path.push_back(*next);
        }
        return path;
    }

    std::uint32_t n_;
    std::uint32_t r_[2] = {0, 0};
    std::shared_ptr<LayeredBall> ball_;
    std::vector<VertexKey> connect_path_[2];
    std::vector<VertexKey> images_[2];
};

template <RootedGraph G>
EmbeddingCheck check_embedding_inequality(const G& graph, const EmbeddingSpec& emb, const WeightField& field,
                                          std::uint32_t n) {
    return EmbeddingInequality(graph, emb, n).evaluate(field);
}

// ---------------------------------------------------------------------------
// Coupling statistic.

// For sample level m the proof's indices are n_1 = m, n = m + R_1 - 1 and
// n_2 = n + 1 - R_2.
struct CouplingReport {
    std::uint32_t n = 0;
    std::uint32_t n_1 = 0;
    std::int64_t n_2 = 0;
    std::size_t pairs = 0;
    double mean_abs_diff = 0;
    double se = 0;
    std::uint32_t r1 = 0, r2 = 0, c = 0;
    double k_mean = 0;
    double bound = 0;           // 2 K C
    double extended_bound = 0;  // 2 K C + K (R_1 - R_2)

    bool within_bound(double se_multiplier = 3.0) const { return mean_abs_diff <= bound + se_multiplier * se; }
};

// Pairs replicate 2i with 2i+1 at `level` and estimates E|Z - Z'|.
inline CouplingReport estimate_mean_abs_diff(const SampleSet& samples, std::uint32_t level, std::uint32_t r1,
                                             std::uint32_t r2) {
    const auto& z = samples.at(level);
    if (z.size() < 100) throw contract_error("estimate_mean_abs_diff: need at least 100 replicates");
    CouplingReport report;
    report.n_1 = level;
    report.n = level + r1 - 1;
    report.n_2 = static_cast<std::int64_t>(report.n) + 1 - static_cast<std::int64_t>(r2);
    report.r1 = r1;
    report.r2 = r2;
    report.c = std::max(r1, r2);
    report.k_mean = law_bounds(samples.law).mean;
    report.bound = 2.0 * report.k_mean * report.c;
    report.extended_bound = report.bound + report.k_mean * (static_cast<double>(r1) - static_cast<double>(r2));

    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < z.size(); i += 2) diffs.push_back(std::abs(z[i] - z[i + 1]));
    report.pairs = diffs.size();
    report.mean_abs_diff = sample_mean(diffs);
    double ss = 0;
    for (double d : diffs) ss += (d - report.mean_abs_diff) * (d - report.mean_abs_diff);
    report.se = std::sqrt(ss / static_cast<double>(diffs.size() - 1) / static_cast<double>(diffs.size()));
    return report;
}

inline CouplingReport estimate_mean_abs_diff(const SampleSet& samples, std::uint32_t level,
                                             const VerificationReport& verification) {
    if (!verification.r1 || !verification.r2) throw contract_error("estimate_mean_abs_diff: report lacks R_1, R_2");
    return estimate_mean_abs_diff(samples, level, *verification.r1, *verification.r2);
}

// ---------------------------------------------------------------------------
// Tightness diagnostic.

// Smallest r with #{ |z - mean| > r } < epsilon * N.
inline double r_epsilon(std::span<const double> z, double epsilon) {
    if (z.empty() || !(epsilon > 0 && epsilon < 1)) throw contract_error("r_epsilon: need data and 0 < epsilon < 1");
    const double mean = sample_mean(z);
    std::vector<double> dev;
    dev.reserve(z.size());
    for (double x : z) dev.push_back(std::abs(x - mean));
    std::sort(dev.begin(), dev.end());
    const auto count = dev.size();
    // allowed exceedances: the largest integer strictly below epsilon * N
    const auto allowed = static_cast<std::size_t>(std::ceil(epsilon * static_cast<double>(count))) - 1;
    if (allowed >= count) return 0.0;
    return dev[count - 1 - allowed];
}

struct TightnessDiagnostic {
    double epsilon = 0;
    std::vector<std::uint32_t> n;
    std::vector<double> r_eps;
    LinearFit trend;
};

inline TightnessDiagnostic tightness_diagnostic(const SampleSet& samples, double epsilon) {
    if (samples.n_grid.size() < 3) throw contract_error("tightness_diagnostic: need at least three levels");
    if (samples.replicates() < 200) throw contract_error("tightness_diagnostic: need at least 200 replicates");
    TightnessDiagnostic out;
    out.epsilon = epsilon;
    std::vector<double> x;
    for (std::size_t g = 0; g < samples.n_grid.size(); ++g) {
        out.n.push_back(samples.n_grid[g]);
        out.r_eps.push_back(r_epsilon(samples.samples[g], epsilon));
        x.push_back(samples.n_grid[g]);
    }
    out.trend = fit_line(x, out.r_eps);
    return out;
}

// ---------------------------------------------------------------------------
// Point-to-point variance scaling.

struct DistanceRow {
    std::uint32_t distance = 0;
    VertexKey target;
    std::vector<double> samples;  // [replicate]
    SummaryStats stats;
};

struct VarianceScaling {
    std::vector<std::uint64_t> seeds;
    std::vector<DistanceRow> rows;
    std::optional<LinearFit> loglog;  // log Var vs log distance
};

// Canonical target at distance m: the smallest key of D_m.
inline VarianceScaling variance_vs_distance(const FamilyConfig& family, const WeightLaw& law,
                                            const std::vector<std::uint32_t>& distances, std::size_t replicates,
                                            std::uint64_t master_seed, const RunOptions& options = {}) {
    if (distances.empty() || replicates < 2) throw contract_error("variance_vs_distance: need distances and replicates");
    const auto graph = make_graph(family, options.vertex_budget);
    const auto max_m = *std::max_element(distances.begin(), distances.end());
    VarianceScaling out;
    {
        const auto ball = build_ball(graph, max_m, options.vertex_budget);
        for (auto m : distances) {
            if (m < 1) throw contract_error("variance_vs_distance: distances must be >= 1");
            const auto layer = ball.layer(m);
            if (layer.empty()) throw config_error("variance_vs_distance: no vertex at distance " + std::to_string(m));
            out.rows.push_back(DistanceRow{m, *std::min_element(layer.begin(), layer.end()), {}, {}});
        }
    }
    out.seeds.resize(replicates);
    for (auto& row : out.rows) row.samples.resize(replicates);
    const auto source = graph.root();
    parallel_for(replicates, options.threads, [&](std::size_t i) {
        out.seeds[i] = derive_seed(master_seed, i);
        const WeightField field(out.seeds[i], law);
        for (auto& row : out.rows)
            row.samples[i] = point_to_point(graph, field, source, row.target, options.settled_cap).value;
    });
    std::vector<double> lx, ly;
    for (auto& row : out.rows) {
        row.stats = summarize(row.samples);
        if (row.stats.variance > 0) {
            lx.push_back(std::log(static_cast<double>(row.distance)));
            ly.push_back(std::log(row.stats.variance));
        }
    }
    if (lx.size() >= 3) out.loglog = fit_line(lx, ly);
    return out;
}

// ---------------------------------------------------------------------------
// Random pairs on configuration-model graphs.

struct RandomPairRow {
    std::uint32_t n_vertices = 0;
    std::vector<std::uint64_t> seeds;  // [replicate] weight-field seed
    std::vector<double> samples;       // [replicate], +inf when the pair is disconnected
    std::size_t unreachable = 0;
    std::optional<SummaryStats> stats;  // over reachable pairs, centered stats are shift-invariant
};

struct RandomPairReport {
    std::vector<RandomPairRow> rows;
    std::optional<LinearFit> iqr_trend;  // IQR vs log2(n_vertices)
};

// Per size and replicate: a fresh configuration-model graph, two distinct
// uniformly random vertices and their point-to-point passage time.
inline RandomPairReport random_pair_tightness(std::uint32_t d, const std::vector<std::uint32_t>& sizes,
                                              const WeightLaw& law, std::size_t replicates, std::uint64_t master_seed,
                                              const RunOptions& options = {}) {
    if (d < 3) throw contract_error("random_pair_tightness: d must be >= 3");
    if (replicates < 2) throw contract_error("random_pair_tightness: need at least two replicates");
    RandomPairReport out;
    for (auto size : sizes) {
        if (size < 2 || (static_cast<std::uint64_t>(d) * size) % 2 != 0)
            throw config_error("random_pair_tightness: need n_vertices >= 2 and d * n_vertices even");
        RandomPairRow row;
        row.n_vertices = size;
        row.seeds.resize(replicates);
        row.samples.resize(replicates);
        const auto size_seed = derive_seed(master_seed, size);
        parallel_for(replicates, options.threads, [&](std::size_t i) {
            const auto rep_seed = derive_seed(size_seed, i);
            const RandomRegular graph(d, size, derive_seed(rep_seed, 0));
            SplitMix64 pick(derive_seed(rep_seed, 1));
            const auto u = static_cast<std::uint32_t>(pick.below(size));
            auto v = static_cast<std::uint32_t>(pick.below(size - 1));
            if (v >= u) ++v;
            row.seeds[i] = derive_seed(rep_seed, 2);
            const WeightField field(row.seeds[i], law);
            row.samples[i] =
                point_to_point(graph, field, RandomRegular::key(u), RandomRegular::key(v), options.settled_cap).value;
        });
        std::vector<double> reachable;
        for (double z : row.samples) {
            if (std::isinf(z))
                ++row.unreachable;
            else
                reachable.push_back(z);
        }
        if (reachable.size() >= 2) row.stats = summarize(reachable);
        out.rows.push_back(std::move(row));
    }
    std::vector<double> x, y;
    for (const auto& row : out.rows) {
        if (!row.stats) continue;
        x.push_back(std::log2(static_cast<double>(row.n_vertices)));
        y.push_back(row.stats->iqr);
    }
    if (x.size() >= 3) out.iqr_trend = fit_line(x, y);
    return out;
}

}  // namespace fpp
