#pragma once

// Config-driven experiments: JSON config in, samples.csv + summary.json out.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpp/errors.hpp"
#include "fpp/family_config.hpp"
#include "fpp/fpp_engine.hpp"
#include "fpp/proof_lab.hpp"
#include "fpp/statistics.hpp"
#include "fpp/structure_verifier.hpp"
#include "fpp/weights.hpp"

namespace fpp {

using json = nlohmann::json;

inline constexpr const char* tool_version = "1.0.0";

enum class ExperimentKind { simulate, verify, p2p_variance, random_regular, oracle_check };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::verify: return "verify";
        case ExperimentKind::p2p_variance: return "p2p-variance";
        case ExperimentKind::random_regular: return "random-regular";
        case ExperimentKind::oracle_check: return "oracle-check";
    }
    return "?";
}

inline std::optional<ExperimentKind> parse_experiment_kind(const std::string& s) {
    for (auto k : {ExperimentKind::simulate, ExperimentKind::verify, ExperimentKind::p2p_variance,
                   ExperimentKind::random_regular, ExperimentKind::oracle_check})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::simulate;
    FamilyConfig family;
    WeightLaw law;
    std::vector<std::uint32_t> n_grid;
    std::vector<std::uint32_t> distance_grid;
    std::size_t replicates = 2;
    std::uint64_t master_seed = 0;
    double epsilon = 0.1;
    std::size_t vertex_budget = default_vertex_budget;
    std::size_t settled_cap = 1'000'000;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---------------------------------------------------------------------------
// Serialization.

inline json family_to_json(const FamilyConfig& f) {
    struct Visitor {
        json operator()(const DAryTreeSpec& s) const { return {{"name", "dary_tree"}, {"d", s.d}}; }
        json operator()(const LamplighterSpec&) const { return {{"name", "lamplighter_n"}}; }
        json operator()(const TilingSpec& s) const { return {{"name", "hyperbolic_tiling"}, {"p", s.p}, {"q", s.q}}; }
        json operator()(const ProductSpec& s) const {
            return {{"name", "product"}, {"first", family_to_json(*s.first)}, {"second", family_to_json(*s.second)}};
        }
        json operator()(const HeisenbergSpec&) const { return {{"name", "heisenberg"}}; }
        json operator()(const PathSpec&) const { return {{"name", "path"}}; }
        json operator()(const Grid2DSpec&) const { return {{"name", "grid2d"}}; }
        json operator()(const RandomRegularSpec& s) const {
            return {{"name", "random_regular"}, {"d", s.d}, {"n_vertices", s.n_vertices}, {"graph_seed", s.graph_seed}};
        }
    };
    return std::visit(Visitor{}, f.variant);
}

inline json law_to_json(const WeightLaw& law) {
    struct Visitor {
        json operator()(const ConstantLaw& l) const { return {{"name", "constant"}, {"c", l.c}}; }
        json operator()(const UniformLaw& l) const { return {{"name", "uniform"}, {"a", l.a}, {"b", l.b}}; }
        json operator()(const ExponentialLaw& l) const { return {{"name", "exponential"}, {"rate", l.rate}}; }
        json operator()(const ShiftedBernoulliLaw& l) const {
            return {{"name", "shifted_bernoulli"}, {"delta", l.delta}, {"p_one", l.p_one}};
        }
    };
    return std::visit(Visitor{}, law.variant);
}

inline json serialize(const ExperimentConfig& c) {
    return {{"experiment", to_string(c.experiment)},
            {"family", family_to_json(c.family)},
            {"law", law_to_json(c.law)},
            {"n_grid", c.n_grid},
            {"distance_grid", c.distance_grid},
            {"replicates", c.replicates},
            {"master_seed", c.master_seed},
            {"epsilon", c.epsilon},
            {"budgets", {{"vertices", c.vertex_budget}, {"settled", c.settled_cap}}}};
}

// 16 hex digits over the canonical serialization (sorted keys, defaults
// filled in). Thread count is not part of the config and cannot affect it.
inline std::string config_hash(const ExperimentConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_bytes(serialize(c).dump())));
    return buf;
}

// ---------------------------------------------------------------------------
// Parsing. Every problem is collected; parse_config throws one config_error
// listing all of them.

namespace detail {

class FieldReader {
public:
    FieldReader(const json& object, std::string where, std::vector<std::string>& problems)
        : object_(object), where_(std::move(where)), problems_(problems) {
        if (!object_.is_object()) problems_.push_back(where_ + ": expected an object");
    }

    bool ok() const { return object_.is_object(); }
    bool has(const std::string& key) const { return ok() && object_.contains(key); }
    const json& raw(const std::string& key) const { return object_.at(key); }
    std::string path(const std::string& key) const { return where_ + "." + key; }

    template <class T>
    std::optional<T> get(const std::string& key, bool required) {
        used_.push_back(key);
        if (!has(key)) {
            if (required) problems_.push_back(path(key) + ": missing");
            return std::nullopt;
        }
        const json& v = object_.at(key);
        if constexpr (std::is_same_v<T, std::string>) {
            if (v.is_string()) return v.get<std::string>();
            problems_.push_back(path(key) + ": expected a string");
        } else if constexpr (std::is_same_v<T, double>) {
            if (v.is_number()) return v.get<double>();
            problems_.push_back(path(key) + ": expected a number");
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (v.is_number_unsigned()) return v.get<std::uint64_t>();
            problems_.push_back(path(key) + ": expected a non-negative integer");
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
            if (v.is_number_integer()) return v.get<std::int64_t>();
            problems_.push_back(path(key) + ": expected an integer");
        } else if constexpr (std::is_same_v<T, std::vector<std::uint32_t>>) {
            if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) {
                    return x.is_number_unsigned() && x.get<std::uint64_t>() <= 0xffffffffULL;
                }))
                return v.get<std::vector<std::uint32_t>>();
            problems_.push_back(path(key) + ": expected an array of non-negative integers");
        }
        return std::nullopt;
    }

    void mark_used(const std::string& key) { used_.push_back(key); }

    void reject_unknown() {
        if (!ok()) return;
        for (const auto& [key, _] : object_.items())
            if (std::find(used_.begin(), used_.end(), key) == used_.end())
                problems_.push_back(path(key) + ": unknown field");
    }

private:
    const json& object_;
    std::string where_;
    std::vector<std::string>& problems_;
    std::vector<std::string> used_;
};

inline std::optional<FamilyConfig> parse_family(const json& j, const std::string& where,
                                                std::vector<std::string>& problems) {
    FieldReader r(j, where, problems);
    if (!r.ok()) return std::nullopt;
    const auto name = r.get<std::string>("name", true);
    if (!name) return std::nullopt;
    std::optional<FamilyConfig> out;
    const auto int_field = [&](const char* key, std::int64_t fallback, bool required) {
        auto v = r.get<std::int64_t>(key, required);
        if (v && (*v < -1'000'000'000 || *v > 4'000'000'000LL)) {
            problems.push_back(r.path(key) + ": out of range");
            return fallback;
        }
        return v.value_or(fallback);
    };
    if (*name == "dary_tree") {
        out = FamilyConfig{DAryTreeSpec{static_cast<int>(int_field("d", 2, true))}};
    } else if (*name == "lamplighter_n") {
        out = FamilyConfig{LamplighterSpec{}};
    } else if (*name == "hyperbolic_tiling") {
        out = FamilyConfig{TilingSpec{static_cast<int>(int_field("p", 3, true)), static_cast<int>(int_field("q", 7, true))}};
    } else if (*name == "heisenberg") {
        out = FamilyConfig{HeisenbergSpec{}};
    } else if (*name == "path") {
        out = FamilyConfig{PathSpec{}};
    } else if (*name == "grid2d") {
        out = FamilyConfig{Grid2DSpec{}};
    } else if (*name == "random_regular") {
        RandomRegularSpec s;
        s.d = static_cast<int>(int_field("d", 3, true));
        s.n_vertices = int_field("n_vertices", 0, false);
        s.graph_seed = r.get<std::uint64_t>("graph_seed", false).value_or(0);
        out = FamilyConfig{s};
    } else if (*name == "product") {
        r.mark_used("first");
        r.mark_used("second");
        std::optional<FamilyConfig> first, second;
        if (r.has("first"))
            first = parse_family(r.raw("first"), r.path("first"), problems);
        else
            problems.push_back(r.path("first") + ": missing");
        if (r.has("second"))
            second = parse_family(r.raw("second"), r.path("second"), problems);
        else
            problems.push_back(r.path("second") + ": missing");
        if (first && second) out = make_product(*first, *second);
    } else {
        problems.push_back(r.path("name") + ": unknown family '" + *name + "'");
    }
    r.reject_unknown();
    return out;
}

inline std::optional<WeightLaw> parse_law(const json& j, const std::string& where, std::vector<std::string>& problems) {
    FieldReader r(j, where, problems);
    if (!r.ok()) return std::nullopt;
    const auto name = r.get<std::string>("name", true);
    if (!name) return std::nullopt;
    std::optional<WeightLaw> out;
    if (*name == "constant") {
        out = WeightLaw{ConstantLaw{r.get<double>("c", true).value_or(1.0)}};
    } else if (*name == "uniform") {
        auto a = r.get<double>("a", true).value_or(0.0);
        auto b = r.get<double>("b", true).value_or(1.0);
        out = WeightLaw{UniformLaw{a, b}};
    } else if (*name == "exponential") {
        out = WeightLaw{ExponentialLaw{r.get<double>("rate", true).value_or(1.0)}};
    } else if (*name == "shifted_bernoulli") {
        auto delta = r.get<double>("delta", true).value_or(0.1);
        auto p_one = r.get<double>("p_one", true).value_or(0.5);
        out = WeightLaw{ShiftedBernoulliLaw{delta, p_one}};
    } else {
        problems.push_back(r.path("name") + ": unknown law '" + *name + "'");
    }
    r.reject_unknown();
    if (out) {
        auto more = validate(*out, where);
        problems.insert(problems.end(), more.begin(), more.end());
    }
    return out;
}

}  // namespace detail

// Validates the experiment-specific constraints on an assembled config.
inline std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> problems;
    const bool rr_experiment = c.experiment == ExperimentKind::random_regular;
    if (rr_experiment) {
        const auto* rr = std::get_if<RandomRegularSpec>(&c.family.variant);
        if (!rr) {
            problems.push_back("family: random-regular experiment requires the random_regular family");
        } else {
            if (rr->d < 3) problems.push_back("family.d: random-regular experiment requires d >= 3");
            for (auto size : c.n_grid)
                if (size < 2 || (static_cast<std::uint64_t>(rr->d) * size) % 2 != 0)
                    problems.push_back("n_grid: size " + std::to_string(size) + " needs >= 2 vertices and d * n even");
        }
    } else {
        auto more = validate(c.family);
        problems.insert(problems.end(), more.begin(), more.end());
    }
    auto law_problems = validate(c.law);
    problems.insert(problems.end(), law_problems.begin(), law_problems.end());

    const auto need_grid = [&](const std::vector<std::uint32_t>& grid, const char* name) {
        if (grid.empty()) problems.push_back(std::string(name) + ": must not be empty");
        for (auto n : grid)
            if (n < 1) problems.push_back(std::string(name) + ": entries must be >= 1");
    };
    switch (c.experiment) {
        case ExperimentKind::simulate:
            need_grid(c.n_grid, "n_grid");
            if (c.replicates < 2 || c.replicates % 2 != 0) problems.push_back("replicates: must be even and >= 2");
            break;
        case ExperimentKind::verify: need_grid(c.n_grid, "n_grid"); break;
        case ExperimentKind::p2p_variance:
            need_grid(c.distance_grid, "distance_grid");
            if (c.replicates < 2) problems.push_back("replicates: must be >= 2");
            break;
        case ExperimentKind::random_regular:
            need_grid(c.n_grid, "n_grid");
            if (c.replicates < 2) problems.push_back("replicates: must be >= 2");
            break;
        case ExperimentKind::oracle_check:
            need_grid(c.n_grid, "n_grid");
            for (auto n : c.n_grid)
                if (n > 4) problems.push_back("n_grid: oracle-check supports levels <= 4");
            if (c.replicates < 1) problems.push_back("replicates: must be >= 1");
            break;
    }
    if (!(c.epsilon > 0 && c.epsilon < 1)) problems.push_back("epsilon: must be in (0, 1)");
    if (c.vertex_budget < 1) problems.push_back("budgets.vertices: must be positive");
    if (c.settled_cap < 1) problems.push_back("budgets.settled: must be positive");
    return problems;
}

inline ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> problems;
    detail::FieldReader r(j, "config", problems);
    if (!r.ok()) throw config_error(problems);

    ExperimentConfig c;
    bool family_parsed = false;
    if (auto name = r.get<std::string>("experiment", true)) {
        if (auto kind = parse_experiment_kind(*name))
            c.experiment = *kind;
        else
            problems.push_back("config.experiment: unknown experiment '" + *name + "'");
    }
    r.mark_used("family");
    if (r.has("family")) {
        if (auto f = detail::parse_family(r.raw("family"), "family", problems)) {
            c.family = *f;
            family_parsed = true;
        }
    } else {
        problems.push_back("config.family: missing");
    }
    r.mark_used("law");
    if (r.has("law")) {
        if (auto l = detail::parse_law(r.raw("law"), "law", problems)) c.law = *l;
    } else {
        problems.push_back("config.law: missing");
    }
    c.n_grid = r.get<std::vector<std::uint32_t>>("n_grid", false).value_or(std::vector<std::uint32_t>{});
    c.distance_grid = r.get<std::vector<std::uint32_t>>("distance_grid", false).value_or(std::vector<std::uint32_t>{});
    c.replicates = r.get<std::uint64_t>("replicates", false).value_or(2);
    c.master_seed = r.get<std::uint64_t>("master_seed", false).value_or(0);
    c.epsilon = r.get<double>("epsilon", false).value_or(0.1);
    r.mark_used("budgets");
    if (r.has("budgets")) {
        detail::FieldReader b(r.raw("budgets"), "budgets", problems);
        if (b.ok()) {
            c.vertex_budget = b.get<std::uint64_t>("vertices", false).value_or(default_vertex_budget);
            c.settled_cap = b.get<std::uint64_t>("settled", false).value_or(1'000'000);
            b.reject_unknown();
        }
    }
    r.reject_unknown();

    if (problems.empty()) {
        auto more = validate(c);
        problems.insert(problems.end(), more.begin(), more.end());
    } else if (family_parsed && c.experiment != ExperimentKind::random_regular) {
        auto more = validate(c.family);
        problems.insert(problems.end(), more.begin(), more.end());
    }
    if (!problems.empty()) throw config_error(std::move(problems));
    return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON (") + e.what() + ")");
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Output formats.

// 17 significant digits: lossless for binary64.
inline std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline constexpr const char* csv_header = "experiment,family,law,n,replicate,seed,value";

struct SampleRow {
    std::uint32_t n;
    std::size_t replicate;
    std::uint64_t seed;
    double value;
};

inline std::string render_csv(const ExperimentConfig& c, std::vector<SampleRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const SampleRow& a, const SampleRow& b) {
        return a.n != b.n ? a.n < b.n : a.replicate < b.replicate;
    });
    const std::string prefix = std::string(to_string(c.experiment)) + "," + describe(c.family) + "," + describe(c.law) + ",";
    std::string out = std::string(csv_header) + "\n";
    for (const auto& row : rows)
        out += prefix + std::to_string(row.n) + "," + std::to_string(row.replicate) + "," + std::to_string(row.seed) +
               "," + format_real(row.value) + "\n";
    return out;
}

inline json real_json(double x) { return std::isfinite(x) ? json(x) : json(format_real(x)); }

inline json to_json(const SummaryStats& s) {
    return {{"count", s.count},       {"mean", s.mean},         {"variance", s.variance},
            {"sd", s.sd},             {"se_mean", s.se_mean},   {"se_variance", s.se_variance},
            {"min", s.min},           {"max", s.max},           {"q05", s.q05},
            {"q25", s.q25},           {"median", s.median},     {"q75", s.q75},
            {"q95", s.q95},           {"iqr", s.iqr},           {"skewness", s.skewness},
            {"kurtosis", s.kurtosis}};
}

inline json to_json(const LinearFit& f) {
    return {{"slope", f.slope},
            {"intercept", f.intercept},
            {"slope_se", f.slope_se},
            {"ci_low", f.ci_low},
            {"ci_high", f.ci_high},
            {"confidence", f.confidence},
            {"points", f.points},
            {"ci_contains_zero", f.ci_contains_zero()},
            {"significantly_positive", f.significantly_positive()}};
}

inline json to_json(const VerificationReport& r) {
    const auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
    return {{"radius", r.radius},
            {"disjoint_ok", opt(r.disjoint_ok)},
            {"iso_ok", opt(r.iso_ok)},
            {"depth_shift_ok", opt(r.depth_shift_ok)},
            {"no_dead_ends_ok", opt(r.no_dead_ends_ok)},
            {"no_dead_ends_depth", opt(r.no_dead_ends_depth)},
            {"R_1", opt(r.r1)},
            {"R_2", opt(r.r2)},
            {"C", opt(r.c)},
            {"property2", r.property2()},
            {"witnesses", r.witnesses},
            {"caveat", r.caveat}};
}

inline json to_json(const CouplingReport& r) {
    return {{"n", r.n},
            {"n_1", r.n_1},
            {"n_2", r.n_2},
            {"pairs", r.pairs},
            {"mean_abs_diff", r.mean_abs_diff},
            {"se", r.se},
            {"R_1", r.r1},
            {"R_2", r.r2},
            {"C", r.c},
            {"K_mean", r.k_mean},
            {"bound", r.bound},
            {"extended_bound", r.extended_bound},
            {"within_bound_3se", r.within_bound(3.0)}};
}

inline json to_json(const TightnessDiagnostic& t) {
    json per_n = json::array();
    for (std::size_t i = 0; i < t.n.size(); ++i) per_n.push_back({{"n", t.n[i]}, {"r_epsilon", t.r_eps[i]}});
    return {{"epsilon", t.epsilon}, {"per_n", per_n}, {"trend", to_json(t.trend)}};
}

// ---------------------------------------------------------------------------
// Running.

struct ExperimentResult {
    int exit_code = 0;
    std::string csv;
    json summary;
};

namespace exit_codes {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int resource = 3;
inline constexpr int invariant = 4;
}  // namespace exit_codes

namespace detail {

inline void run_simulate(const ExperimentConfig& c, const RunOptions& opts, std::vector<SampleRow>& rows, json& s,
                         int& exit_code) {
    auto grid = c.n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto set = run_replicates(c.family, c.law, grid, c.replicates, c.master_seed, opts);
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (std::size_t i = 0; i < set.replicates(); ++i) rows.push_back({grid[g], i, set.seeds[i], set.samples[g][i]});

    json stats = json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        auto entry = to_json(summarize(set.samples[g]));
        entry["n"] = grid[g];
        stats.push_back(entry);
    }
    s["stats"] = stats;

    std::size_t violations = 0;
    for (const auto& times : set.hitting_times) violations += check_monotone(times) ? 0 : 1;
    json pathwise = {{"runs", set.replicates()}, {"monotone_violations", violations}};
    if (const auto bounds = law_bounds(c.law); bounds.as_bound && grid.size() >= 2) {
        std::size_t checks = 0, failures = 0;
        for (const auto& times : set.hitting_times)
            for (std::size_t g = 0; g + 1 < grid.size(); ++g, ++checks)
                failures += check_growth_bound(times, grid[g], grid[g + 1] - grid[g], *bounds.as_bound) ? 0 : 1;
        pathwise["growth_bound"] = {{"K_as", *bounds.as_bound}, {"checks", checks}, {"violations", failures}};
    }
    s["pathwise"] = pathwise;
    if (violations > 0) exit_code = exit_codes::invariant;

    json notes = json::array();
    s["coupling"] = json::array();
    s["verification"] = nullptr;
    if (auto emb = shipped_embedding(c.family)) {
        const auto graph = make_graph(c.family, opts.vertex_budget);
        const auto distances = verify_root_distance(graph, *emb, opts.vertex_budget);
        s["verification"] = to_json(distances);
        if (set.replicates() >= 100) {
            for (auto n : grid) s["coupling"].push_back(to_json(estimate_mean_abs_diff(set, n, distances)));
        } else {
            notes.push_back("coupling statistic needs >= 100 replicates");
        }
    } else {
        notes.push_back("no shipped embedding for this family; coupling statistic not computed");
    }
    s["tightness"] = nullptr;
    if (grid.size() >= 3 && set.replicates() >= 200)
        s["tightness"] = to_json(tightness_diagnostic(set, c.epsilon));
    else
        notes.push_back("tightness diagnostic needs >= 3 levels and >= 200 replicates");
    s["notes"] = notes;
}

inline void run_verify(const ExperimentConfig& c, const RunOptions& opts, json& s, int& exit_code) {
    const auto graph = make_graph(c.family, opts.vertex_budget);
    const auto radius = *std::max_element(c.n_grid.begin(), c.n_grid.end());
    VerificationReport report;
    report.radius = radius;
    json notes = json::array();
    if (auto emb = shipped_embedding(c.family)) {
        report = verify_embedding(graph, *emb, radius, opts.vertex_budget);
        s["embedding"] = emb->name;
        if (!report.disjoint_ok.value_or(false) || !report.iso_ok.value_or(false) ||
            !report.depth_shift_ok.value_or(false))
            exit_code = exit_codes::invariant;
    } else {
        s["embedding"] = nullptr;
        notes.push_back("no shipped embedding for this family; only the no-dead-ends check ran");
    }
    report.merge(verify_no_dead_ends(graph, radius, opts.vertex_budget));
    report.caveat = detail::ball_caveat(radius);
    s["verification"] = to_json(report);
    s["notes"] = notes;
}

inline void run_p2p_variance(const ExperimentConfig& c, const RunOptions& opts, std::vector<SampleRow>& rows, json& s) {
    auto grid = c.distance_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto result = variance_vs_distance(c.family, c.law, grid, c.replicates, c.master_seed, opts);
    const auto graph = make_graph(c.family, opts.vertex_budget);
    json stats = json::array();
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.samples.size(); ++i)
            rows.push_back({row.distance, i, result.seeds[i], row.samples[i]});
        auto entry = to_json(row.stats);
        entry["distance"] = row.distance;
        entry["target"] = graph.format(row.target);
        entry["variance_over_distance"] = row.stats.variance / row.distance;
        stats.push_back(entry);
    }
    s["stats"] = stats;
    s["loglog_fit"] = result.loglog ? to_json(*result.loglog) : json(nullptr);
}

inline void run_random_regular(const ExperimentConfig& c, const RunOptions& opts, std::vector<SampleRow>& rows,
                               json& s) {
    auto grid = c.n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto& rr = std::get<RandomRegularSpec>(c.family.variant);
    const auto result = random_pair_tightness(static_cast<std::uint32_t>(rr.d), grid, c.law, c.replicates, c.master_seed, opts);
    json stats = json::array();
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.samples.size(); ++i)
            rows.push_back({row.n_vertices, i, row.seeds[i], row.samples[i]});
        json entry = row.stats ? to_json(*row.stats) : json::object();
        entry["n_vertices"] = row.n_vertices;
        entry["unreachable"] = row.unreachable;
        stats.push_back(entry);
    }
    s["stats"] = stats;
    s["iqr_trend"] = result.iqr_trend ? to_json(*result.iqr_trend) : json(nullptr);
}

inline void run_oracle_check(const ExperimentConfig& c, const RunOptions& opts, std::vector<SampleRow>& rows, json& s,
                             int& exit_code) {
    auto grid = c.n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto graph = make_graph(c.family, opts.vertex_budget);
    const auto max_n = grid.back();
    const auto ball = build_ball(graph, max_n, opts.vertex_budget);
    struct Outcome {
        std::vector<double> engine, oracle;
    };
    std::vector<Outcome> outcomes(c.replicates);
    std::vector<std::uint64_t> seeds(c.replicates);
    parallel_for(c.replicates, opts.threads, [&](std::size_t i) {
        seeds[i] = derive_seed(c.master_seed, i);
        const WeightField field(seeds[i], c.law);
        const auto run = first_passage_levels(ball, FieldWeights{field}, max_n);
        for (auto n : grid) {
            outcomes[i].engine.push_back(run.level(n));
            outcomes[i].oracle.push_back(brute_force_level(graph, field, n));
        }
    });
    json mismatches = json::array();
    std::size_t comparisons = 0;
    for (std::size_t i = 0; i < c.replicates; ++i) {
        for (std::size_t g = 0; g < grid.size(); ++g, ++comparisons) {
            rows.push_back({grid[g], i, seeds[i], outcomes[i].engine[g]});
            if (outcomes[i].engine[g] != outcomes[i].oracle[g])
                mismatches.push_back({{"n", grid[g]},
                                      {"replicate", i},
                                      {"engine", outcomes[i].engine[g]},
                                      {"oracle", outcomes[i].oracle[g]}});
        }
    }
    s["oracle"] = {{"comparisons", comparisons}, {"mismatches", mismatches}, {"bit_identical", mismatches.empty()}};
    if (!mismatches.empty()) exit_code = exit_codes::invariant;
}

}  // namespace detail

// Runs a validated config. Never throws for run-time failures: they are
// mapped to exit codes and recorded under "errors" in the summary.
inline ExperimentResult run_experiment(const ExperimentConfig& c, unsigned threads = 1) {
    ExperimentResult result;
    json& s = result.summary;
    s["tool"] = "fpp";
    s["version"] = tool_version;
    s["experiment"] = to_string(c.experiment);
    s["config"] = serialize(c);
    s["config_hash"] = config_hash(c);
    s["family"] = describe(c.family);
    s["law"] = describe(c.law);
    s["errors"] = json::array();

    const RunOptions opts{threads, c.vertex_budget, c.settled_cap};
    std::vector<SampleRow> rows;
    try {
        if (auto problems = validate(c); !problems.empty()) throw config_error(std::move(problems));
        switch (c.experiment) {
            case ExperimentKind::simulate: detail::run_simulate(c, opts, rows, s, result.exit_code); break;
            case ExperimentKind::verify: detail::run_verify(c, opts, s, result.exit_code); break;
            case ExperimentKind::p2p_variance: detail::run_p2p_variance(c, opts, rows, s); break;
            case ExperimentKind::random_regular: detail::run_random_regular(c, opts, rows, s); break;
            case ExperimentKind::oracle_check: detail::run_oracle_check(c, opts, rows, s, result.exit_code); break;
        }
    } catch (const config_error& e) {
        s["errors"].push_back({{"kind", "config"}, {"message", e.what()}});
        result.exit_code = exit_codes::config;
    } catch (const resource_error& e) {
        s["errors"].push_back({{"kind", "resource"}, {"message", e.what()}});
        result.exit_code = exit_codes::resource;
    } catch (const std::exception& e) {
        s["errors"].push_back({{"kind", "invariant"}, {"message", e.what()}});
        result.exit_code = exit_codes::invariant;
    }
    s["exit_code"] = result.exit_code;
    result.csv = render_csv(c, std::move(rows));
    return result;
}

// Writes <out_dir>/samples.csv and <out_dir>/summary.json.
inline void write_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        out << text;
        out.close();
        if (!out) throw std::runtime_error("cannot write " + path.string());
    };
    write(out_dir / "samples.csv", result.csv);
    write(out_dir / "summary.json", result.summary.dump(2) + "\n");
}

}  // namespace fpp
