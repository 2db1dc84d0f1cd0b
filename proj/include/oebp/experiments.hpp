#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oebp/adversary.hpp"
#include "oebp/bounds.hpp"
#include "oebp/core.hpp"
#include "oebp/exact.hpp"
#include "oebp/greedy.hpp"
#include "oebp/io.hpp"
#include "oebp/prng.hpp"

namespace oebp {

// Raised when a case's recorded claims disagree with what actually runs.
struct ClaimMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SolverMode { Exact, Certificate, GreedyUpper };

inline std::string solver_mode_str(SolverMode mode) {
    switch (mode) {
        case SolverMode::Exact: return "exact";
        case SolverMode::Certificate: return "certificate";
        default: return "greedy-upper";
    }
}

inline SolverMode parse_solver_mode(const std::string& text) {
    if (text == "exact") return SolverMode::Exact;
    if (text == "certificate") return SolverMode::Certificate;
    if (text == "greedy-upper") return SolverMode::GreedyUpper;
    throw std::invalid_argument("unknown solver mode '" + text +
                                "' (expected exact|certificate|greedy-upper)");
}

struct PocReport {
    std::vector<std::pair<long long, long long>> per_cluster;  // (label, cost), label-sorted
    long long sum_clustered = 0;
    long long global_cost = 0;
    Rat ratio{0};
    // Effective mode: Exact downgrades to Certificate when any cost had to be
    // taken from a certificate instead of being solved.
    SolverMode solver_mode = SolverMode::Exact;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::map<long long, Instance> split_by_cluster(const Instance& instance,
                                                      const char* caller) {
    std::map<long long, Instance> parts;
    for (const Item& item : instance.items) {
        if (!item.cluster)
            throw std::invalid_argument(std::string(caller) + ": item id " +
                                        std::to_string(item.id) + " has no cluster label");
        Instance& part = parts[*item.cluster];
        part.variant = instance.variant;
        part.beta = instance.beta;
        part.items.push_back(item);
    }
    if (parts.empty()) throw std::invalid_argument(std::string(caller) + ": instance is empty");
    return parts;
}

struct PartCost {
    long long cost = 0;
    bool verified = false;  // true when the cost is a proven optimum
    bool from_certificate = false;
};

// Cost of one part (a cluster, a batch, or the whole instance) under the
// chosen mode. Exact mode solves when feasible: a part of all size-1 items
// has optimum = item count without search (no two such items share a bin),
// otherwise the branch-and-bound runs within budget; failing both, a
// supplied certificate is validated and its bin count used as the cost.
inline PartCost part_cost(const Instance& part, SolverMode mode, const SolveBudget& budget,
                          const Packing* certificate, const std::string& what,
                          std::vector<std::string>& warnings) {
    auto use_certificate = [&]() -> PartCost {
        if (certificate == nullptr) {
            if (mode == SolverMode::Certificate)
                throw std::invalid_argument(what + ": certificate mode but no certificate given");
            throw BudgetExceeded(what + ": " + std::to_string(part.items.size()) +
                                 " items exceed the solver budget and no certificate is given");
        }
        if (!packing_valid(*certificate, part))
            throw std::invalid_argument(what + ": certificate is not a valid packing");
        warnings.push_back(what + ": cost taken from certificate, optimum not verified");
        return {certificate->bin_count(), false, true};
    };
    switch (mode) {
        case SolverMode::GreedyUpper: {
            return {first_fit(part).packing.bin_count(), false, false};
        }
        case SolverMode::Certificate: {
            return use_certificate();
        }
        default: {
            bool all_unit = std::all_of(part.items.begin(), part.items.end(),
                                        [](const Item& it) { return it.size == Rat(1); });
            if (all_unit) return {static_cast<long long>(part.items.size()), true, false};
            if (static_cast<long long>(part.items.size()) <= budget.max_items) {
                ExactResult result = optimal_packing(part, budget);
                if (result.proven_optimal) return {result.packing.bin_count(), true, false};
            }
            return use_certificate();
        }
    }
}

inline PocReport run_partitioned(const Instance& instance, SolverMode mode,
                                 const SolveBudget& budget, const Packing* global_certificate,
                                 const std::map<long long, Packing>* part_certificates,
                                 bool require_two_bins, const char* caller) {
    auto parts = split_by_cluster(instance, caller);
    PocReport report;
    report.solver_mode = mode;
    bool any_certificate = false;
    for (const auto& [label, part] : parts) {
        const Packing* cert = nullptr;
        if (part_certificates != nullptr) {
            auto it = part_certificates->find(label);
            if (it != part_certificates->end()) cert = &it->second;
        }
        std::string what = std::string(caller) + ": cluster " + std::to_string(label);
        PartCost pc = part_cost(part, mode, budget, cert, what, report.warnings);
        if (require_two_bins) {
            if (pc.verified && pc.cost < 2)
                throw std::invalid_argument(what + " has optimum " + std::to_string(pc.cost) +
                                            "; every cluster must require at least two bins");
            if (!pc.verified)
                report.warnings.push_back(what + ": two-bin assumption not verified");
        }
        any_certificate = any_certificate || pc.from_certificate;
        report.per_cluster.emplace_back(label, pc.cost);
        report.sum_clustered += pc.cost;
    }
    PartCost global = part_cost(instance, mode, budget, global_certificate,
                                std::string(caller) + ": global", report.warnings);
    any_certificate = any_certificate || global.from_certificate;
    report.global_cost = global.cost;
    if (report.global_cost <= 0) throw std::logic_error(std::string(caller) + ": zero global cost");
    report.ratio = Rat(report.sum_clustered) / Rat(report.global_cost);
    if (mode == SolverMode::Exact && any_certificate) report.solver_mode = SolverMode::Certificate;
    return report;
}

}  // namespace detail

// Clustered evaluation: every cluster is costed in isolation and the sum is
// compared against the global cost. Clusters whose verified optimum is
// below two are rejected; unverifiable ones produce a warning.
inline PocReport run_clustered(const Instance& instance, SolverMode mode,
                               const SolveBudget& budget = {},
                               const Packing* global_certificate = nullptr,
                               const std::map<long long, Packing>* cluster_certificates = nullptr) {
    return detail::run_partitioned(instance, mode, budget, global_certificate,
                                   cluster_certificates, /*require_two_bins=*/true,
                                   "run_clustered");
}

// Batched evaluation: identical costing, but batches may be arbitrarily
// small, and labels must be exactly 1..l.
inline PocReport run_batched(const Instance& instance, SolverMode mode,
                             const SolveBudget& budget = {},
                             const Packing* global_certificate = nullptr,
                             const std::map<long long, Packing>* batch_certificates = nullptr) {
    std::vector<long long> labels;
    for (const Item& item : instance.items)
        if (item.cluster) labels.push_back(*item.cluster);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != static_cast<long long>(i) + 1)
            throw std::invalid_argument("run_batched: batch labels must be 1..l (found label " +
                                        std::to_string(labels[i]) + ")");
    return detail::run_partitioned(instance, mode, budget, global_certificate, batch_certificates,
                                   /*require_two_bins=*/false, "run_batched");
}

inline Json poc_report_to_json(const PocReport& report, Variant variant) {
    Json j;
    j["variant"] = variant_str(variant);
    j["solver_mode"] = solver_mode_str(report.solver_mode);
    Json rows = Json::array();
    for (const auto& [label, cost] : report.per_cluster)
        rows.push_back(Json{{"cluster", label}, {"cost", cost}});
    j["per_cluster"] = std::move(rows);
    j["sum_clustered"] = report.sum_clustered;
    j["global_cost"] = report.global_cost;
    j["ratio"] = rat_str(report.ratio);
    j["warnings"] = report.warnings;
    return j;
}

struct SweepRow {
    Rat beta{0};
    std::string algorithm;
    Variant variant = Variant::Max;
    long long n = 0;
    long long alg_bins = 0;
    long long reference_bins = 0;
    Rat measured_ratio{0};
    BoundValue theory;
    std::string error;  // non-empty when this point failed; other fields partial
};

namespace detail {

inline BoundValue theory_for_case(const AdversarialCase& c, const Rat& beta) {
    const std::string& target = c.target_algorithm;
    if (target == "clustered")
        return c.instance.variant == Variant::Min ? min_poc_bound(beta)
                                                  : BoundValue::tight(r2(beta));
    if (target == "batched") {
        long long t = std::stoll(c.params.at("t"));
        return BoundValue::tight(Rat(1) + Rat(1, t + 1));
    }
    return known_bound(target, c.instance.variant, beta);
}

}  // namespace detail

// Re-runs a case's target (algorithm or partitioned evaluation), verifies
// every recorded claim, and reports the measured ratio against the
// certificate. Any disagreement is a generator or sidecar bug and throws.
inline SweepRow measure_ratio(const AdversarialCase& c, const SolveBudget& budget = {}) {
    SweepRow row;
    row.beta = c.instance.beta_or_default();
    row.algorithm = c.target_algorithm;
    row.variant = c.instance.variant;
    row.n = static_cast<long long>(c.instance.items.size());

    if (!packing_valid(c.certificate, c.instance))
        throw ClaimMismatch(c.generator + ": certificate is not a valid packing");
    if (c.certificate.bin_count() != c.claimed_cert_bins)
        throw ClaimMismatch(c.generator + ": certificate has " +
                            std::to_string(c.certificate.bin_count()) + " bins, claim says " +
                            std::to_string(c.claimed_cert_bins));

    long long alg_bins = 0;
    if (c.target_algorithm == "clustered") {
        PocReport report = run_clustered(c.instance, SolverMode::Exact, budget, &c.certificate,
                                         &c.cluster_certificates);
        alg_bins = report.sum_clustered;
    } else if (c.target_algorithm == "batched") {
        PocReport report = run_batched(c.instance, SolverMode::Exact, budget, &c.certificate,
                                       &c.cluster_certificates);
        alg_bins = report.sum_clustered;
    } else {
        alg_bins = run_algorithm(c.target_algorithm, c.instance).packing.bin_count();
    }
    if (alg_bins != c.claimed_alg_bins)
        throw ClaimMismatch(c.generator + ": target '" + c.target_algorithm + "' used " +
                            std::to_string(alg_bins) + " bins, claim says " +
                            std::to_string(c.claimed_alg_bins));

    row.alg_bins = alg_bins;
    row.reference_bins = c.claimed_cert_bins;
    row.measured_ratio = Rat(alg_bins) / Rat(c.claimed_cert_bins);
    if (row.measured_ratio != c.claimed_ratio)
        throw ClaimMismatch(c.generator + ": measured ratio " + rat_str(row.measured_ratio) +
                            " differs from claimed " + rat_str(c.claimed_ratio));
    row.theory = detail::theory_for_case(c, row.beta);
    return row;
}

// Uniform sizes from {1/g, ..., floor(g*beta)/g}, deterministic in the seed.
// Cluster labels, when requested, are uniform and then compressed to a
// dense 1..l range so batched evaluation accepts the result directly.
inline Instance random_instance(long long n, const Rat& beta, long long granularity,
                                std::uint64_t seed, std::optional<long long> clusters = {},
                                Variant variant = Variant::Max) {
    if (n < 1) throw std::invalid_argument("random_instance: n must be >= 1");
    if (granularity < 2) throw std::invalid_argument("random_instance: granularity must be >= 2");
    if (beta <= Rat(0) || beta > Rat(1))
        throw std::invalid_argument("random_instance: beta=" + rat_str(beta) +
                                    " outside (0, 1]");
    if (clusters && *clusters < 1)
        throw std::invalid_argument("random_instance: cluster count must be >= 1");
    long long max_num = to_ll(rat_floor(Rat(granularity) * beta));
    if (max_num < 1)
        throw std::invalid_argument("random_instance: no size k/" + std::to_string(granularity) +
                                    " lies in (0, " + rat_str(beta) + "]");
    SplitMix64 rng(seed);
    Instance instance;
    instance.variant = variant;
    instance.beta = beta;
    std::vector<long long> labels;
    for (long long i = 0; i < n; ++i) {
        long long numerator = 1 + static_cast<long long>(
                                      rng.uniform_below(static_cast<std::uint64_t>(max_num)));
        std::optional<long long> label;
        if (clusters)
            label = 1 + static_cast<long long>(
                            rng.uniform_below(static_cast<std::uint64_t>(*clusters)));
        instance.items.push_back({i, Rat(numerator, granularity), label});
        if (label) labels.push_back(*label);
    }
    if (clusters) {
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        std::map<long long, long long> dense;
        for (size_t i = 0; i < labels.size(); ++i) dense[labels[i]] = static_cast<long long>(i) + 1;
        for (Item& item : instance.items) item.cluster = dense.at(*item.cluster);
    }
    instance.validate();
    return instance;
}

// Resamples (seed, seed+1, ...) until every cluster's verified optimum is
// at least two, as clustered evaluation assumes.
inline Instance random_clustered_instance(long long n, const Rat& beta, long long granularity,
                                          std::uint64_t seed, long long clusters, Variant variant,
                                          const SolveBudget& budget = {}, int retries = 64) {
    for (int attempt = 0; attempt < retries; ++attempt) {
        Instance instance =
            random_instance(n, beta, granularity, seed + static_cast<std::uint64_t>(attempt),
                            clusters, variant);
        bool ok = true;
        for (const auto& [label, part] : detail::split_by_cluster(instance, "random_clustered")) {
            if (optimal_packing(part, budget).packing.bin_count() < 2) {
                ok = false;
                break;
            }
        }
        if (ok) return instance;
    }
    throw std::runtime_error("random_clustered_instance: no admissible draw after " +
                             std::to_string(retries) + " attempts");
}

struct SweepParams {
    long long n = 25;  // construction size; for poc targets this is M
    long long m = 0;   // second parameter where a construction takes one; 0 = derived
};

namespace detail {

inline AdversarialCase case_for_sweep_point(const std::string& algorithm, const Rat& beta,
                                            const SweepParams& params) {
    if (algorithm == "nf" || algorithm == "wf") {
        long long m = params.m;
        if (m == 0)
            m = std::max(2 * params.n + 1, to_ll(rat_floor(Rat(1) / beta)) + 1);
        AdversarialCase c = gen_nf_lower(beta, params.n, m);
        c.target_algorithm = algorithm;  // worst-fit provably mirrors next-fit here
        return c;
    }
    if (algorithm == "ff") return gen_ff_lower(beta, params.n);
    if (algorithm == "nfd")
        return gen_nfd_lower(beta == Rat(1) ? 0 : t_of_beta(beta), params.n);
    if (algorithm == "ffd") {
        if (beta == Rat(1)) return gen_ffd_lower(params.n);
        return gen_ffd_param_lower(t_of_beta(beta), params.n);
    }
    if (algorithm == "batched")
        return gen_batched_lower(beta == Rat(1) ? 0 : t_of_beta(beta), params.n);
    if (algorithm == "poc") {
        if (beta == Rat(1)) return gen_poc_lower(params.n);
        long long t = t_of_beta(beta);
        int which = beta < Rat(t + 1) / Rat(t * (t + 2)) ? 1 : 2;
        return gen_poc_param_lower(beta, params.n, which);
    }
    if (algorithm == "min-poc") {
        if (beta == Rat(1)) return gen_min_poc_lower(params.n);
        if (beta.numerator() == 1)
            return gen_min_poc_param_lower(MinPocKind::Reciprocal, to_ll(beta.denominator()) - 1,
                                           params.n);
        Rat complement = Rat(1) - beta;
        if (complement.numerator() == 1 && complement.denominator() >= 5)
            return gen_min_poc_param_lower(MinPocKind::Complement, to_ll(complement.denominator()),
                                           params.n);
        throw std::invalid_argument("min-poc sweep: no construction for beta=" + rat_str(beta) +
                                    " (needs 1, 1/(t+1), or 1-1/k with k >= 5)");
    }
    throw std::invalid_argument("sweep: unknown algorithm '" + algorithm + "'");
}

}  // namespace detail

// One adversarial case per grid point, measured and annotated with the
// matching theory bound. Failures stay in their row; the sweep continues.
inline std::vector<SweepRow> sweep_beta(const std::string& algorithm, std::vector<Rat> grid,
                                        const SweepParams& params = {},
                                        const SolveBudget& budget = {}) {
    std::sort(grid.begin(), grid.end());
    std::vector<SweepRow> rows;
    for (const Rat& beta : grid) {
        SweepRow row;
        try {
            row = measure_ratio(detail::case_for_sweep_point(algorithm, beta, params), budget);
        } catch (const std::exception& e) {
            row = SweepRow{};
            row.beta = beta;
            row.algorithm = algorithm;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

inline std::pair<std::string, std::string> theory_cells(const SweepRow& row) {
    if (!row.error.empty()) return {"error", row.error};
    switch (row.theory.kind) {
        case BoundValue::Kind::Tight: return {"tight", rat_str(*row.theory.lower)};
        case BoundValue::Kind::Interval:
            return {"interval", rat_str(*row.theory.lower) + ".." + rat_str(*row.theory.upper)};
        default: return {"unknown", ""};
    }
}

}  // namespace detail

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "beta,algorithm,variant,n,alg_bins,reference_bins,measured_ratio,theory_kind,theory_value\n";
    for (const SweepRow& row : rows) {
        auto [kind, value] = detail::theory_cells(row);
        bool failed = !row.error.empty();
        out += detail::csv_field(rat_str(row.beta)) + "," + detail::csv_field(row.algorithm) +
               "," + variant_str(row.variant) + ",";
        out += failed ? std::string(",,,,")
                      : std::to_string(row.n) + "," + std::to_string(row.alg_bins) + "," +
                            std::to_string(row.reference_bins) + "," +
                            detail::csv_field(rat_str(row.measured_ratio)) + ",";
        out += detail::csv_field(kind) + "," + detail::csv_field(value) + "\n";
    }
    return out;
}

inline Json sweep_json(const std::vector<SweepRow>& rows) {
    Json arr = Json::array();
    for (const SweepRow& row : rows) {
        Json j;
        j["beta"] = rat_str(row.beta);
        j["algorithm"] = row.algorithm;
        j["variant"] = variant_str(row.variant);
        if (row.error.empty()) {
            j["n"] = row.n;
            j["alg_bins"] = row.alg_bins;
            j["reference_bins"] = row.reference_bins;
            j["measured_ratio"] = rat_str(row.measured_ratio);
            auto [kind, value] = detail::theory_cells(row);
            j["theory_kind"] = kind;
            j["theory_value"] = value;
        } else {
            j["error"] = row.error;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace oebp
