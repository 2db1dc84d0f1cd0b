#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oebp/adversary.hpp"
#include "oebp/bounds.hpp"
#include "oebp/experiments.hpp"

using namespace oebp;

namespace {

Instance labeled_instance(Variant variant,
                          const std::vector<std::pair<Rat, long long>>& sized_labels) {
    Instance instance;
    instance.variant = variant;
    long long id = 0;
    for (const auto& [size, label] : sized_labels) instance.items.push_back({id++, size, label});
    return instance;
}

Instance cluster_part(const Instance& instance, long long label) {
    Instance part;
    part.variant = instance.variant;
    part.beta = instance.beta;
    for (const Item& it : instance.items)
        if (it.cluster && *it.cluster == label) part.items.push_back(it);
    return part;
}

}  // namespace

TEST_CASE("solver mode names round trip") {
    for (SolverMode mode :
         {SolverMode::Exact, SolverMode::Certificate, SolverMode::GreedyUpper})
        REQUIRE(parse_solver_mode(solver_mode_str(mode)) == mode);
    REQUIRE_THROWS_AS(parse_solver_mode("fast"), std::invalid_argument);
}

TEST_CASE("clustered evaluation solves small clusters and falls back to the certificate") {
    AdversarialCase c = gen_poc_lower(4);
    PocReport report = run_clustered(c.instance, SolverMode::Exact, SolveBudget{},
                                     &c.certificate, &c.cluster_certificates);
    REQUIRE(report.per_cluster.size() == 13);
    REQUIRE(report.per_cluster.front() == std::pair<long long, long long>{0, 20});
    for (size_t i = 1; i < report.per_cluster.size(); ++i) {
        REQUIRE(report.per_cluster[i].first == static_cast<long long>(i));
        REQUIRE(report.per_cluster[i].second == 2);
    }
    REQUIRE(report.sum_clustered == 44);
    REQUIRE(report.global_cost == 20);
    REQUIRE(report.ratio == Rat(11, 5));
    // The oversized global instance was costed from the certificate, so the
    // effective mode downgrades and says so.
    REQUIRE(report.solver_mode == SolverMode::Certificate);
    REQUIRE(report.warnings.size() == 1);
    REQUIRE(report.warnings.front().find("certificate") != std::string::npos);
}

TEST_CASE("clustered evaluation in exact mode needs a certificate beyond the budget") {
    AdversarialCase c = gen_poc_lower(4);
    REQUIRE_THROWS_AS(run_clustered(c.instance, SolverMode::Exact, SolveBudget{}, nullptr,
                                    &c.cluster_certificates),
                      BudgetExceeded);
}

TEST_CASE("certificate mode requires certificates for every part") {
    AdversarialCase c = gen_poc_lower(4);
    REQUIRE_THROWS_AS(
        run_clustered(c.instance, SolverMode::Certificate, SolveBudget{}, &c.certificate, nullptr),
        std::invalid_argument);
    // With all certificates present it reproduces the claims.
    PocReport report = run_clustered(c.instance, SolverMode::Certificate, SolveBudget{},
                                     &c.certificate, &c.cluster_certificates);
    REQUIRE(report.sum_clustered == 44);
    REQUIRE(report.global_cost == 20);
    REQUIRE(report.solver_mode == SolverMode::Certificate);
}

TEST_CASE("clustered evaluation rejects clusters with a one-bin optimum") {
    Instance bad = labeled_instance(Variant::Max, {{Rat(1, 2), 1},
                                                   {Rat(1, 2), 2},
                                                   {Rat(1, 2), 2},
                                                   {Rat(1, 2), 2}});
    REQUIRE_THROWS_AS(run_clustered(bad, SolverMode::Exact), std::invalid_argument);
}

TEST_CASE("clustered evaluation rejects unlabeled items") {
    Instance plain;
    plain.variant = Variant::Max;
    plain.items.push_back({0, Rat(1, 2), {}});
    REQUIRE_THROWS_AS(run_clustered(plain, SolverMode::Exact), std::invalid_argument);
    Instance empty;
    REQUIRE_THROWS_AS(run_clustered(empty, SolverMode::Exact), std::invalid_argument);
}

TEST_CASE("greedy upper mode costs every part with first fit") {
    AdversarialCase c = gen_poc_lower(4);
    PocReport report = run_clustered(c.instance, SolverMode::GreedyUpper);
    REQUIRE(report.solver_mode == SolverMode::GreedyUpper);
    REQUIRE(report.sum_clustered == 44);
    REQUIRE(report.global_cost == 20);
    REQUIRE(report.ratio == Rat(11, 5));
    // Greedy costs are never verified, so each cluster carries a warning.
    REQUIRE(report.warnings.size() == 13);
}

TEST_CASE("batched evaluation requires dense labels starting at one") {
    Instance zero_based = labeled_instance(
        Variant::Max, {{Rat(1, 2), 0}, {Rat(1, 2), 0}, {Rat(1, 2), 1}, {Rat(1, 2), 1}});
    REQUIRE_THROWS_AS(run_batched(zero_based, SolverMode::Exact), std::invalid_argument);
    Instance gapped = labeled_instance(
        Variant::Max, {{Rat(1, 2), 1}, {Rat(1, 2), 1}, {Rat(1, 2), 3}, {Rat(1, 2), 3}});
    REQUIRE_THROWS_AS(run_batched(gapped, SolverMode::Exact), std::invalid_argument);

    // Batches may be tiny; no two-bin requirement applies.
    Instance tiny = labeled_instance(Variant::Max, {{Rat(1, 2), 1}, {Rat(1, 2), 2}});
    PocReport report = run_batched(tiny, SolverMode::Exact);
    REQUIRE(report.per_cluster ==
            std::vector<std::pair<long long, long long>>{{1, 1}, {2, 1}});
    REQUIRE(report.sum_clustered == 2);
    REQUIRE(report.global_cost == 1);
    REQUIRE(report.ratio == Rat(2));
    REQUIRE(report.solver_mode == SolverMode::Exact);
    REQUIRE(report.warnings.empty());
}

TEST_CASE("batched evaluation reproduces the generated two-batch case") {
    AdversarialCase c = gen_batched_lower(0, 3);
    PocReport report = run_batched(c.instance, SolverMode::Exact, SolveBudget{18, {}},
                                   &c.certificate, &c.cluster_certificates);
    REQUIRE(report.per_cluster ==
            std::vector<std::pair<long long, long long>>{{1, 9}, {2, 6}});
    REQUIRE(report.sum_clustered == 15);
    REQUIRE(report.global_cost == 9);
    REQUIRE(report.ratio == Rat(5, 3));
}

TEST_CASE("evaluation report serializes with stable keys") {
    AdversarialCase c = gen_batched_lower(0, 3);
    PocReport report = run_batched(c.instance, SolverMode::Exact, SolveBudget{18, {}},
                                   &c.certificate, &c.cluster_certificates);
    Json j = poc_report_to_json(report, c.instance.variant);
    REQUIRE(j.at("variant") == "max");
    REQUIRE(j.at("solver_mode") == "certificate");
    REQUIRE(j.at("per_cluster").size() == 2);
    REQUIRE(j.at("per_cluster")[0] == Json{{"cluster", 1}, {"cost", 9}});
    REQUIRE(j.at("sum_clustered") == 15);
    REQUIRE(j.at("global_cost") == 9);
    REQUIRE(j.at("ratio") == "5/3");
    REQUIRE(j.at("warnings").is_array());
}

TEST_CASE("measure ratio verifies every claim of a generated case") {
    AdversarialCase c = gen_ff_lower(Rat(1, 2), 10);
    SweepRow row = measure_ratio(c);
    REQUIRE(row.beta == Rat(1, 2));
    REQUIRE(row.algorithm == "ff");
    REQUIRE(row.variant == Variant::Max);
    REQUIRE(row.n == static_cast<long long>(c.instance.items.size()));
    REQUIRE(row.alg_bins == 28);
    REQUIRE(row.reference_bins == 20);
    REQUIRE(row.measured_ratio == Rat(7, 5));
    REQUIRE(row.theory.kind == BoundValue::Kind::Tight);
    REQUIRE(*row.theory.lower == Rat(3, 2));

    AdversarialCase tampered_count = c;
    tampered_count.claimed_alg_bins += 1;
    REQUIRE_THROWS_AS(measure_ratio(tampered_count), ClaimMismatch);

    AdversarialCase tampered_cert = c;
    tampered_cert.claimed_cert_bins += 1;
    REQUIRE_THROWS_AS(measure_ratio(tampered_cert), ClaimMismatch);

    AdversarialCase tampered_ratio = c;
    tampered_ratio.claimed_ratio = Rat(3, 2);
    REQUIRE_THROWS_AS(measure_ratio(tampered_ratio), ClaimMismatch);

    AdversarialCase broken_cert = c;
    broken_cert.certificate.bins.push_back(Bin{});
    REQUIRE_THROWS_AS(measure_ratio(broken_cert), ClaimMismatch);
}

TEST_CASE("measure ratio re-runs partitioned targets") {
    AdversarialCase batched = gen_batched_lower(0, 3);
    SweepRow row = measure_ratio(batched, SolveBudget{18, {}});
    REQUIRE(row.alg_bins == 15);
    REQUIRE(row.reference_bins == 9);
    REQUIRE(row.measured_ratio == Rat(5, 3));
    REQUIRE(row.theory.kind == BoundValue::Kind::Tight);
    REQUIRE(*row.theory.lower == Rat(2));

    AdversarialCase poc = gen_poc_lower(4);
    SweepRow prow = measure_ratio(poc);
    REQUIRE(prow.measured_ratio == Rat(11, 5));
    REQUIRE(prow.theory.kind == BoundValue::Kind::Tight);
    REQUIRE(*prow.theory.lower == r2(Rat(1)));

    AdversarialCase min_poc = gen_min_poc_lower(10);
    SweepRow mrow = measure_ratio(min_poc);
    REQUIRE(mrow.variant == Variant::Min);
    REQUIRE(mrow.measured_ratio == Rat(40, 11));
    REQUIRE(mrow.theory.kind == BoundValue::Kind::Tight);
    REQUIRE(*mrow.theory.lower == Rat(4));
}

TEST_CASE("random instances are deterministic in the seed") {
    Instance a = random_instance(40, Rat(1, 2), 12, 99);
    Instance b = random_instance(40, Rat(1, 2), 12, 99);
    REQUIRE(a.items.size() == 40);
    REQUIRE(instance_to_json(a) == instance_to_json(b));
    Instance c = random_instance(40, Rat(1, 2), 12, 100);
    REQUIRE(instance_to_json(a) != instance_to_json(c));

    for (const Item& it : a.items) {
        REQUIRE(it.size > Rat(0));
        REQUIRE(it.size <= Rat(1, 2));
        REQUIRE(it.size.denominator() * it.size.numerator() * Int(12) % it.size.denominator() ==
                Int(0));
        REQUIRE_FALSE(it.cluster.has_value());
    }
    REQUIRE_NOTHROW(a.validate());
}

TEST_CASE("random instances reject unreachable size grids") {
    REQUIRE_THROWS_AS(random_instance(5, Rat(1, 10), 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(random_instance(0, Rat(1, 2), 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(random_instance(5, Rat(1, 2), 1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(random_instance(5, Rat(1, 2), 5, 1, -2), std::invalid_argument);
    REQUIRE_THROWS_AS(random_instance(5, Rat(3, 2), 5, 1), std::invalid_argument);
}

TEST_CASE("random instances cover the whole size grid") {
    Instance a = random_instance(500, Rat(1), 5, 42);
    std::set<Rat> seen;
    for (const Item& it : a.items) seen.insert(it.size);
    REQUIRE(seen == std::set<Rat>{Rat(1, 5), Rat(2, 5), Rat(3, 5), Rat(4, 5), Rat(1)});
}

TEST_CASE("random cluster labels are compressed to a dense range") {
    Instance a = random_instance(5, Rat(1, 2), 12, 7, 1000);
    std::set<long long> labels;
    for (const Item& it : a.items) labels.insert(it.cluster.value());
    REQUIRE(labels.size() <= 5);
    long long expect = 1;
    for (long long label : labels) REQUIRE(label == expect++);

    Instance big = random_instance(60, Rat(1, 2), 12, 7, 4);
    std::set<long long> big_labels;
    for (const Item& it : big.items) big_labels.insert(it.cluster.value());
    REQUIRE(big_labels == std::set<long long>{1, 2, 3, 4});
    REQUIRE_NOTHROW(run_batched(big, SolverMode::GreedyUpper));
}

TEST_CASE("random clustered instances have two-bin clusters") {
    Instance a = random_clustered_instance(24, Rat(1, 2), 12, 7, 3, Variant::Max);
    std::set<long long> labels;
    for (const Item& it : a.items) labels.insert(it.cluster.value());
    for (long long label : labels) {
        Instance part = cluster_part(a, label);
        REQUIRE(optimal_packing(part).packing.bin_count() >= 2);
    }
    REQUIRE_NOTHROW(run_clustered(a, SolverMode::Exact, SolveBudget{24, {}}));

    Instance m = random_clustered_instance(10, Rat(1), 5, 11, 2, Variant::Min);
    REQUIRE_NOTHROW(run_clustered(m, SolverMode::Exact));

    // Sparse clusters that can never need two bins exhaust the retry budget.
    REQUIRE_THROWS_AS(random_clustered_instance(4, Rat(1, 4), 12, 7, 4, Variant::Max),
                      std::runtime_error);
}

TEST_CASE("beta sweep measures the ff family against its tight bound") {
    std::vector<SweepRow> rows =
        sweep_beta("ff", {Rat(1, 2), Rat(1, 4), Rat(1, 3), Rat(9, 20)}, SweepParams{20, 0});
    REQUIRE(rows.size() == 4);
    REQUIRE(rows[0].beta == Rat(1, 4));
    REQUIRE(rows[1].beta == Rat(1, 3));
    REQUIRE(rows[2].beta == Rat(9, 20));
    REQUIRE(rows[3].beta == Rat(1, 2));
    std::vector<long long> bins;
    for (const SweepRow& row : rows) {
        INFO("beta=" << rat_str(row.beta) << " error=" << row.error);
        REQUIRE(row.error.empty());
        REQUIRE(row.theory.kind == BoundValue::Kind::Tight);
        REQUIRE(*row.theory.lower == r1(row.beta));
        REQUIRE(row.measured_ratio >= r1(row.beta) - Rat(1, 20));
        REQUIRE(row.measured_ratio < r1(row.beta));
        bins.push_back(row.alg_bins);
    }
    REQUIRE(bins == std::vector<long long>{96, 104, 106, 58});
}

TEST_CASE("beta sweep records per-point failures and continues") {
    std::vector<SweepRow> rows = sweep_beta("min-poc", {Rat(1), Rat(2, 5)}, SweepParams{10, 0});
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].beta == Rat(2, 5));
    REQUIRE(rows[0].algorithm == "min-poc");
    REQUIRE(rows[0].error.find("no construction") != std::string::npos);
    REQUIRE(rows[1].error.empty());
    REQUIRE(rows[1].measured_ratio == Rat(40, 11));
    REQUIRE(*rows[1].theory.lower == Rat(4));

    REQUIRE(sweep_beta("bogus", {Rat(1, 2)}).front().error.find("unknown algorithm") !=
            std::string::npos);
}

TEST_CASE("beta sweep covers the clustered constructions") {
    std::vector<SweepRow> rows =
        sweep_beta("poc", {Rat(1), Rat(9, 20), Rat(1, 4)}, SweepParams{20, 0});
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].beta == Rat(1, 4));
    REQUIRE(rows[0].error.empty());
    REQUIRE(rows[0].measured_ratio == Rat(232, 105));
    REQUIRE(*rows[0].theory.lower == Rat(12, 5));
    REQUIRE(rows[1].beta == Rat(9, 20));
    REQUIRE(rows[1].measured_ratio == Rat(12, 5));
    REQUIRE(*rows[1].theory.lower == Rat(13, 5));
    REQUIRE(rows[2].beta == Rat(1));
    REQUIRE(rows[2].measured_ratio == Rat(59, 21));
    REQUIRE(*rows[2].theory.lower == Rat(3));
    for (const SweepRow& row : rows) REQUIRE(row.measured_ratio < *row.theory.lower);
}

TEST_CASE("sweep csv renders all row shapes") {
    SweepRow tight_row;
    tight_row.beta = Rat(1, 2);
    tight_row.algorithm = "ff";
    tight_row.variant = Variant::Max;
    tight_row.n = 10;
    tight_row.alg_bins = 28;
    tight_row.reference_bins = 20;
    tight_row.measured_ratio = Rat(7, 5);
    tight_row.theory = BoundValue::tight(Rat(3, 2));

    SweepRow error_row;
    error_row.beta = Rat(2, 5);
    error_row.algorithm = "min-poc";
    error_row.error = "boom, \"quoted\"";

    SweepRow interval_row;
    interval_row.beta = Rat(13, 15);
    interval_row.algorithm = "min-poc";
    interval_row.variant = Variant::Min;
    interval_row.n = 5;
    interval_row.alg_bins = 8;
    interval_row.reference_bins = 3;
    interval_row.measured_ratio = Rat(8, 3);
    interval_row.theory = BoundValue::interval(Rat(16, 5), Rat(4));

    SweepRow unknown_row;
    unknown_row.beta = Rat(9, 20);
    unknown_row.algorithm = "ffd";
    unknown_row.variant = Variant::Max;
    unknown_row.n = 37;
    unknown_row.alg_bins = 37;
    unknown_row.reference_bins = 30;
    unknown_row.measured_ratio = Rat(37, 30);
    unknown_row.theory = BoundValue::unknown();

    std::string csv = sweep_csv({tight_row, error_row, interval_row, unknown_row});
    REQUIRE(csv ==
            "beta,algorithm,variant,n,alg_bins,reference_bins,measured_ratio,theory_kind,"
            "theory_value\n"
            "1/2,ff,max,10,28,20,7/5,tight,3/2\n"
            "2/5,min-poc,max,,,,,error,\"boom, \"\"quoted\"\"\"\n"
            "13/15,min-poc,min,5,8,3,8/3,interval,16/5..4\n"
            "9/20,ffd,max,37,37,30,37/30,unknown,\n");

    Json arr = sweep_json({tight_row, error_row});
    REQUIRE(arr.size() == 2);
    REQUIRE(arr[0].at("measured_ratio") == "7/5");
    REQUIRE(arr[0].at("theory_kind") == "tight");
    REQUIRE(arr[0].at("theory_value") == "3/2");
    REQUIRE_FALSE(arr[0].contains("error"));
    REQUIRE(arr[1].at("error") == "boom, \"quoted\"");
    REQUIRE_FALSE(arr[1].contains("alg_bins"));
}
