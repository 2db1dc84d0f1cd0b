#include <catch2/catch_amalgamated.hpp>

#include "oebp/bounds.hpp"
#include "oebp/core.hpp"

using namespace oebp;

namespace {

Bin bin_of(std::vector<Rat> sizes) {
    Bin bin;
    long long id = 0;
    for (const Rat& s : sizes) bin.add(id++, s);
    return bin;
}

Packing packing_of(Variant variant, std::vector<std::vector<Rat>> bins) {
    Packing packing;
    packing.variant = variant;
    for (auto& sizes : bins) packing.bins.push_back(bin_of(std::move(sizes)));
    return packing;
}

}  // namespace

TEST_CASE("r1 pinned values") {
    CHECK(r1(Rat(1)) == Rat(2));
    CHECK(r1(Rat(1, 2)) == Rat(3, 2));
    CHECK(r1(Rat(1, 3)) == Rat(4, 3));
    CHECK(r1(Rat(1, 4)) == Rat(5, 4));
    CHECK(r1(Rat(9, 20)) == Rat(109, 80));
    CHECK(r1(Rat(2, 5)) == Rat(27, 20));
    CHECK_THROWS_AS(r1(Rat(0)), std::domain_error);
    CHECK_THROWS_AS(r1(Rat(3, 2)), std::domain_error);
}

TEST_CASE("r1 is nondecreasing and stays in (1, 2]") {
    Rat previous(0);
    for (long long num = 1; num <= 120; ++num) {
        Rat beta(num, 120);
        Rat value = r1(beta);
        CHECK(value > Rat(1));
        CHECK(value <= Rat(2));
        CHECK(value >= previous);
        previous = value;
    }
}

TEST_CASE("r2 pinned values and continuity") {
    CHECK(r2(Rat(1)) == Rat(3));
    CHECK(r2(Rat(0)) == Rat(2));
    CHECK(r2(Rat(3, 8)) == Rat(5, 2));
    CHECK(r2(Rat(7, 10)) == Rat(27, 10));
    CHECK(r2(Rat(1, 2)) == Rat(8, 3));
    // At each piece boundary (t+1)/(t(t+2)) both formulas give the same
    // value, approached from either side.
    for (long long t = 1; t <= 8; ++t) {
        Rat split(t + 1, t * (t + 2));
        Rat piece_value = Rat(2 * (t + 3)) / Rat(t + 2);
        CHECK(r2(split) == piece_value);
        Rat just_below = split - Rat(1, 1000000000);
        REQUIRE(t_of_beta(just_below) == t);
        CHECK(r2(just_below) == piece_value);
        Rat just_above = split + Rat(1, 1000000000);
        CHECK(r2(just_above) > piece_value);
    }
    CHECK_THROWS_AS(r2(Rat(-1, 10)), std::domain_error);
}

TEST_CASE("r2 is nondecreasing between 2 and 3") {
    Rat previous(2);
    for (long long num = 0; num <= 120; ++num) {
        Rat value = r2(Rat(num, 120));
        CHECK(value >= Rat(2));
        CHECK(value <= Rat(3));
        CHECK(value >= previous);
        previous = value;
    }
}

TEST_CASE("known bounds, max variant") {
    CHECK(known_bound("nf", Variant::Max, Rat(3, 4)).lower == Rat(7, 4));
    CHECK(known_bound("wf", Variant::Max, Rat(3, 4)).lower == Rat(7, 4));
    CHECK(known_bound("af", Variant::Max, Rat(1, 3)).lower == Rat(4, 3));
    CHECK(known_bound("ff", Variant::Max, Rat(1)).lower == Rat(2));
    CHECK(known_bound("ff", Variant::Max, Rat(1, 2)).lower == Rat(3, 2));
    CHECK(known_bound("ff", Variant::Max, Rat(9, 20)).lower == Rat(109, 80));
    CHECK(known_bound("nfd", Variant::Max, Rat(1)).lower == Rat(2));
    CHECK(known_bound("nfd", Variant::Max, Rat(1, 2)).lower == Rat(3, 2));
    CHECK(known_bound("nfd", Variant::Max, Rat(9, 20)).lower == Rat(4, 3));
    CHECK(known_bound("ffd", Variant::Max, Rat(1)).lower == Rat(3, 2));
    CHECK(known_bound("ffd", Variant::Max, Rat(1, 2)).lower == Rat(4, 3));
    CHECK(known_bound("ffd", Variant::Max, Rat(9, 20)).kind == BoundValue::Kind::Unknown);
    CHECK(known_bound("ffd", Variant::Max, Rat(1, 3)).kind == BoundValue::Kind::Unknown);
    for (const char* alg : {"nf", "wf", "ff", "nfd"}) {
        CHECK(known_bound(alg, Variant::Max, Rat(1, 2)).kind == BoundValue::Kind::Tight);
    }
    CHECK_THROWS_AS(known_bound("bogus", Variant::Max, Rat(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(known_bound("ff", Variant::Max, Rat(0)), std::domain_error);
}

TEST_CASE("known bounds, min variant") {
    CHECK(known_bound("nf", Variant::Min, Rat(1)).lower == Rat(4));
    CHECK(known_bound("nf", Variant::Min, Rat(1, 2)).lower == Rat(3));
    CHECK(known_bound("nf", Variant::Min, Rat(1, 3)).lower == Rat(2));
    CHECK(known_bound("nf", Variant::Min, Rat(2, 5)).kind == BoundValue::Kind::Unknown);
    CHECK(known_bound("wf", Variant::Min, Rat(1)).lower == Rat(3));
    CHECK(known_bound("wf", Variant::Min, Rat(3, 5)).lower == Rat(3));
    CHECK(known_bound("wf", Variant::Min, Rat(1, 2)).lower == Rat(3));
    CHECK(known_bound("wf", Variant::Min, Rat(1, 3)).lower == Rat(2));
    CHECK(known_bound("wf", Variant::Min, Rat(2, 5)).kind == BoundValue::Kind::Unknown);
    CHECK(known_bound("ff", Variant::Min, Rat(1)).lower == Rat(2));
    CHECK(known_bound("ff", Variant::Min, Rat(1, 2)).lower == Rat(3, 2));
    CHECK(known_bound("ff", Variant::Min, Rat(1, 4)).lower == Rat(5, 4));
    CHECK(known_bound("ff", Variant::Min, Rat(3, 5)).kind == BoundValue::Kind::Unknown);
    CHECK(known_bound("nfd", Variant::Min, Rat(1)).lower == Rat(71, 60));
    CHECK(known_bound("nfd", Variant::Min, Rat(1, 2)).lower == Rat(71, 60));
    CHECK(known_bound("ffd", Variant::Min, Rat(2, 5)).lower == Rat(71, 60));
    CHECK(known_bound("nfd", Variant::Min, Rat(1, 4)).lower == Rat(23, 20));
    CHECK(known_bound("nfd", Variant::Min, Rat(1, 5)).lower == Rat(239, 210));
    CHECK(known_bound("ffd", Variant::Min, Rat(1, 6)).lower == Rat(47, 42));
    CHECK(known_bound("nfd", Variant::Min, Rat(2, 7)).kind == BoundValue::Kind::Unknown);
    CHECK(known_bound("af", Variant::Min, Rat(1, 2)).kind == BoundValue::Kind::Unknown);
}

TEST_CASE("min price-of-clustering bound") {
    CHECK(min_poc_bound(Rat(1)).lower == Rat(4));
    CHECK(min_poc_bound(Rat(4, 5)).lower == Rat(3));
    CHECK(min_poc_bound(Rat(1, 2)).lower == Rat(3));
    CHECK(min_poc_bound(Rat(2, 3)).lower == Rat(3));
    CHECK(min_poc_bound(Rat(1, 3)).lower == Rat(8, 3));
    CHECK(min_poc_bound(Rat(1, 4)).lower == Rat(5, 2));
    CHECK(min_poc_bound(Rat(5, 6)).lower == Rat(28, 9));
    CHECK(min_poc_bound(Rat(9, 10)).lower == Rat(44, 13));
    CHECK(min_poc_bound(Rat(9, 10)).kind == BoundValue::Kind::Tight);

    BoundValue wide = min_poc_bound(Rat(2, 5));
    CHECK(wide.kind == BoundValue::Kind::Interval);
    CHECK(wide.lower == Rat(8, 3));
    CHECK(wide.upper == Rat(4));

    BoundValue high = min_poc_bound(Rat(13, 15));
    CHECK(high.kind == BoundValue::Kind::Interval);
    CHECK(high.lower == Rat(16, 5));
    CHECK(high.upper == Rat(4));
}

TEST_CASE("bound value formatting") {
    CHECK(bound_str(BoundValue::tight(Rat(3, 2))) == "tight 3/2");
    CHECK(bound_str(BoundValue::interval(Rat(8, 3), Rat(4))) == "interval [8/3, 4]");
    CHECK(bound_str(BoundValue::unknown()) == "unknown");
    CHECK_THROWS_AS(BoundValue::interval(Rat(4), Rat(8, 3)), std::logic_error);
}

TEST_CASE("first-fit weight shape") {
    WeightFn fn = ff_weight(2, Rat(9, 20));
    CHECK(weight(Rat(1, 4), fn) == Rat(1, 4));
    CHECK(weight(Rat(3, 10), fn) == Rat(3, 10));
    CHECK(weight(Rat(1, 3), fn) == Rat(1, 3));
    CHECK(weight(Rat(2, 5), fn) == Rat(7, 20));
    CHECK(weight(Rat(9, 20), fn) == Rat(29, 80));
    CHECK_THROWS_AS(weight(Rat(1, 2), fn), std::domain_error);
    CHECK_THROWS_AS(weight(Rat(0), fn), std::domain_error);
    CHECK_THROWS_AS(ff_weight(1, Rat(9, 20)), std::invalid_argument);
    CHECK_THROWS_AS(ff_weight(0, Rat(1)), std::invalid_argument);
}

TEST_CASE("nfd and batched weight shapes") {
    WeightFn nfd1 = nfd_weight(1, Rat(1, 2));
    CHECK(weight(Rat(1, 8), nfd1) == Rat(1, 8));
    CHECK(weight(Rat(2, 5), nfd1) == Rat(2, 5));
    CHECK(weight(Rat(1, 2), nfd1) == Rat(1, 2));
    WeightFn nfd0 = nfd_weight(0, Rat(1));
    CHECK(weight(Rat(1), nfd0) == Rat(1));
    CHECK(weight(Rat(1, 2), nfd0) == Rat(1, 2));
    WeightFn batched2 = batched_weight(2, Rat(1, 3));
    CHECK(weight(Rat(1, 5), batched2) == Rat(1, 5));
    CHECK(weight(Rat(1, 3), batched2) == Rat(1, 3));
    CHECK_THROWS_AS(weight(Rat(1, 2), batched2), std::domain_error);
    CHECK_THROWS_AS(nfd_weight(2, Rat(1, 2)), std::invalid_argument);
}

TEST_CASE("ffd weight shapes") {
    WeightFn plain = ffd_weight();
    CHECK(weight(Rat(1, 4), plain) == Rat(1, 4));
    CHECK(weight(Rat(499, 1000), plain) == Rat(499, 1000));
    CHECK(weight(Rat(1, 2), plain) == Rat(1, 2));
    CHECK(weight(Rat(3, 4), plain) == Rat(1, 2));
    CHECK(weight(Rat(1), plain) == Rat(1, 2));

    WeightFn flat = ffd_half_weight1();
    CHECK(weight(Rat(1, 4), flat) == Rat(1, 3));
    CHECK(weight(Rat(1, 3), flat) == Rat(1, 3));
    CHECK(weight(Rat(1, 2), flat) == Rat(1, 3));
    CHECK_THROWS_AS(weight(Rat(1, 5), flat), std::domain_error);
    CHECK_THROWS_AS(weight(Rat(3, 5), flat), std::domain_error);

    WeightFn stepped = ffd_half_weight2(Rat(1, 5));
    CHECK(weight(Rat(1, 2), stepped) == Rat(1, 3));
    CHECK(weight(Rat(3, 10), stepped) == Rat(1, 3));
    CHECK(weight(Rat(29, 100), stepped) == Rat(1, 4));
    CHECK(weight(Rat(1, 4), stepped) == Rat(1, 4));
    CHECK(weight(Rat(24, 100), stepped) == Rat(1, 5));
    CHECK(weight(Rat(1, 5), stepped) == Rat(1, 5));
    CHECK(weight(Rat(19, 100), stepped) == Rat(1, 6));
    CHECK(weight(Rat(1, 6), stepped) == Rat(1, 6));
    CHECK_THROWS_AS(weight(Rat(1, 7), stepped), std::domain_error);
    CHECK_THROWS_AS(ffd_half_weight2(Rat(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(ffd_half_weight2(Rat(1, 6)), std::invalid_argument);
}

TEST_CASE("clustering weight shapes") {
    WeightFn global = poc_max_weight();
    CHECK(weight(Rat(1, 4), global) == Rat(1, 4));
    CHECK(weight(Rat(1, 2), global) == Rat(1, 2));
    CHECK(weight(Rat(3, 4), global) == Rat(1, 2));
    CHECK(weight(Rat(1), global) == Rat(1, 2));

    WeightFn param2 = poc_param_weight(2);
    CHECK(weight(Rat(0), param2) == Rat(0));
    CHECK(weight(Rat(1, 8), param2) == Rat(1, 8));
    CHECK(weight(Rat(1, 4), param2) == Rat(1, 4));
    CHECK(weight(Rat(5, 16), param2) == Rat(1, 4));
    CHECK(weight(Rat(3, 8), param2) == Rat(1, 4));
    CHECK(weight(Rat(9, 20), param2) == Rat(3, 10));
    CHECK_THROWS_AS(weight(Rat(1, 2), param2), std::domain_error);

    WeightFn param3 = poc_param_weight(3);
    CHECK(weight(Rat(1, 4), param3) == Rat(1, 5));
    CHECK(weight(Rat(4, 15), param3) == Rat(1, 5));
    CHECK(weight(Rat(3, 10), param3) == Rat(9, 40));
    CHECK_THROWS_AS(weight(Rat(1, 3), param3), std::domain_error);
    CHECK_THROWS_AS(poc_param_weight(0), std::invalid_argument);

    WeightFn min5 = min_poc_weight(5);
    CHECK(weight(Rat(1, 10), min5) == Rat(1, 8));
    CHECK(weight(Rat(1, 5), min5) == Rat(1, 4));
    CHECK(weight(Rat(1, 4), min5) == Rat(1, 4));
    CHECK(weight(Rat(1, 2), min5) == Rat(1, 2));
    CHECK(weight(Rat(3, 4), min5) == Rat(3, 4));
    CHECK(weight(Rat(4, 5), min5) == Rat(3, 4));
    CHECK_THROWS_AS(weight(Rat(9, 10), min5), std::domain_error);
    CHECK_THROWS_AS(min_poc_weight(4), std::invalid_argument);

    WeightFn unknown{"nope", 0, 0, Rat(1), Rat(0)};
    CHECK_THROWS_AS(weight(Rat(1, 2), unknown), std::invalid_argument);
}

TEST_CASE("reference packing weight cap check") {
    WeightFn fn = poc_max_weight();
    Packing packing = packing_of(Variant::Max, {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 4)}});

    auto strict = check_opt_bin_weights(packing, fn, Rat(1), true);
    CHECK_FALSE(strict.pass);
    CHECK(strict.violating_bins == std::vector<size_t>{0});
    CHECK(strict.bin_weights == std::vector<Rat>{Rat(1), Rat(1, 4)});

    auto lax = check_opt_bin_weights(packing, fn, Rat(1), false);
    CHECK(lax.pass);

    Packing invalid = packing_of(Variant::Max, {{Rat(1), Rat(1)}});
    CHECK_THROWS_AS(check_opt_bin_weights(invalid, fn, Rat(1), true), std::invalid_argument);
    Packing with_empty = packing_of(Variant::Max, {{Rat(1, 2)}});
    with_empty.bins.emplace_back();
    CHECK_THROWS_AS(check_opt_bin_weights(with_empty, fn, Rat(1), true), std::invalid_argument);
}

TEST_CASE("algorithm packing weight floor check") {
    WeightFn fn = poc_max_weight();
    Packing packing = packing_of(
        Variant::Max, {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 10)}, {Rat(1, 10)}});

    auto two_allowed = check_alg_bin_weights(packing, fn, Rat(1), 2);
    CHECK(two_allowed.pass);
    CHECK(two_allowed.violating_bins == std::vector<size_t>{1, 2});

    auto one_allowed = check_alg_bin_weights(packing, fn, Rat(1), 1);
    CHECK_FALSE(one_allowed.pass);

    Json j = weight_report_to_json(one_allowed);
    CHECK(j.at("pass") == false);
    CHECK(j.at("exception_count") == 2);
    CHECK(j.at("allowed_exceptions") == 1);
    CHECK(j.at("bin_weights")[0] == "1");
}
