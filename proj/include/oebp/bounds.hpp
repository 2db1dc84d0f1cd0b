#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oebp/core.hpp"
#include "oebp/io.hpp"

namespace oebp {

// A competitive-ratio value: exactly known, bracketed, or open.
struct BoundValue {
    enum class Kind { Tight, Interval, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<Rat> lower;
    std::optional<Rat> upper;

    static BoundValue tight(const Rat& v) { return {Kind::Tight, v, v}; }
    static BoundValue interval(const Rat& lo, const Rat& hi) {
        if (lo > hi) throw std::logic_error("BoundValue: interval lower exceeds upper");
        return {Kind::Interval, lo, hi};
    }
    static BoundValue unknown() { return {}; }
};

inline std::string bound_str(const BoundValue& b) {
    switch (b.kind) {
        case BoundValue::Kind::Tight:
            return "tight " + rat_str(*b.lower);
        case BoundValue::Kind::Interval:
            return "interval [" + rat_str(*b.lower) + ", " + rat_str(*b.upper) + "]";
        default:
            return "unknown";
    }
}

namespace detail {

inline void check_beta_domain(const Rat& beta, const char* fn, bool allow_zero = false) {
    if ((allow_zero ? beta < Rat(0) : beta <= Rat(0)) || beta > Rat(1))
        throw std::domain_error(std::string(fn) + ": beta=" + rat_str(beta) +
                                " outside the unit interval");
}

}  // namespace detail

// Worst-case ratio of first-fit style packing for the max variant as a
// function of the size cap; piecewise in t = t_of_beta(beta).
inline Rat r1(const Rat& beta) {
    detail::check_beta_domain(beta, "r1");
    if (beta == Rat(1)) return Rat(2);
    long long t = t_of_beta(beta);
    if (t % 2 == 0) return Rat(1) + (Rat(4) + Rat(t * t) * beta) / Rat((t + 2) * (t + 2));
    return Rat(1) + (Rat(4) + Rat(t * t - 1) * beta) / Rat((t + 1) * (t + 3));
}

// Worst-case clustered-to-global ratio for the max variant; non-decreasing
// from r2(0) = 2 to r2(1) = 3.
inline Rat r2(const Rat& beta) {
    detail::check_beta_domain(beta, "r2", /*allow_zero=*/true);
    if (beta == Rat(1)) return Rat(3);
    if (beta == Rat(0)) return Rat(2);
    long long t = t_of_beta(beta);
    Rat split = Rat(t + 1) / Rat(t * (t + 2));
    if (beta < split) return Rat(2 * (t + 3)) / Rat(t + 2);
    return Rat(2) + Rat(2 * t) * beta / Rat(t + 1);
}

// Proven worst-case ratio for one algorithm at cap beta, where one exists.
// Values not settled in closed form come back Unknown rather than guessed.
inline BoundValue known_bound(const std::string& algorithm, Variant variant, const Rat& beta) {
    detail::check_beta_domain(beta, "known_bound");
    bool unit_fraction = beta.numerator() == 1;
    long long k = unit_fraction ? to_ll(beta.denominator()) : 0;
    if (variant == Variant::Max) {
        if (algorithm == "nf" || algorithm == "wf" || algorithm == "af")
            return BoundValue::tight(Rat(1) + beta);
        if (algorithm == "ff")
            return beta == Rat(1) ? BoundValue::tight(Rat(2)) : BoundValue::tight(r1(beta));
        if (algorithm == "nfd") {
            long long t = beta == Rat(1) ? 0 : t_of_beta(beta);
            return BoundValue::tight(Rat(1) + Rat(1, t + 1));
        }
        if (algorithm == "ffd") {
            if (beta == Rat(1)) return BoundValue::tight(Rat(3, 2));
            if (beta == Rat(1, 2)) return BoundValue::tight(Rat(4, 3));
            return BoundValue::unknown();
        }
    } else {
        if (algorithm == "nf") {
            if (beta == Rat(1)) return BoundValue::tight(Rat(4));
            if (unit_fraction && k >= 2) return BoundValue::tight(Rat(k + 1) / Rat(k - 1));
            return BoundValue::unknown();
        }
        if (algorithm == "wf") {
            if (beta >= Rat(1, 2)) return BoundValue::tight(Rat(3));
            if (unit_fraction && k >= 3) return BoundValue::tight(Rat(k + 1) / Rat(k - 1));
            return BoundValue::unknown();
        }
        if (algorithm == "ff") {
            if (beta == Rat(1)) return BoundValue::tight(Rat(2));
            if (unit_fraction && k >= 2) return BoundValue::tight(Rat(k + 1) / Rat(k));
            return BoundValue::unknown();
        }
        if (algorithm == "nfd" || algorithm == "ffd") {
            if (beta >= Rat(1, 3)) return BoundValue::tight(Rat(71, 60));
            if (unit_fraction && k >= 4) {
                Rat base = Rat(1) + Rat(1, k + 2);
                Rat corr = Rat(k % 2 == 1 ? 1 : 2) / Rat(k * (k + 1) * (k + 2));
                return BoundValue::tight(base - corr);
            }
            return BoundValue::unknown();
        }
        if (algorithm == "af") return BoundValue::unknown();
    }
    throw std::invalid_argument("known_bound: unrecognized algorithm id '" + algorithm + "'");
}

// Price-of-clustering bound for the min variant. Tight where settled, else
// the best applicable adversarial lower bound paired with the universal
// upper bound 4.
inline BoundValue min_poc_bound(const Rat& beta) {
    detail::check_beta_domain(beta, "min_poc_bound");
    if (beta == Rat(1)) return BoundValue::tight(Rat(4));
    if (beta >= Rat(1, 2) && beta <= Rat(4, 5)) return BoundValue::tight(Rat(3));
    Rat complement = Rat(1) - beta;
    if (complement.numerator() == 1 && complement.denominator() >= 5) {
        long long k = to_ll(complement.denominator());
        return BoundValue::tight(Rat(4 * (k + 1)) / Rat(k + 3));
    }
    long long t = t_of_beta(beta);
    if (beta.numerator() == 1) return BoundValue::tight(Rat(2 * (t + 2)) / Rat(t + 1));
    Rat lower = Rat(2 * (t + 2)) / Rat(t + 1);
    Rat inv = Rat(1) / complement;
    long long kc = to_ll(rat_floor(inv));
    if (kc >= 5) lower = std::max(lower, Rat(4 * (kc + 1)) / Rat(kc + 3));
    return BoundValue::interval(lower, Rat(4));
}

// Piecewise weight function used by a bin-counting argument. The id picks
// the shape; t, k, beta, theta are the parameters the shape needs.
struct WeightFn {
    std::string id;
    long long t = 0;
    long long k = 0;
    Rat beta{0};
    Rat theta{0};
};

namespace detail {

inline void require_t_matches(long long t, const Rat& beta, const char* fn) {
    long long expect = beta == Rat(1) ? 0 : t_of_beta(beta);
    if (t != expect)
        throw std::invalid_argument(std::string(fn) + ": t=" + std::to_string(t) +
                                    " does not match beta=" + rat_str(beta));
}

[[noreturn]] inline void domain_fail(const std::string& id, const Rat& x,
                                     const std::string& interval) {
    throw std::domain_error(id + ": x=" + rat_str(x) + " outside " + interval);
}

}  // namespace detail

inline WeightFn ff_weight(long long t, const Rat& beta) {
    if (t < 1) throw std::invalid_argument("ff_weight: t must be >= 1");
    detail::require_t_matches(t, beta, "ff_weight");
    return {"ff_w", t, 0, beta, Rat(0)};
}

inline WeightFn nfd_weight(long long t, const Rat& beta) {
    if (t < 0) throw std::invalid_argument("nfd_weight: t must be >= 0");
    detail::require_t_matches(t, beta, "nfd_weight");
    return {"nfd_w", t, 0, beta, Rat(0)};
}

inline WeightFn ffd_weight() { return {"ffd_w", 0, 0, Rat(1), Rat(0)}; }

inline WeightFn ffd_half_weight1() { return {"ffd_half_w1", 0, 0, Rat(1, 2), Rat(0)}; }

inline WeightFn ffd_half_weight2(const Rat& theta) {
    if (theta <= Rat(1, 6) || theta >= Rat(1, 4))
        throw std::invalid_argument("ffd_half_weight2: theta=" + rat_str(theta) +
                                    " outside (1/6, 1/4)");
    return {"ffd_half_w2", 0, 0, Rat(1, 2), theta};
}

inline WeightFn batched_weight(long long t, const Rat& beta) {
    if (t < 0) throw std::invalid_argument("batched_weight: t must be >= 0");
    detail::require_t_matches(t, beta, "batched_weight");
    return {"batched_w", t, 0, beta, Rat(0)};
}

inline WeightFn poc_max_weight() { return {"poc_max_w", 0, 0, Rat(1), Rat(0)}; }

inline WeightFn poc_param_weight(long long t) {
    if (t < 1) throw std::invalid_argument("poc_param_weight: t must be >= 1");
    return {"poc_param_w", t, 0, Rat(0), Rat(0)};
}

inline WeightFn min_poc_weight(long long k) {
    if (k < 5) throw std::invalid_argument("min_poc_weight: k must be >= 5");
    return {"min_poc_w", 0, k, Rat(0), Rat(0)};
}

// Evaluates fn at x; boundary points follow each piece's stated bracket.
inline Rat weight(const Rat& x, const WeightFn& fn) {
    if (fn.id == "ff_w") {
        if (x <= Rat(0) || x > fn.beta)
            detail::domain_fail(fn.id, x, "(0, " + rat_str(fn.beta) + "]");
        if (x < Rat(1, fn.t + 1)) return x;
        return r1(x) - Rat(1);
    }
    if (fn.id == "nfd_w" || fn.id == "batched_w") {
        if (x <= Rat(0) || x > fn.beta)
            detail::domain_fail(fn.id, x, "(0, " + rat_str(fn.beta) + "]");
        Rat plateau(1, fn.t + 1);
        return x < plateau ? x : plateau;
    }
    if (fn.id == "ffd_w") {
        if (x <= Rat(0) || x > Rat(1)) detail::domain_fail(fn.id, x, "(0, 1]");
        return x < Rat(1, 2) ? x : Rat(1, 2);
    }
    if (fn.id == "ffd_half_w1") {
        if (x < Rat(1, 4) || x > Rat(1, 2)) detail::domain_fail(fn.id, x, "[1/4, 1/2]");
        return Rat(1, 3);
    }
    if (fn.id == "ffd_half_w2") {
        if (x < Rat(1, 6) || x > Rat(1, 2)) detail::domain_fail(fn.id, x, "[1/6, 1/2]");
        if (x >= Rat(1, 2) - fn.theta) return Rat(1, 3);
        if (x >= Rat(1, 4)) return Rat(1, 4);
        if (x >= Rat(1, 5)) return Rat(1, 5);
        return Rat(1, 6);
    }
    if (fn.id == "poc_max_w") {
        if (x <= Rat(0) || x > Rat(1)) detail::domain_fail(fn.id, x, "(0, 1]");
        return x <= Rat(1, 2) ? x : Rat(1, 2);
    }
    if (fn.id == "poc_param_w") {
        if (x < Rat(0) || x >= Rat(1, fn.t))
            detail::domain_fail(fn.id, x, "[0, " + rat_str(Rat(1, fn.t)) + ")");
        if (x < Rat(1, fn.t + 2)) return x;
        if (x < Rat(fn.t + 1) / Rat(fn.t * (fn.t + 2))) return Rat(1, fn.t + 2);
        return x * Rat(fn.t) / Rat(fn.t + 1);
    }
    if (fn.id == "min_poc_w") {
        Rat top = Rat(fn.k - 1) / Rat(fn.k);
        if (x <= Rat(0) || x > top)
            detail::domain_fail(fn.id, x, "(0, " + rat_str(top) + "]");
        if (x <= Rat(1, fn.k)) return x * Rat(2 * fn.k) / Rat(fn.k + 3);
        if (x <= Rat(2, fn.k + 3)) return Rat(2, fn.k + 3);
        if (x <= Rat(fn.k + 1) / Rat(fn.k + 3)) return x;
        return Rat(fn.k + 1) / Rat(fn.k + 3);
    }
    throw std::invalid_argument("weight: unrecognized function id '" + fn.id + "'");
}

struct WeightCheckReport {
    std::vector<Rat> bin_weights;
    std::vector<size_t> violating_bins;
    long long allowed_exceptions = 0;
    bool pass = true;
};

namespace detail {

inline std::vector<Rat> bin_weights_of(const Packing& packing, const WeightFn& fn) {
    std::vector<Rat> weights;
    weights.reserve(packing.bins.size());
    for (size_t i = 0; i < packing.bins.size(); ++i) {
        const Bin& bin = packing.bins[i];
        if (bin.empty() || !bin_valid(bin, packing.variant))
            throw std::invalid_argument("weight check: bin " + std::to_string(i) +
                                        " is empty or not a valid " +
                                        variant_str(packing.variant) + " bin");
        Rat w(0);
        for (const Rat& size : bin.sizes) w += weight(size, fn);
        weights.push_back(w);
    }
    return weights;
}

}  // namespace detail

// Every bin of a reference packing must stay below (or at, when strict is
// false) the cap. Violations are reported, not thrown.
inline WeightCheckReport check_opt_bin_weights(const Packing& packing, const WeightFn& fn,
                                               const Rat& cap, bool strict) {
    WeightCheckReport report;
    report.bin_weights = detail::bin_weights_of(packing, fn);
    for (size_t i = 0; i < report.bin_weights.size(); ++i) {
        bool bad = strict ? report.bin_weights[i] >= cap : report.bin_weights[i] > cap;
        if (bad) report.violating_bins.push_back(i);
    }
    report.pass = report.violating_bins.empty();
    return report;
}

// All but a bounded number of an algorithm's bins must reach the floor.
inline WeightCheckReport check_alg_bin_weights(const Packing& packing, const WeightFn& fn,
                                               const Rat& floor, long long allowed_exceptions) {
    WeightCheckReport report;
    report.allowed_exceptions = allowed_exceptions;
    report.bin_weights = detail::bin_weights_of(packing, fn);
    for (size_t i = 0; i < report.bin_weights.size(); ++i)
        if (report.bin_weights[i] < floor) report.violating_bins.push_back(i);
    report.pass = static_cast<long long>(report.violating_bins.size()) <= allowed_exceptions;
    return report;
}

inline Json weight_report_to_json(const WeightCheckReport& report) {
    Json j;
    j["pass"] = report.pass;
    j["exception_count"] = report.violating_bins.size();
    j["allowed_exceptions"] = report.allowed_exceptions;
    Json weights = Json::array();
    for (const Rat& w : report.bin_weights) weights.push_back(rat_str(w));
    j["bin_weights"] = std::move(weights);
    Json bad = Json::array();
    for (size_t i : report.violating_bins) bad.push_back(i);
    j["violating_bins"] = std::move(bad);
    return j;
}

}  // namespace oebp
