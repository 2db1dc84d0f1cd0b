#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oebp/core.hpp"
#include "oebp/io.hpp"

namespace oebp {

// A generated worst-case input together with the construction's explicit
// reference packing (an upper bound on the optimum) and the cost the target
// algorithm or evaluation is claimed to incur. Tests re-run the target and
// re-validate the certificate; nothing here is trusted.
struct AdversarialCase {
    std::string generator;
    std::map<std::string, std::string> params;
    Instance instance;
    Packing certificate;
    std::map<long long, Packing> cluster_certificates;
    long long claimed_alg_bins = 0;
    long long claimed_cert_bins = 0;
    Rat claimed_ratio{0};
    std::string target_algorithm;
};

namespace detail {

[[noreturn]] inline void pre_fail(const std::string& generator, const std::string& requirement) {
    throw std::invalid_argument(generator + ": requires " + requirement);
}

inline std::vector<long long> emit(Instance& instance, long long count, const Rat& size,
                                   std::optional<long long> cluster, long long& next_id) {
    std::vector<long long> ids;
    ids.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) {
        instance.items.push_back({next_id, size, cluster});
        ids.push_back(next_id++);
    }
    return ids;
}

// FIFO over the ids of one size class; certificate builders draw from it.
class SizedPool {
  public:
    SizedPool(std::vector<long long> ids, const Rat& size) : ids_(std::move(ids)), size_(size) {}

    void fill(Bin& bin, long long count) {
        if (count > remaining())
            throw std::logic_error("certificate builder drew more items than were generated");
        for (long long i = 0; i < count; ++i) bin.add(ids_[static_cast<size_t>(pos_++)], size_);
    }

    Bin take_bin(long long count) {
        Bin bin;
        fill(bin, count);
        return bin;
    }

    long long remaining() const { return static_cast<long long>(ids_.size()) - pos_; }

  private:
    std::vector<long long> ids_;
    Rat size_;
    long long pos_ = 0;
};

// Validates the instance, freezes cert-bin count, and derives the ratio.
inline void finalize_case(AdversarialCase& c) {
    c.instance.validate();
    c.claimed_cert_bins = c.certificate.bin_count();
    if (c.claimed_cert_bins <= 0)
        throw std::logic_error(c.generator + ": empty certificate");
    c.claimed_ratio = Rat(c.claimed_alg_bins) / Rat(c.claimed_cert_bins);
}

inline long long sum_cluster_cert_bins(const AdversarialCase& c) {
    long long sum = 0;
    for (const auto& [label, packing] : c.cluster_certificates) sum += packing.bin_count();
    return sum;
}

}  // namespace detail

// Stream that forces next-fit (and worst-fit under either rule) to open a
// bin per large item: each size-beta item is chased by M+1 items of
// (1-beta)/M, overfilling the active bin just before the next large arrives.
// The certificate pairs large items two per bin where possible and spreads
// the small items up to each bin's exact capacity.
inline AdversarialCase gen_nf_lower(const Rat& beta, long long N, long long M) {
    if (beta <= Rat(0) || beta >= Rat(1))
        detail::pre_fail("gen_nf_lower", "0 < beta < 1 (got beta=" + rat_str(beta) + ")");
    if (N < 1) detail::pre_fail("gen_nf_lower", "N >= 1 (got N=" + std::to_string(N) + ")");
    if (M <= 2 * N)
        detail::pre_fail("gen_nf_lower", "M > 2N (got M=" + std::to_string(M) +
                                             ", N=" + std::to_string(N) + ")");
    if (Rat(M) * beta <= Rat(1))
        detail::pre_fail("gen_nf_lower", "M > 1/beta (got M=" + std::to_string(M) +
                                             ", beta=" + rat_str(beta) + ")");
    long long pairs = to_ll(rat_floor(beta * Rat(N) / (Rat(1) + beta)));
    if (pairs < 1)
        detail::pre_fail("gen_nf_lower",
                         "floor(beta*N/(1+beta)) >= 1 (N=" + std::to_string(N) + " too small)");

    AdversarialCase c;
    c.generator = "nf_lower";
    c.params = {{"beta", rat_str(beta)}, {"N", std::to_string(N)}, {"M", std::to_string(M)}};
    c.target_algorithm = "nf";
    c.instance.variant = Variant::Max;
    c.instance.beta = beta;
    c.certificate.variant = Variant::Max;

    Rat eps = (Rat(1) - beta) / Rat(M);
    long long next_id = 0;
    std::vector<long long> large_ids, small_ids;
    for (long long i = 0; i < N; ++i) {
        large_ids.push_back(detail::emit(c.instance, 1, beta, {}, next_id).front());
        auto s = detail::emit(c.instance, M + 1, eps, {}, next_id);
        small_ids.insert(small_ids.end(), s.begin(), s.end());
    }

    detail::SizedPool larges(large_ids, beta), smalls(small_ids, eps);
    // A two-large bin keeps room for M-1 smalls; a one-large bin for
    // ceil(M/(1-beta))-1; the remainder fits a single extra bin.
    long long single_cap = to_ll(rat_ceil(Rat(M) / (Rat(1) - beta))) - 1;
    for (long long i = 0; i < pairs; ++i) {
        Bin bin = larges.take_bin(2);
        smalls.fill(bin, std::min<long long>(M - 1, smalls.remaining()));
        c.certificate.bins.push_back(std::move(bin));
    }
    for (long long i = 0; i < N - 2 * pairs; ++i) {
        Bin bin = larges.take_bin(1);
        smalls.fill(bin, std::min(single_cap, smalls.remaining()));
        c.certificate.bins.push_back(std::move(bin));
    }
    if (smalls.remaining() > 0) c.certificate.bins.push_back(smalls.take_bin(smalls.remaining()));

    c.claimed_alg_bins = N;
    detail::finalize_case(c);
    return c;
}

// Small items arrive first and fill bins completely, so when the 1/(t+1)
// items arrive no any-fit algorithm can reuse those bins. The certificate
// instead dedicates a bin per large item padded with M-1 smalls.
inline AdversarialCase gen_af_lower(long long t, long long N, long long M) {
    if (t < 0) detail::pre_fail("gen_af_lower", "t >= 0 (got t=" + std::to_string(t) + ")");
    if (N < 1) detail::pre_fail("gen_af_lower", "N >= 1 (got N=" + std::to_string(N) + ")");
    if (M < 2) detail::pre_fail("gen_af_lower", "M >= 2 (got M=" + std::to_string(M) + ")");
    if (M < t + 1)
        detail::pre_fail("gen_af_lower", "M >= t+1 so the 1/M items are the small ones (got M=" +
                                             std::to_string(M) + ", t=" + std::to_string(t) + ")");

    AdversarialCase c;
    c.generator = "af_lower";
    c.params = {{"t", std::to_string(t)}, {"N", std::to_string(N)}, {"M", std::to_string(M)}};
    c.target_algorithm = "ff";
    c.instance.variant = Variant::Max;
    c.instance.beta = Rat(1, t + 1);
    c.certificate.variant = Variant::Max;

    Rat small(1, M), large(1, t + 1);
    long long next_id = 0;
    auto small_ids = detail::emit(c.instance, (t + 1) * N * M * (M - 1), small, {}, next_id);
    auto large_ids = detail::emit(c.instance, (t + 1) * N * M, large, {}, next_id);

    detail::SizedPool smalls(small_ids, small), larges(large_ids, large);
    for (long long i = 0; i < (t + 1) * N * M; ++i) {
        Bin bin = larges.take_bin(1);
        smalls.fill(bin, M - 1);
        c.certificate.bins.push_back(std::move(bin));
    }

    c.claimed_alg_bins = (t + 2) * N * M - (t + 1) * N;
    detail::finalize_case(c);
    return c;
}

// First-fit adversary: 1/N filler items pre-load k bins per eventual
// certificate bin, then 2N batches of beta and gamma items sized so each
// batch seals itself into one fresh bin. gamma is chosen so that a batch
// bin plus one more item of either size crosses the validity line exactly.
inline AdversarialCase gen_ff_lower(const Rat& beta, long long N) {
    if (beta <= Rat(0) || beta >= Rat(1))
        detail::pre_fail("gen_ff_lower", "0 < beta < 1 (got beta=" + rat_str(beta) + ")");
    long long t = t_of_beta(beta);
    if (N <= t * t)
        detail::pre_fail("gen_ff_lower", "N > t^2 (got N=" + std::to_string(N) +
                                             ", t=" + std::to_string(t) + ")");

    AdversarialCase c;
    c.generator = "ff_lower";
    c.params = {{"beta", rat_str(beta)}, {"N", std::to_string(N)}};
    c.target_algorithm = "ff";
    c.instance.variant = Variant::Max;
    c.instance.beta = beta;
    c.certificate.variant = Variant::Max;

    Rat delta(1, N);
    bool odd = (t % 2) != 0;
    Rat gamma = odd ? (Rat(2) - Rat(t - 1) * beta) / Rat(t + 3)
                    : (Rat(2) - Rat(t) * beta) / Rat(t + 2);
    long long k = to_ll(rat_ceil(Rat(N) * (Rat(1) - gamma))) - 1;

    long long next_id = 0;
    long long delta_count = odd ? k * N * (t + 1) : k * N * t + 2 * N * (N - 1);
    auto delta_ids = detail::emit(c.instance, delta_count, delta, {}, next_id);
    std::vector<long long> beta_ids, gamma_ids;
    long long betas_per_batch = odd ? (t + 1) / 2 : (t + 2) / 2;
    long long gammas_per_batch = odd ? (t + 1) / 2 : t / 2;
    for (long long b = 0; b < 2 * N; ++b) {
        auto bi = detail::emit(c.instance, betas_per_batch, beta, {}, next_id);
        beta_ids.insert(beta_ids.end(), bi.begin(), bi.end());
        auto gi = detail::emit(c.instance, gammas_per_batch, gamma, {}, next_id);
        gamma_ids.insert(gamma_ids.end(), gi.begin(), gi.end());
    }

    detail::SizedPool deltas(delta_ids, delta), betas(beta_ids, beta), gammas(gamma_ids, gamma);
    long long mixed_bins = odd ? N * (t + 1) : N * t;
    for (long long i = 0; i < mixed_bins; ++i) {
        Bin bin = deltas.take_bin(k);
        gammas.fill(bin, 1);
        betas.fill(bin, 1);
        c.certificate.bins.push_back(std::move(bin));
    }
    if (!odd) {
        for (long long i = 0; i < 2 * N; ++i) {
            Bin bin = deltas.take_bin(N - 1);
            betas.fill(bin, 1);
            c.certificate.bins.push_back(std::move(bin));
        }
    }

    c.claimed_alg_bins = odd ? k * (t + 1) + 2 * N : k * t + 4 * N - 2;
    detail::finalize_case(c);
    return c;
}

// Decreasing-order adversary for the one-active-bin rule: 1/(t+1) items
// close bins in groups of t+1, then the tiny items can only fill fresh
// bins. The certificate mixes one large with a full load of tiny items.
inline AdversarialCase gen_nfd_lower(long long t, long long N) {
    if (t < 0) detail::pre_fail("gen_nfd_lower", "t >= 0 (got t=" + std::to_string(t) + ")");
    if (N < 2) detail::pre_fail("gen_nfd_lower", "N >= 2 (got N=" + std::to_string(N) + ")");

    AdversarialCase c;
    c.generator = "nfd_lower";
    c.params = {{"t", std::to_string(t)}, {"N", std::to_string(N)}};
    c.target_algorithm = "nfd";
    c.instance.variant = Variant::Max;
    c.instance.beta = Rat(1, t + 1);
    c.certificate.variant = Variant::Max;

    long long L = N * (t + 1);
    Rat large(1, t + 1), small(1, L);
    long long next_id = 0;
    auto large_ids = detail::emit(c.instance, L, large, {}, next_id);
    auto small_ids = detail::emit(c.instance, L * (L - 1), small, {}, next_id);

    detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
    for (long long i = 0; i < L; ++i) {
        Bin bin = larges.take_bin(1);
        smalls.fill(bin, L - 1);
        c.certificate.bins.push_back(std::move(bin));
    }

    c.claimed_alg_bins = N + (t + 1) * N - 1;
    detail::finalize_case(c);
    return c;
}

// Decreasing first-fit adversary near beta = 1: the 1-1/N items pair up,
// leaving exactly no room for any 1/N item, which then need their own bins.
// The certificate splits the pairs and fills each with N-1 small items.
inline AdversarialCase gen_ffd_lower(long long N) {
    if (N <= 10) detail::pre_fail("gen_ffd_lower", "N > 10 (got N=" + std::to_string(N) + ")");

    AdversarialCase c;
    c.generator = "ffd_lower";
    c.params = {{"N", std::to_string(N)}};
    c.target_algorithm = "ffd";
    c.instance.variant = Variant::Max;
    c.instance.beta = Rat(N - 1, N);
    c.certificate.variant = Variant::Max;

    Rat large(N - 1, N), small(1, N);
    long long next_id = 0;
    auto large_ids = detail::emit(c.instance, 2 * N, large, {}, next_id);
    auto small_ids = detail::emit(c.instance, 2 * N * (N - 1), small, {}, next_id);

    detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
    for (long long i = 0; i < 2 * N; ++i) {
        Bin bin = larges.take_bin(1);
        smalls.fill(bin, N - 1);
        c.certificate.bins.push_back(std::move(bin));
    }

    c.claimed_alg_bins = 3 * N - 2;
    detail::finalize_case(c);
    return c;
}

// Parametric decreasing first-fit adversary: t+1 items of 1/t - 1/(tN) seal
// a bin at combined excluded total just under 1, so the 1/N items cannot
// enter; the certificate uses one large plus N-1 smalls per bin.
inline AdversarialCase gen_ffd_param_lower(long long t, long long N) {
    if (t < 1) detail::pre_fail("gen_ffd_param_lower", "t >= 1 (got t=" + std::to_string(t) + ")");
    if (N < 2) detail::pre_fail("gen_ffd_param_lower", "N >= 2 (got N=" + std::to_string(N) + ")");
    if (N < t + 1)
        detail::pre_fail("gen_ffd_param_lower",
                         "N >= t+1 so bins hold exactly t+1 large items (got N=" +
                             std::to_string(N) + ", t=" + std::to_string(t) + ")");

    AdversarialCase c;
    c.generator = "ffd_param_lower";
    c.params = {{"t", std::to_string(t)}, {"N", std::to_string(N)}};
    c.target_algorithm = "ffd";
    c.instance.variant = Variant::Max;
    c.instance.beta = Rat(N - 1, t * N);
    c.certificate.variant = Variant::Max;

    Rat large(N - 1, t * N), small(1, N);
    long long next_id = 0;
    auto large_ids = detail::emit(c.instance, (t + 1) * N, large, {}, next_id);
    auto small_ids = detail::emit(c.instance, (t + 1) * N * (N - 1), small, {}, next_id);

    detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
    for (long long i = 0; i < (t + 1) * N; ++i) {
        Bin bin = larges.take_bin(1);
        smalls.fill(bin, N - 1);
        c.certificate.bins.push_back(std::move(bin));
    }

    c.claimed_alg_bins = N + (N - 1) * (t + 1);
    detail::finalize_case(c);
    return c;
}

// Two-batch case where solving each batch alone wastes the room that the
// global packing exploits by mixing one 1/(t+1) item with N-1 of the 1/N
// items per bin. Batch labels double as cluster labels.
inline AdversarialCase gen_batched_lower(long long t, long long N) {
    if (t < 0) detail::pre_fail("gen_batched_lower", "t >= 0 (got t=" + std::to_string(t) + ")");
    if (N < 2) detail::pre_fail("gen_batched_lower", "N >= 2 (got N=" + std::to_string(N) + ")");

    AdversarialCase c;
    c.generator = "batched_lower";
    c.params = {{"t", std::to_string(t)}, {"N", std::to_string(N)}};
    c.target_algorithm = "batched";
    c.instance.variant = Variant::Max;
    c.instance.beta = std::max(Rat(1, t + 1), Rat(1, N));
    c.certificate.variant = Variant::Max;

    Rat large(1, t + 1), small(1, N);
    long long next_id = 0;
    auto large_ids = detail::emit(c.instance, N * N * (t + 1), large, 1, next_id);
    auto small_ids = detail::emit(c.instance, N * N * (N - 1) * (t + 1), small, 2, next_id);

    {
        detail::SizedPool larges(large_ids, large);
        Packing batch_a;
        batch_a.variant = Variant::Max;
        for (long long i = 0; i < N * N; ++i) batch_a.bins.push_back(larges.take_bin(t + 1));
        c.cluster_certificates[1] = std::move(batch_a);

        detail::SizedPool smalls(small_ids, small);
        Packing batch_b;
        batch_b.variant = Variant::Max;
        for (long long i = 0; i < N * (N - 1) * (t + 1); ++i)
            batch_b.bins.push_back(smalls.take_bin(N));
        c.cluster_certificates[2] = std::move(batch_b);
    }

    detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
    for (long long i = 0; i < N * N * (t + 1); ++i) {
        Bin bin = larges.take_bin(1);
        smalls.fill(bin, N - 1);
        c.certificate.bins.push_back(std::move(bin));
    }

    c.claimed_alg_bins = detail::sum_cluster_cert_bins(c);
    detail::finalize_case(c);
    return c;
}

// Clustered case with one cluster of size-1 items (forced singletons) and
// many clusters of N+1 items of 1/N (forced two bins each); globally every
// size-1 item absorbs N-1 small items in its bin.
inline AdversarialCase gen_poc_lower(long long N) {
    if (N <= 2) detail::pre_fail("gen_poc_lower", "N > 2 (got N=" + std::to_string(N) + ")");

    AdversarialCase c;
    c.generator = "poc_lower";
    c.params = {{"N", std::to_string(N)}};
    c.target_algorithm = "clustered";
    c.instance.variant = Variant::Max;
    c.instance.beta = Rat(1);
    c.certificate.variant = Variant::Max;

    Rat one(1), small(1, N);
    long long next_id = 0;
    auto one_ids = detail::emit(c.instance, N * (N + 1), one, 0, next_id);
    std::vector<std::vector<long long>> cluster_small_ids;
    for (long long j = 1; j <= N * (N - 1); ++j)
        cluster_small_ids.push_back(detail::emit(c.instance, N + 1, small, j, next_id));

    {
        Packing ones;
        ones.variant = Variant::Max;
        detail::SizedPool pool(one_ids, one);
        for (long long i = 0; i < N * (N + 1); ++i) ones.bins.push_back(pool.take_bin(1));
        c.cluster_certificates[0] = std::move(ones);
        for (long long j = 1; j <= N * (N - 1); ++j) {
            Packing p;
            p.variant = Variant::Max;
            detail::SizedPool sp(cluster_small_ids[static_cast<size_t>(j - 1)], small);
            p.bins.push_back(sp.take_bin(N));
            p.bins.push_back(sp.take_bin(1));
            c.cluster_certificates[j] = std::move(p);
        }
    }

    std::vector<long long> all_small_ids;
    for (const auto& v : cluster_small_ids)
        all_small_ids.insert(all_small_ids.end(), v.begin(), v.end());
    detail::SizedPool ones(one_ids, one), smalls(all_small_ids, small);
    for (long long i = 0; i < N * (N + 1); ++i) {
        Bin bin = ones.take_bin(1);
        smalls.fill(bin, N - 1);
        c.certificate.bins.push_back(std::move(bin));
    }

    c.claimed_alg_bins = detail::sum_cluster_cert_bins(c);
    detail::finalize_case(c);
    return c;
}

// Parametric clustered cases for beta < 1. Construction 1 separates
// 1/(t+1) items and 1/M items into single-size clusters; construction 2
// pairs beta items with just enough smalls that each mixed cluster still
// needs two bins, with leftover smalls in clusters of M+1 (the division
// residue joins the last such cluster, whose optimum is then computed).
inline AdversarialCase gen_poc_param_lower(const Rat& beta, long long M, int which) {
    if (beta <= Rat(0) || beta >= Rat(1))
        detail::pre_fail("gen_poc_param_lower", "0 < beta < 1 (got beta=" + rat_str(beta) + ")");
    if (which != 1 && which != 2)
        detail::pre_fail("gen_poc_param_lower", "which in {1,2} (got " + std::to_string(which) + ")");
    long long t = t_of_beta(beta);
    if (which == 1 && M < 2)
        detail::pre_fail("gen_poc_param_lower", "M >= 2 for construction 1 (got M=" +
                                                    std::to_string(M) + ")");
    if (which == 2 && M <= 3)
        detail::pre_fail("gen_poc_param_lower", "M > 3 for construction 2 (got M=" +
                                                    std::to_string(M) + ")");
    if (M < t + 1)
        detail::pre_fail("gen_poc_param_lower", "M >= t+1 so 1/M items respect the cap (got M=" +
                                                    std::to_string(M) + ", t=" + std::to_string(t) +
                                                    ")");

    AdversarialCase c;
    c.generator = "poc_param_lower";
    c.params = {{"beta", rat_str(beta)},
                {"M", std::to_string(M)},
                {"which", std::to_string(which)}};
    c.target_algorithm = "clustered";
    c.instance.variant = Variant::Max;
    c.certificate.variant = Variant::Max;

    Rat small(1, M);
    long long next_id = 0;

    if (which == 1) {
        Rat large(1, t + 1);
        c.instance.beta = large;
        std::vector<long long> large_ids, small_ids;
        long long label = 0;
        for (long long j = 0; j < M + 1; ++j) {
            auto ids = detail::emit(c.instance, t + 2, large, label, next_id);
            large_ids.insert(large_ids.end(), ids.begin(), ids.end());
            detail::SizedPool pool(ids, large);
            Packing p;
            p.variant = Variant::Max;
            p.bins.push_back(pool.take_bin(t + 1));
            p.bins.push_back(pool.take_bin(1));
            c.cluster_certificates[label++] = std::move(p);
        }
        for (long long j = 0; j < (t + 2) * (M - 1); ++j) {
            auto ids = detail::emit(c.instance, M + 1, small, label, next_id);
            small_ids.insert(small_ids.end(), ids.begin(), ids.end());
            detail::SizedPool pool(ids, small);
            Packing p;
            p.variant = Variant::Max;
            p.bins.push_back(pool.take_bin(M));
            p.bins.push_back(pool.take_bin(1));
            c.cluster_certificates[label++] = std::move(p);
        }
        detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
        for (long long i = 0; i < (t + 2) * (M + 1); ++i) {
            Bin bin = larges.take_bin(1);
            smalls.fill(bin, M - 1);
            c.certificate.bins.push_back(std::move(bin));
        }
    } else {
        c.instance.beta = beta;
        long long need = to_ll(rat_ceil(Rat(M) * (Rat(1) - Rat(t) * beta)));
        long long total_smalls = (t + 1) * (M * M - M);
        long long rest = total_smalls - M * need;
        if (rest < 0)
            detail::pre_fail("gen_poc_param_lower",
                             "enough small items for the mixed clusters (construction 2)");
        long long full_clusters = rest / (M + 1);
        long long residue = rest % (M + 1);
        if (full_clusters == 0 && residue > 0)
            throw std::logic_error("gen_poc_param_lower: no small cluster to absorb the residue");

        std::vector<long long> large_ids, small_ids;
        long long label = 0;
        for (long long j = 0; j < M; ++j) {
            auto lids = detail::emit(c.instance, t + 1, beta, label, next_id);
            large_ids.insert(large_ids.end(), lids.begin(), lids.end());
            auto sids = detail::emit(c.instance, need, small, label, next_id);
            small_ids.insert(small_ids.end(), sids.begin(), sids.end());
            Packing p;
            p.variant = Variant::Max;
            detail::SizedPool lp(lids, beta), sp(sids, small);
            p.bins.push_back(lp.take_bin(t + 1));
            p.bins.push_back(sp.take_bin(need));
            c.cluster_certificates[label++] = std::move(p);
        }
        for (long long j = 0; j < full_clusters; ++j) {
            long long count = M + 1 + (j == full_clusters - 1 ? residue : 0);
            auto ids = detail::emit(c.instance, count, small, label, next_id);
            small_ids.insert(small_ids.end(), ids.begin(), ids.end());
            Packing p;
            p.variant = Variant::Max;
            detail::SizedPool pool(ids, small);
            long long left = count;
            while (left > 0) {
                long long take = std::min(left, M);
                p.bins.push_back(pool.take_bin(take));
                left -= take;
            }
            c.cluster_certificates[label++] = std::move(p);
        }
        detail::SizedPool larges(large_ids, beta), smalls(small_ids, small);
        for (long long i = 0; i < (t + 1) * M; ++i) {
            Bin bin = larges.take_bin(1);
            smalls.fill(bin, M - 1);
            c.certificate.bins.push_back(std::move(bin));
        }
    }

    c.claimed_alg_bins = detail::sum_cluster_cert_bins(c);
    detail::finalize_case(c);
    return c;
}

// Min-variant clustering case: clusters of one 1-1/N^2 item surrounded by
// four 1/N^2 items need two bins each, while globally the large items pair
// up and all 8N smalls share a single bin (valid only from N = 8 up).
inline AdversarialCase gen_min_poc_lower(long long N) {
    if (N < 8)
        detail::pre_fail("gen_min_poc_lower",
                         "N >= 8 so the all-smalls certificate bin is valid (got N=" +
                             std::to_string(N) + ")");

    AdversarialCase c;
    c.generator = "min_poc_lower";
    c.params = {{"N", std::to_string(N)}};
    c.target_algorithm = "clustered";
    c.instance.variant = Variant::Min;
    c.instance.beta = Rat(1);
    c.certificate.variant = Variant::Min;

    Rat large = Rat(1) - Rat(1, N * N);
    Rat small(1, N * N);
    long long next_id = 0;
    std::vector<long long> large_ids, small_ids;
    for (long long j = 0; j < 2 * N; ++j) {
        auto s1 = detail::emit(c.instance, 2, small, j, next_id);
        auto l = detail::emit(c.instance, 1, large, j, next_id);
        auto s2 = detail::emit(c.instance, 2, small, j, next_id);
        large_ids.push_back(l.front());
        std::vector<long long> cluster_smalls = s1;
        cluster_smalls.insert(cluster_smalls.end(), s2.begin(), s2.end());
        small_ids.insert(small_ids.end(), cluster_smalls.begin(), cluster_smalls.end());

        Packing p;
        p.variant = Variant::Min;
        detail::SizedPool lp(l, large), sp(cluster_smalls, small);
        p.bins.push_back(lp.take_bin(1));
        p.bins.push_back(sp.take_bin(4));
        c.cluster_certificates[j] = std::move(p);
    }

    detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
    for (long long i = 0; i < N; ++i) c.certificate.bins.push_back(larges.take_bin(2));
    c.certificate.bins.push_back(smalls.take_bin(8 * N));

    c.claimed_alg_bins = detail::sum_cluster_cert_bins(c);
    detail::finalize_case(c);
    return c;
}

enum class MinPocKind { Reciprocal, Complement };

inline std::string min_poc_kind_str(MinPocKind kind) {
    return kind == MinPocKind::Reciprocal ? "reciprocal" : "complement";
}

// Min-variant parametric clustering cases. Reciprocal: t+1 items just under
// 1/(t+1) plus two 1/N items per cluster; globally t+2 larges share a bin.
// Complement: one 1-1/k item, one just under 1/k, two 1/N per cluster;
// globally the larges pair up, the near-1/k items pack k+1 per bin, and
// the 1/N items pack N per bin.
inline AdversarialCase gen_min_poc_param_lower(MinPocKind kind, long long param, long long N) {
    const char* name = "gen_min_poc_param_lower";
    if (N < 2) detail::pre_fail(name, "N >= 2 (got N=" + std::to_string(N) + ")");

    AdversarialCase c;
    c.generator = "min_poc_param_lower";
    c.target_algorithm = "clustered";
    c.instance.variant = Variant::Min;
    c.certificate.variant = Variant::Min;
    long long next_id = 0;

    if (kind == MinPocKind::Reciprocal) {
        long long t = param;
        if (t < 1) detail::pre_fail(name, "t >= 1 for the reciprocal kind (got t=" +
                                              std::to_string(t) + ")");
        if (N < t + 1)
            detail::pre_fail(name, "N >= t+1 so 1/N items respect the cap 1/(t+1) (got N=" +
                                       std::to_string(N) + ", t=" + std::to_string(t) + ")");
        c.params = {{"kind", "reciprocal"}, {"t", std::to_string(t)}, {"N", std::to_string(N)}};
        c.instance.beta = Rat(1, t + 1);

        Rat large = Rat(1, t + 1) - Rat(1, (t + 2) * N);
        Rat small(1, N);
        std::vector<long long> large_ids, small_ids;
        for (long long j = 0; j < (t + 2) * N; ++j) {
            auto lids = detail::emit(c.instance, t + 1, large, j, next_id);
            auto sids = detail::emit(c.instance, 2, small, j, next_id);
            large_ids.insert(large_ids.end(), lids.begin(), lids.end());
            small_ids.insert(small_ids.end(), sids.begin(), sids.end());
            Packing p;
            p.variant = Variant::Min;
            detail::SizedPool lp(lids, large), sp(sids, small);
            p.bins.push_back(lp.take_bin(t + 1));
            p.bins.push_back(sp.take_bin(2));
            c.cluster_certificates[j] = std::move(p);
        }
        detail::SizedPool larges(large_ids, large), smalls(small_ids, small);
        for (long long i = 0; i < (t + 1) * N; ++i)
            c.certificate.bins.push_back(larges.take_bin(t + 2));
        for (long long i = 0; i < 2 * (t + 2); ++i)
            c.certificate.bins.push_back(smalls.take_bin(N));
    } else {
        long long k = param;
        if (k < 5) detail::pre_fail(name, "k >= 5 for the complement kind (got k=" +
                                              std::to_string(k) + ")");
        if (2 * N <= k)
            detail::pre_fail(name, "2N > k so the 1/k - 1/(2N) items are positive (got N=" +
                                       std::to_string(N) + ", k=" + std::to_string(k) + ")");
        c.params = {{"kind", "complement"}, {"k", std::to_string(k)}, {"N", std::to_string(N)}};
        c.instance.beta = Rat(k - 1, k);

        Rat large(k - 1, k);
        Rat medium = Rat(1, k) - Rat(1, 2 * N);
        Rat small(1, N);
        std::vector<long long> large_ids, medium_ids, small_ids;
        for (long long j = 0; j < 2 * (k + 1) * N; ++j) {
            auto lids = detail::emit(c.instance, 1, large, j, next_id);
            auto mids = detail::emit(c.instance, 1, medium, j, next_id);
            auto sids = detail::emit(c.instance, 2, small, j, next_id);
            large_ids.push_back(lids.front());
            medium_ids.push_back(mids.front());
            small_ids.insert(small_ids.end(), sids.begin(), sids.end());
            Packing p;
            p.variant = Variant::Min;
            Bin top;
            top.add(lids.front(), large);
            top.add(mids.front(), medium);
            p.bins.push_back(std::move(top));
            detail::SizedPool sp(sids, small);
            p.bins.push_back(sp.take_bin(2));
            c.cluster_certificates[j] = std::move(p);
        }
        detail::SizedPool larges(large_ids, large), mediums(medium_ids, medium),
            smalls(small_ids, small);
        for (long long i = 0; i < (k + 1) * N; ++i) c.certificate.bins.push_back(larges.take_bin(2));
        for (long long i = 0; i < 2 * N; ++i) c.certificate.bins.push_back(mediums.take_bin(k + 1));
        for (long long i = 0; i < 4 * (k + 1); ++i) c.certificate.bins.push_back(smalls.take_bin(N));
    }

    c.claimed_alg_bins = detail::sum_cluster_cert_bins(c);
    detail::finalize_case(c);
    return c;
}

inline Json case_to_sidecar_json(const AdversarialCase& c) {
    Json j;
    j["generator"] = c.generator;
    Json params = Json::object();
    for (const auto& [key, value] : c.params) params[key] = value;
    j["params"] = std::move(params);
    j["target_algorithm"] = c.target_algorithm;
    j["claims"] = Json{{"alg_bins", c.claimed_alg_bins},
                       {"cert_bins", c.claimed_cert_bins},
                       {"ratio", rat_str(c.claimed_ratio)}};
    j["certificate"] = packing_to_json(c.certificate);
    if (!c.cluster_certificates.empty()) {
        Json cc = Json::object();
        for (const auto& [label, packing] : c.cluster_certificates)
            cc[std::to_string(label)] = packing_to_json(packing);
        j["cluster_certificates"] = std::move(cc);
    }
    return j;
}

// Rebuilds a case from its sidecar against the already-loaded instance.
inline AdversarialCase case_from_sidecar_json(const Json& j, const Instance& instance) {
    try {
        AdversarialCase c;
        c.instance = instance;
        c.generator = j.at("generator").get<std::string>();
        if (j.contains("params"))
            for (const auto& [key, value] : j.at("params").items())
                c.params[key] = value.get<std::string>();
        c.target_algorithm = j.at("target_algorithm").get<std::string>();
        c.claimed_alg_bins = j.at("claims").at("alg_bins").get<long long>();
        c.claimed_cert_bins = j.at("claims").at("cert_bins").get<long long>();
        c.claimed_ratio = parse_rat(j.at("claims").at("ratio").get<std::string>());
        c.certificate = packing_from_json(j.at("certificate"), instance);
        if (j.contains("cluster_certificates"))
            for (const auto& [key, value] : j.at("cluster_certificates").items())
                c.cluster_certificates[std::stoll(key)] = packing_from_json(value, instance);
        return c;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("sidecar JSON: ") + e.what());
    }
}

inline std::string sidecar_str(const AdversarialCase& c) {
    return case_to_sidecar_json(c).dump(2) + "\n";
}

}  // namespace oebp
