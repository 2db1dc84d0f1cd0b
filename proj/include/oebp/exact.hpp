#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oebp/core.hpp"
#include "oebp/greedy.hpp"

namespace oebp {

// Thrown when a solver refuses an instance instead of degrading silently.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveBudget {
    long long max_items = 16;
    std::optional<unsigned long long> node_limit;
};

struct ExactResult {
    Packing packing;
    // False when the node limit stopped the search; packing is then the best
    // incumbent found, not necessarily optimal.
    bool proven_optimal = true;
    unsigned long long nodes = 0;
};

namespace detail {

// Undoes the most recent Bin::add. Callers snapshot max/min beforehand.
inline void unplace(Bin& bin, const Rat& prev_max, const Rat& prev_min) {
    bin.total -= bin.sizes.back();
    bin.ids.pop_back();
    bin.sizes.pop_back();
    bin.max_size = prev_max;
    bin.min_size = prev_min;
}

class BranchAndBound {
  public:
    BranchAndBound(const Instance& instance, const SolveBudget& budget)
        : variant_(instance.variant), budget_(budget) {
        items_ = sorted_items(instance);
        suffix_sum_.assign(items_.size() + 1, Rat(0));
        for (size_t i = items_.size(); i-- > 0;)
            suffix_sum_[i] = suffix_sum_[i + 1] + items_[i].size;
        best_count_ = static_cast<long long>(items_.size()) + 1;
    }

    ExactResult run() {
        dfs(0);
        if (best_count_ > static_cast<long long>(items_.size()))
            throw BudgetExceeded("optimal_packing: node limit of " +
                                 std::to_string(*budget_.node_limit) +
                                 " reached before any complete packing was found");
        ExactResult result;
        result.packing.variant = variant_;
        result.packing.bins = best_bins_;
        result.proven_optimal = !truncated_;
        result.nodes = nodes_;
        return result;
    }

  private:
    // Additional total size bin can still accept while staying valid: any
    // final state satisfies total < 1 + excluded item, and the excluded item
    // is at most max(current max, largest remaining) for max-OEBP and at most
    // the current min for min-OEBP.
    Rat slack(const Bin& bin, const Rat& largest_remaining) const {
        if (variant_ == Variant::Max)
            return Rat(1) + std::max(bin.max_size, largest_remaining) - bin.total;
        return Rat(1) + bin.min_size - bin.total;
    }

    bool prunable(size_t depth) const {
        long long used = static_cast<long long>(bins_.size());
        if (used >= best_count_) return true;
        if (depth == items_.size()) return false;
        Rat remaining = suffix_sum_[depth];
        const Rat& largest = items_[depth].size;
        for (const Bin& bin : bins_) remaining -= slack(bin, largest);
        if (remaining <= Rat(0)) return false;
        // Every new bin's total stays strictly below 1 + its largest item,
        // which is at most 1 + largest remaining size.
        Int extra = rat_ceil(remaining / (Rat(1) + largest));
        return used + to_ll(extra) >= best_count_;
    }

    void dfs(size_t depth) {
        ++nodes_;
        if (budget_.node_limit && nodes_ > *budget_.node_limit) {
            truncated_ = true;
            return;
        }
        if (prunable(depth)) return;
        if (depth == items_.size()) {
            best_count_ = static_cast<long long>(bins_.size());
            best_bins_ = bins_;
            return;
        }
        const Item& item = items_[depth];
        for (size_t j = 0; j < bins_.size(); ++j) {
            if (is_duplicate_bin(j)) continue;
            if (!fits(bins_[j], item.size, variant_)) continue;
            Rat prev_max = bins_[j].max_size, prev_min = bins_[j].min_size;
            bins_[j].add(item.id, item.size);
            dfs(depth + 1);
            unplace(bins_[j], prev_max, prev_min);
            if (truncated_) return;
        }
        bins_.emplace_back();
        bins_.back().add(item.id, item.size);
        dfs(depth + 1);
        bins_.pop_back();
    }

    // Bins with identical size multisets admit identical continuations, so
    // only the first of each content class is branched on. Sizes arrive in
    // globally non-increasing order, so vector equality is multiset equality.
    bool is_duplicate_bin(size_t j) const {
        for (size_t i = 0; i < j; ++i)
            if (bins_[i].sizes == bins_[j].sizes) return true;
        return false;
    }

    Variant variant_;
    SolveBudget budget_;
    std::vector<Item> items_;
    std::vector<Rat> suffix_sum_;
    std::vector<Bin> bins_;
    std::vector<Bin> best_bins_;
    long long best_count_ = 0;
    unsigned long long nodes_ = 0;
    bool truncated_ = false;
};

}  // namespace detail

// Branch and bound over partitions: items in non-increasing size order, each
// placed into an existing bin or one next fresh bin. Returns the
// lexicographically first optimum under that branching order.
inline ExactResult optimal_packing(const Instance& instance, const SolveBudget& budget = {}) {
    if (static_cast<long long>(instance.items.size()) > budget.max_items)
        throw BudgetExceeded("optimal_packing: instance has " +
                             std::to_string(instance.items.size()) + " items, budget allows " +
                             std::to_string(budget.max_items));
    return detail::BranchAndBound(instance, budget).run();
}

namespace detail {

class PartitionEnumerator {
  public:
    explicit PartitionEnumerator(const Instance& instance) : variant_(instance.variant) {
        items_ = instance.items;
        best_count_ = static_cast<long long>(items_.size()) + 1;
    }

    Packing run() {
        dfs(0);
        Packing packing;
        packing.variant = variant_;
        packing.bins = best_bins_;
        return packing;
    }

  private:
    void dfs(size_t depth) {
        if (static_cast<long long>(bins_.size()) >= best_count_) return;
        if (depth == items_.size()) {
            best_count_ = static_cast<long long>(bins_.size());
            best_bins_ = bins_;
            return;
        }
        const Item& item = items_[depth];
        // Restricted-growth enumeration: each partition is generated once,
        // blocks in order of first appearance. An invalid block stays invalid
        // under further additions, so it is cut immediately. Indexed access
        // because deeper recursion may reallocate bins_.
        for (size_t b = 0; b < bins_.size(); ++b) {
            Rat prev_max = bins_[b].max_size, prev_min = bins_[b].min_size;
            bins_[b].add(item.id, item.size);
            if (bin_valid(bins_[b], variant_)) dfs(depth + 1);
            unplace(bins_[b], prev_max, prev_min);
        }
        bins_.emplace_back();
        bins_.back().add(item.id, item.size);
        dfs(depth + 1);
        bins_.pop_back();
    }

    Variant variant_;
    std::vector<Item> items_;
    std::vector<Bin> bins_;
    std::vector<Bin> best_bins_;
    long long best_count_ = 0;
};

}  // namespace detail

// Exhaustive set-partition search in input order, independent of
// optimal_packing's branching scheme. Oracle for cross-checking; capped at 10
// items because Bell numbers grow fast.
inline Packing naive_optimal(const Instance& instance) {
    if (instance.items.size() > 10)
        throw BudgetExceeded("naive_optimal: instance has " +
                             std::to_string(instance.items.size()) +
                             " items, enumeration is capped at 10");
    return detail::PartitionEnumerator(instance).run();
}

}  // namespace oebp
