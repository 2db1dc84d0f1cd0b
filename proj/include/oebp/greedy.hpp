#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "oebp/core.hpp"

namespace oebp {

// Key minimized by worst_fit among feasible bins. MinTotalExclMax is defined
// for max-OEBP only.
enum class WfRule { MinTotal, MinTotalExclMax };

struct TraceStep {
    long long item_id = 0;
    size_t bin_index = 0;
    bool opened_new = false;
};

// Replaying the steps in order reproduces the packing exactly.
using PackTrace = std::vector<TraceStep>;

struct PackResult {
    Packing packing;
    PackTrace trace;
};

// Selects one index out of `feasible` (indices into `bins`, ascending).
// Must be a deterministic total function of its arguments.
using Chooser =
    std::function<size_t(const std::vector<size_t>& feasible, const std::vector<Bin>& bins,
                         const Item& item)>;

namespace detail {

inline void place(PackResult& result, const Item& item, size_t bin_index, bool opened) {
    if (opened) result.packing.bins.emplace_back();
    result.packing.bins[bin_index].add(item.id, item.size);
    result.trace.push_back({item.id, bin_index, opened});
}

// Items sorted by non-increasing size, ties by ascending id.
inline std::vector<Item> sorted_items(const Instance& instance) {
    std::vector<Item> items = instance.items;
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.size != b.size) return a.size > b.size;
        return a.id < b.id;
    });
    return items;
}

}  // namespace detail

// Any-fit driver: a new bin is opened only when no existing bin passes fits().
inline PackResult any_fit(const Instance& instance, const Chooser& chooser) {
    PackResult result;
    result.packing.variant = instance.variant;
    std::vector<size_t> feasible;
    for (const Item& item : instance.items) {
        feasible.clear();
        for (size_t i = 0; i < result.packing.bins.size(); ++i)
            if (fits(result.packing.bins[i], item.size, instance.variant)) feasible.push_back(i);
        if (feasible.empty()) {
            detail::place(result, item, result.packing.bins.size(), true);
            continue;
        }
        size_t chosen = chooser(feasible, result.packing.bins, item);
        if (std::find(feasible.begin(), feasible.end(), chosen) == feasible.end())
            throw std::logic_error("any_fit: chooser returned infeasible bin index " +
                                   std::to_string(chosen));
        detail::place(result, item, chosen, false);
    }
    return result;
}

// One active bin; each item goes there if it fits, else a fresh bin becomes
// active and the old one is never revisited.
inline PackResult next_fit(const Instance& instance) {
    PackResult result;
    result.packing.variant = instance.variant;
    for (const Item& item : instance.items) {
        if (!result.packing.bins.empty() &&
            fits(result.packing.bins.back(), item.size, instance.variant)) {
            detail::place(result, item, result.packing.bins.size() - 1, false);
        } else {
            detail::place(result, item, result.packing.bins.size(), true);
        }
    }
    return result;
}

// Lowest-index feasible bin, else a new bin. A bin that rejected a size keeps
// rejecting it (feasibility is antitone under additions), so a run of
// equal-size items resumes the scan at the previous item's bin.
inline PackResult first_fit(const Instance& instance) {
    PackResult result;
    result.packing.variant = instance.variant;
    Rat hint_size(0);
    size_t hint_start = 0;
    for (const Item& item : instance.items) {
        size_t chosen = result.packing.bins.size();
        bool opened = true;
        for (size_t i = item.size == hint_size ? hint_start : 0;
             i < result.packing.bins.size(); ++i) {
            if (fits(result.packing.bins[i], item.size, instance.variant)) {
                chosen = i;
                opened = false;
                break;
            }
        }
        detail::place(result, item, chosen, opened);
        hint_size = item.size;
        hint_start = chosen;
    }
    return result;
}

// Feasible bin minimizing the rule's key; ties go to the lowest index.
inline PackResult worst_fit(const Instance& instance, WfRule rule) {
    if (rule == WfRule::MinTotalExclMax && instance.variant == Variant::Min)
        throw std::invalid_argument(
            "worst_fit: rule min-total-excl-max is defined for max-OEBP only");
    return any_fit(instance, [rule](const std::vector<size_t>& feasible,
                                    const std::vector<Bin>& bins, const Item&) {
        size_t best = feasible.front();
        auto key = [rule](const Bin& b) {
            return rule == WfRule::MinTotal ? b.total : b.total - b.max_size;
        };
        Rat best_key = key(bins[best]);
        for (size_t i : feasible) {
            Rat k = key(bins[i]);
            if (k < best_key) {
                best = i;
                best_key = k;
            }
        }
        return best;
    });
}

// Next Fit Decreasing, by the literal prefix rule: sort non-increasing, then
// the current bin keeps receiving items while its total before the addition
// is < 1; the addition that brings the total to >= 1 closes the bin for good.
// This can close a bin that max-OEBP feasibility would still allow to grow;
// the closed-bin property (total >= 1 except possibly the last) is exactly
// what the NFD analysis needs. For min-OEBP the rule coincides with next_fit
// on the sorted sequence.
inline PackResult nfd(const Instance& instance) {
    PackResult result;
    result.packing.variant = instance.variant;
    for (const Item& item : detail::sorted_items(instance)) {
        bool open_new =
            result.packing.bins.empty() || !(result.packing.bins.back().total < Rat(1));
        detail::place(result, item, result.packing.bins.size() - (open_new ? 0 : 1), open_new);
    }
    return result;
}

// First Fit Decreasing: sort non-increasing (stable by id), then first_fit
// under the instance's variant. For min-OEBP this produces the same bin
// sequence as nfd.
inline PackResult ffd(const Instance& instance) {
    Instance sorted = instance;
    sorted.items = detail::sorted_items(instance);
    return first_fit(sorted);
}

// Runs a packer by its CLI identifier.
inline PackResult run_algorithm(const std::string& algorithm, const Instance& instance,
                                WfRule wf_rule = WfRule::MinTotal) {
    if (algorithm == "nf") return next_fit(instance);
    if (algorithm == "wf") return worst_fit(instance, wf_rule);
    if (algorithm == "ff") return first_fit(instance);
    if (algorithm == "nfd") return nfd(instance);
    if (algorithm == "ffd") return ffd(instance);
    throw std::invalid_argument("unknown algorithm id '" + algorithm + "'");
}

}  // namespace oebp
