#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "oebp/rational.hpp"

namespace oebp {

// Which extreme item is excluded from a bin's capacity sum.
enum class Variant { Max, Min };

inline std::string variant_str(Variant v) { return v == Variant::Max ? "max" : "min"; }

inline Variant parse_variant(const std::string& s) {
    if (s == "max") return Variant::Max;
    if (s == "min") return Variant::Min;
    throw std::invalid_argument("unknown variant '" + s + "' (expected \"max\" or \"min\")");
}

struct Item {
    long long id = 0;
    Rat size;
    std::optional<long long> cluster;  // cluster/batch label; present iff the instance is clustered
};

// t = ceil(1/beta) - 1; t = 0 iff beta = 1, and beta in [1/(t+1), 1/t) otherwise.
inline long long t_of_beta(const Rat& beta) {
    if (!(beta > Rat(0) && beta <= Rat(1)))
        throw std::invalid_argument("t_of_beta: beta must be in (0, 1], got " + rat_str(beta));
    return to_ll(rat_ceil(Rat(1) / beta) - 1);
}

struct Instance {
    Variant variant = Variant::Max;
    std::optional<Rat> beta;  // declared size cap; absent means 1
    std::vector<Item> items;

    Rat beta_or_default() const { return beta ? *beta : Rat(1); }

    bool clustered() const { return !items.empty() && items.front().cluster.has_value(); }

    // Checks id uniqueness, size domain, the declared cap, and uniform labeling.
    void validate() const {
        Rat cap = beta_or_default();
        if (!(cap > Rat(0) && cap <= Rat(1)))
            throw std::invalid_argument("instance beta must be in (0, 1], got " + rat_str(cap));
        std::unordered_set<long long> seen;
        bool any_label = false, all_label = true;
        for (const Item& it : items) {
            if (!seen.insert(it.id).second)
                throw std::invalid_argument("duplicate item id " + std::to_string(it.id));
            if (!(it.size > Rat(0) && it.size <= Rat(1)))
                throw std::invalid_argument("item " + std::to_string(it.id) +
                                            ": size must be in (0, 1], got " + rat_str(it.size));
            if (it.size > cap)
                throw std::invalid_argument("item " + std::to_string(it.id) + ": size " +
                                            rat_str(it.size) + " exceeds declared beta " +
                                            rat_str(cap));
            any_label |= it.cluster.has_value();
            all_label &= it.cluster.has_value();
        }
        if (any_label && !all_label)
            throw std::invalid_argument("cluster labels must be present on all items or none");
    }
};

// A bin keeps its items in insertion order for reproducible traces; validity
// is a function of the multiset only. Caches are maintained incrementally.
struct Bin {
    std::vector<long long> ids;
    std::vector<Rat> sizes;
    Rat total{0};
    Rat max_size{0};
    Rat min_size{0};

    bool empty() const { return ids.empty(); }
    size_t count() const { return ids.size(); }

    void add(long long id, const Rat& size) {
        if (ids.empty()) {
            max_size = min_size = size;
        } else {
            if (size > max_size) max_size = size;
            if (size < min_size) min_size = size;
        }
        ids.push_back(id);
        sizes.push_back(size);
        total += size;
    }
};

// Valid iff the total size excluding one designated item is strictly below 1:
// the largest item for max-OEBP, the smallest for min-OEBP.
inline bool bin_valid(const Bin& bin, Variant variant) {
    if (bin.empty()) throw std::invalid_argument("bin_valid: empty bin");
    Rat excluded = variant == Variant::Max ? bin.max_size : bin.min_size;
    return bin.total - excluded < Rat(1);
}

// True iff the bin stays valid after adding an item of the given size.
// An empty bin accepts anything in (0, 1].
inline bool fits(const Bin& bin, const Rat& size, Variant variant) {
    if (!(size > Rat(0) && size <= Rat(1)))
        throw std::invalid_argument("fits: size must be in (0, 1], got " + rat_str(size));
    if (bin.empty()) return true;
    Rat total = bin.total + size;
    Rat excluded;
    if (variant == Variant::Max)
        excluded = std::max(bin.max_size, size);
    else
        excluded = std::min(bin.min_size, size);
    return total - excluded < Rat(1);
}

struct Packing {
    Variant variant = Variant::Max;
    std::vector<Bin> bins;

    long long bin_count() const { return static_cast<long long>(bins.size()); }
};

inline std::unordered_map<long long, Rat> size_index(const Instance& instance) {
    std::unordered_map<long long, Rat> by_id;
    by_id.reserve(instance.items.size());
    for (const Item& it : instance.items) by_id.emplace(it.id, it.size);
    return by_id;
}

// Rebuilds a Bin from item ids against an instance's sizes.
inline Bin make_bin(const std::unordered_map<long long, Rat>& sizes,
                    const std::vector<long long>& ids) {
    Bin bin;
    for (long long id : ids) {
        auto it = sizes.find(id);
        if (it == sizes.end())
            throw std::runtime_error("unknown item id " + std::to_string(id) + " in packing");
        bin.add(id, it->second);
    }
    return bin;
}

// True iff the bins exactly partition the instance's items and each bin is a
// valid nonempty bin. Id-set mismatches are structural errors, not "false":
// a packing referring to other items is a different object, not an invalid one.
inline bool packing_valid(const Packing& packing, const Instance& instance) {
    std::unordered_set<long long> remaining;
    remaining.reserve(instance.items.size());
    for (const Item& it : instance.items) remaining.insert(it.id);
    for (const Bin& bin : packing.bins) {
        for (long long id : bin.ids) {
            auto found = remaining.find(id);
            if (found == remaining.end())
                throw std::runtime_error("packing refers to item id " + std::to_string(id) +
                                         " not present (or already placed) in the instance");
            remaining.erase(found);
        }
    }
    if (!remaining.empty())
        throw std::runtime_error("packing is missing " + std::to_string(remaining.size()) +
                                 " instance item(s)");
    for (const Bin& bin : packing.bins)
        if (bin.empty() || !bin_valid(bin, packing.variant)) return false;
    return true;
}

}  // namespace oebp
