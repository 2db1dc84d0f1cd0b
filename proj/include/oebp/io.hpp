#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "oebp/core.hpp"

namespace oebp {

using Json = nlohmann::ordered_json;

// Instance JSON:
//   {"variant":"max"|"min","beta":"p/q"?,"items":[{"id":int,"size":"p/q","cluster":int?},...]}
// Sizes are lowest-terms "p/q" strings ("1" allowed). Key order is fixed so
// identical inputs serialize byte-identically.
inline Json instance_to_json(const Instance& instance) {
    Json j;
    j["variant"] = variant_str(instance.variant);
    if (instance.beta) j["beta"] = rat_str(*instance.beta);
    j["items"] = Json::array();
    for (const Item& it : instance.items) {
        Json ji;
        ji["id"] = it.id;
        ji["size"] = rat_str(it.size);
        if (it.cluster) ji["cluster"] = *it.cluster;
        j["items"].push_back(std::move(ji));
    }
    return j;
}

inline std::string save_instance(const Instance& instance) {
    return instance_to_json(instance).dump(2) + "\n";
}

inline Instance instance_from_json(const Json& j) {
    Instance instance;
    try {
        instance.variant = parse_variant(j.at("variant").get<std::string>());
        if (j.contains("beta")) instance.beta = parse_rat(j.at("beta").get<std::string>());
        for (const Json& ji : j.at("items")) {
            Item item;
            item.id = ji.at("id").get<long long>();
            item.size = parse_rat(ji.at("size").get<std::string>());
            if (ji.contains("cluster")) item.cluster = ji.at("cluster").get<long long>();
            instance.items.push_back(std::move(item));
        }
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("instance JSON: ") + e.what());
    }
    instance.validate();
    return instance;
}

inline Instance load_instance(const std::string& text) {
    Json j = Json::parse(text, nullptr, true, /*ignore_comments=*/false);
    return instance_from_json(j);
}

// Packing JSON: {"bins":[[ids...],...]}. Sizes come from the instance.
inline Json packing_to_json(const Packing& packing) {
    Json j;
    j["bins"] = Json::array();
    for (const Bin& bin : packing.bins) j["bins"].push_back(bin.ids);
    return j;
}

inline std::string save_packing(const Packing& packing) {
    return packing_to_json(packing).dump(2) + "\n";
}

inline Packing packing_from_json(const Json& j, const Instance& instance) {
    Packing packing;
    packing.variant = instance.variant;
    auto sizes = size_index(instance);
    try {
        for (const Json& jb : j.at("bins"))
            packing.bins.push_back(make_bin(sizes, jb.get<std::vector<long long>>()));
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("packing JSON: ") + e.what());
    }
    return packing;
}

inline Packing load_packing(const std::string& text, const Instance& instance) {
    return packing_from_json(Json::parse(text), instance);
}

}  // namespace oebp
