#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hh/common.hpp"
#include "hh/domains/csp.hpp"
#include "hh/domains/knapsack.hpp"
#include "hh/domains/partition.hpp"

namespace hh::io {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

/// Instance paths: a directory (all regular files, sorted by name) or a
/// single file.
inline std::vector<std::string> collect_instance_paths(const std::string& root) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    if (fs::is_directory(root)) {
        for (const auto& e : fs::directory_iterator(root))
            if (e.is_regular_file()) paths.push_back(e.path().string());
        std::sort(paths.begin(), paths.end());
    } else if (fs::exists(root)) {
        paths.push_back(root);
    } else {
        throw std::runtime_error("instance path does not exist: " + root);
    }
    return paths;
}

/// Partition instances: each file holds a JSON integer array, or an array of
/// arrays for several instances per file.
inline std::vector<partition::PartitionInstance> load_partition_instances(const std::string& root) {
    std::vector<partition::PartitionInstance> out;
    for (const auto& path : collect_instance_paths(root)) {
        auto j = nlohmann::json::parse(read_file(path));
        if (!j.is_array()) throw ParseError("partition instance must be a JSON array: " + path);
        auto push = [&](const nlohmann::json& arr) {
            partition::PartitionInstance inst;
            inst.items = arr.get<std::vector<long>>();
            partition::validate(inst);
            out.push_back(std::move(inst));
        };
        if (!j.empty() && j.front().is_array())
            for (const auto& arr : j) push(arr);
        else
            push(j);
    }
    return out;
}

inline std::vector<knapsack::KnapsackInstance> load_knapsack_instances(const std::string& root) {
    std::vector<knapsack::KnapsackInstance> out;
    for (const auto& path : collect_instance_paths(root))
        out.push_back(knapsack::parse_knapsack(read_file(path)));
    return out;
}

/// CSP instances: .json files in the canonical format, .xml in the XCSP
/// subset.
inline std::vector<csp::CspInstance> load_csp_instances(const std::string& root) {
    std::vector<csp::CspInstance> out;
    for (const auto& path : collect_instance_paths(root)) {
        std::string text = read_file(path);
        if (path.size() >= 4 && path.substr(path.size() - 4) == ".xml")
            out.push_back(csp::parse_csp_xcsp(text));
        else
            out.push_back(csp::parse_csp_json(nlohmann::json::parse(text)));
    }
    return out;
}

inline Selector load_selector(const std::string& path) {
    return nlohmann::json::parse(read_file(path)).get<Selector>();
}

inline void save_selector(const Selector& sel, const std::string& path) {
    write_file(path, nlohmann::json(sel).dump(2) + "\n");
}

inline TransformSpec load_transform(const std::string& path) {
    return nlohmann::json::parse(read_file(path)).get<TransformSpec>();
}

inline void save_transform(const TransformSpec& spec, const std::string& path) {
    write_file(path, nlohmann::json(spec).dump(2) + "\n");
}

} // namespace hh::io
