#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isowalk/graph.hpp"

namespace isowalk::cli {

/// Where a graph comes from: a discriminant, a group file or an isogeny class.
struct GraphArgs {
    std::optional<std::int64_t> discriminant;
    std::string group_file;
    std::optional<std::int64_t> ec_p;
    std::optional<std::int64_t> ec_t;
    std::vector<std::int64_t> primes;
    std::string subgroup;
    std::int64_t bound = 0;  // 0: smallest prime bound whose forms generate H
    std::vector<std::int64_t> avoid;
};

struct BuiltGraph {
    nlohmann::json descriptor;  // enough to rebuild the graph
    RegularGraph graph;
    double c = 0.0;             // second largest absolute eigenvalue
    bool forms = false;         // vertices are named by reduced forms
};

BuiltGraph build_graph(const GraphArgs& args);
/// Inverse of descriptor: rebuilds the graph named by a certificate.
BuiltGraph build_graph(const nlohmann::json& descriptor);

/// Vertex index for a user-supplied name; forms are reduced first.
std::size_t vertex_by_name(const BuiltGraph& g, const std::string& name);

std::vector<std::int64_t> parse_int_list(const std::string& text);

}  // namespace isowalk::cli
