#pragma once

#include "geosent/netstats/network.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace geosent::netstats {

/// Directed GraphML with node attributes "region" and "community" and an
/// edge attribute "weight".
void write_graphml(std::ostream& out, const UserNetwork& network, const std::map<std::string, std::size_t>& community);

struct GraphNode {
    std::string id;
    std::optional<std::string> region;
    std::optional<long long> community;
};

struct GraphEdge {
    std::string source;
    std::string target;
    double weight = 1.0;
};

struct GraphDocument {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
};

/// Reads the subset of GraphML written above. Throws InputError on parse errors.
GraphDocument read_graphml(std::istream& in);

}  // namespace geosent::netstats
