#pragma once

#include "geosent/netstats/network.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geosent::netstats {

/// Q = 1/(2m) * sum_ij [A_ij - resolution * k_i k_j / (2m)] * [c_i == c_j].
double modularity(const Graph& graph, const std::vector<std::size_t>& community, double resolution = 1.0);

struct LouvainOptions {
    double resolution = 1.0;
    /// Nodes are visited in index order unless a seed is given, in which case
    /// the order is a seeded permutation.
    std::optional<std::uint64_t> shuffle_seed;
    std::size_t max_levels = 64;
};

struct Partition {
    std::vector<std::size_t> community;  ///< per node, ids 0..count-1 by first occurrence
    std::size_t count = 0;
    double modularity = 0.0;
    std::size_t levels = 0;
};

/// Louvain: local moves to a fixed point, aggregate, repeat until a level
/// makes no move. Throws ContractViolation("no edges") on an edgeless graph.
Partition louvain(const Graph& graph, const LouvainOptions& options = {});

struct CommunityResult {
    std::map<std::string, std::size_t> community;  ///< author -> community id
    std::size_t count = 0;
    double modularity = 0.0;
};

CommunityResult detect_communities(const UserNetwork& network, const LouvainOptions& options = {});

}  // namespace geosent::netstats
