#include "geosent/netstats/louvain.hpp"

#include "geosent/core/error.hpp"
#include "geosent/core/random.hpp"

#include <numeric>

namespace geosent::netstats {

double modularity(const Graph& graph, const std::vector<std::size_t>& community, double resolution) {
    const double two_m = graph.total_weight();
    if (two_m <= 0.0) return 0.0;
    std::size_t groups = 0;
    for (std::size_t c : community) groups = std::max(groups, c + 1);
    std::vector<double> internal(groups, 0.0);
    std::vector<double> degree_sum(groups, 0.0);
    for (std::size_t i = 0; i < graph.size(); ++i) {
        degree_sum[community[i]] += graph.degree(i);
        for (const auto& [j, w] : graph.adjacency[i]) {
            if (community[j] == community[i]) internal[community[i]] += w;
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < groups; ++c) {
        q += internal[c] / two_m - resolution * (degree_sum[c] / two_m) * (degree_sum[c] / two_m);
    }
    return q;
}

namespace {

/// One level of local moves. Returns true if any node changed community.
bool local_moves(const Graph& graph, std::vector<std::size_t>& community, const std::vector<std::size_t>& order,
                 double resolution) {
    const double two_m = graph.total_weight();
    std::vector<double> degree(graph.size());
    std::vector<double> total(graph.size(), 0.0);  // sum of degrees per community
    for (std::size_t i = 0; i < graph.size(); ++i) {
        degree[i] = graph.degree(i);
        total[community[i]] += degree[i];
    }

    bool moved_any = false;
    std::vector<double> link(graph.size(), 0.0);
    std::vector<std::size_t> touched;
    for (;;) {
        bool moved = false;
        for (std::size_t node : order) {
            const std::size_t current = community[node];
            touched.clear();
            for (const auto& [neighbor, w] : graph.adjacency[node]) {
                if (neighbor == node) continue;
                const std::size_t c = community[neighbor];
                if (link[c] == 0.0) touched.push_back(c);
                link[c] += w;
            }
            total[current] -= degree[node];

            // Gain of joining c, up to a common positive factor.
            auto gain = [&](std::size_t c) { return link[c] - resolution * total[c] * degree[node] / two_m; };
            std::size_t best = current;
            double best_gain = gain(current);
            std::sort(touched.begin(), touched.end());
            for (std::size_t c : touched) {
                const double g = gain(c);
                if (g > best_gain + 1e-12) {
                    best_gain = g;
                    best = c;
                }
            }
            total[best] += degree[node];
            community[node] = best;
            for (std::size_t c : touched) link[c] = 0.0;
            link[current] = 0.0;
            if (best != current) moved = true;
        }
        if (!moved) break;
        moved_any = true;
    }
    return moved_any;
}

/// Renumbers ids to 0..k-1 by first occurrence; returns k.
std::size_t compact(std::vector<std::size_t>& community) {
    std::vector<std::size_t> remap(community.size(), SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t& c : community) {
        if (remap[c] == SIZE_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

Graph aggregate(const Graph& graph, const std::vector<std::size_t>& community, std::size_t count) {
    Graph out;
    out.adjacency.resize(count);
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (const auto& [j, w] : graph.adjacency[i]) out.adjacency[community[i]][community[j]] += w;
    }
    return out;
}

}  // namespace

Partition louvain(const Graph& graph, const LouvainOptions& options) {
    if (graph.total_weight() <= 0.0) throw ContractViolation("no edges");

    Partition result;
    result.community.resize(graph.size());
    std::iota(result.community.begin(), result.community.end(), std::size_t{0});

    std::optional<Rng> rng;
    if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

    Graph level_graph = graph;
    for (std::size_t level = 0; level < options.max_levels; ++level) {
        std::vector<std::size_t> local(level_graph.size());
        std::iota(local.begin(), local.end(), std::size_t{0});
        std::vector<std::size_t> order = local;
        if (rng) rng->shuffle(std::span<std::size_t>(order));

        if (!local_moves(level_graph, local, order, options.resolution)) break;
        const std::size_t count = compact(local);
        for (std::size_t& c : result.community) c = local[c];
        ++result.levels;
        if (count == level_graph.size()) break;
        level_graph = aggregate(level_graph, local, count);
    }
    result.count = compact(result.community);
    result.modularity = modularity(graph, result.community, options.resolution);
    return result;
}

CommunityResult detect_communities(const UserNetwork& network, const LouvainOptions& options) {
    const Partition partition = louvain(network.undirected(), options);
    CommunityResult result;
    result.count = partition.count;
    result.modularity = partition.modularity;
    for (std::size_t i = 0; i < network.nodes.size(); ++i) result.community[network.nodes[i]] = partition.community[i];
    return result;
}

}  // namespace geosent::netstats
