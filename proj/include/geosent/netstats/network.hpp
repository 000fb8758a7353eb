#pragma once

#include "geosent/ingest/post_record.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geosent::netstats {

/// Undirected weighted graph as a symmetric adjacency map. A self entry
/// holds A_ii; the input network has none, aggregated graphs do.
struct Graph {
    std::vector<std::map<std::size_t, double>> adjacency;

    std::size_t size() const noexcept { return adjacency.size(); }
    void add_edge(std::size_t u, std::size_t v, double weight);
    double degree(std::size_t node) const;
    /// Sum of all adjacency entries (2m).
    double total_weight() const;
    std::size_t edge_count() const;  ///< unordered pairs, self entries included
};

/// Author interaction network. Edges point from the interacting author to the
/// author interacted with; weight counts interactions.
struct UserNetwork {
    std::vector<std::string> nodes;  ///< sorted author ids
    std::map<std::string, std::optional<std::string>> region;
    std::map<std::pair<std::string, std::string>, std::size_t> edges;

    std::size_t index_of(const std::string& author) const;
    /// Symmetrized: weight(u, v) = edges(u, v) + edges(v, u).
    Graph undirected() const;
};

/// Handle of the quoted author when the text links a status URL
/// (twitter.com/<handle>/status/... or x.com/<handle>/status/...).
std::optional<std::string> quoted_handle(std::string_view text);

/// Retweets (texts with a retweet marker) and quotes (status links) become
/// edges to the author whose handle they name; handles unknown to the corpus
/// and self-interactions are skipped. Only authors with at least one edge are
/// nodes. `regions` supplies the region attribute per author.
UserNetwork build_network(std::span<const ingest::PostRecord> corpus,
                          const std::map<std::string, std::string>& regions = {});

}  // namespace geosent::netstats
