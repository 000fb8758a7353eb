#include "geosent/netstats/network.hpp"

#include "geosent/ingest/retweet.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace geosent::netstats {

void Graph::add_edge(std::size_t u, std::size_t v, double weight) {
    adjacency.at(u)[v] += weight;
    if (u != v) adjacency.at(v)[u] += weight;
}

double Graph::degree(std::size_t node) const {
    double k = 0.0;
    for (const auto& [neighbor, w] : adjacency.at(node)) k += w;
    return k;
}

double Graph::total_weight() const {
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) total += degree(i);
    return total;
}

std::size_t Graph::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        for (const auto& [j, w] : adjacency[i]) count += j >= i ? 1 : 0;
    }
    return count;
}

std::size_t UserNetwork::index_of(const std::string& author) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), author);
    if (it == nodes.end() || *it != author) throw std::out_of_range("unknown node " + author);
    return static_cast<std::size_t>(it - nodes.begin());
}

Graph UserNetwork::undirected() const {
    Graph g;
    g.adjacency.resize(nodes.size());
    for (const auto& [pair, weight] : edges) {
        g.add_edge(index_of(pair.first), index_of(pair.second), static_cast<double>(weight));
    }
    return g;
}

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool is_handle_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

std::optional<std::string> quoted_handle(std::string_view text) {
    for (std::string_view host : {"twitter.com/", "x.com/"}) {
        for (std::size_t pos = text.find(host); pos != std::string_view::npos; pos = text.find(host, pos + 1)) {
            // "x.com/" must not be the tail of another host name.
            if (pos > 0 && (is_handle_char(text[pos - 1]) || text[pos - 1] == '-')) continue;
            std::size_t start = pos + host.size();
            std::size_t end = start;
            while (end < text.size() && is_handle_char(text[end])) ++end;
            if (end == start || end - start > ingest::kMaxHandleLength) continue;
            if (text.substr(end).starts_with("/status/")) return std::string(text.substr(start, end - start));
        }
    }
    return std::nullopt;
}

UserNetwork build_network(std::span<const ingest::PostRecord> corpus, const std::map<std::string, std::string>& regions) {
    // Handle -> author id; the smallest id wins if a handle was reused.
    std::map<std::string, std::string> author_of;
    for (const auto& post : corpus) {
        auto [it, inserted] = author_of.emplace(lower_ascii(post.author_handle), post.author_id);
        if (!inserted) it->second = std::min(it->second, post.author_id);
    }

    UserNetwork net;
    std::set<std::string> members;
    for (const auto& post : corpus) {
        std::optional<std::string> target_handle;
        if (post.kind == ingest::PostKind::quote) {
            target_handle = quoted_handle(post.text);
        } else if (const auto marker = ingest::parse_retweet_marker(post.text)) {
            target_handle = marker->handle;
        }
        if (!target_handle) continue;
        const auto it = author_of.find(lower_ascii(*target_handle));
        if (it == author_of.end() || it->second == post.author_id) continue;
        ++net.edges[{post.author_id, it->second}];
        members.insert(post.author_id);
        members.insert(it->second);
    }
    net.nodes.assign(members.begin(), members.end());
    for (const auto& node : net.nodes) {
        const auto it = regions.find(node);
        net.region[node] = it == regions.end() ? std::nullopt : std::optional<std::string>(it->second);
    }
    return net;
}

}  // namespace geosent::netstats
