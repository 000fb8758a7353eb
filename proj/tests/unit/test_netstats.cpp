#include "geosent/core/error.hpp"
#include "geosent/core/random.hpp"
#include "geosent/netstats/chi_square.hpp"
#include "geosent/netstats/graphml.hpp"
#include "geosent/netstats/louvain.hpp"
#include "geosent/netstats/network.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace geosent;
using namespace geosent::netstats;
using geosent::testing::make_post;

namespace {

Graph cliques(std::size_t count, std::size_t size, bool bridged) {
    Graph g;
    g.adjacency.resize(count * size);
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = i + 1; j < size; ++j) g.add_edge(c * size + i, c * size + j, 1.0);
    if (bridged)
        for (std::size_t c = 0; c + 1 < count; ++c) g.add_edge(c * size, (c + 1) * size, 1.0);
    return g;
}

Graph random_graph(std::uint64_t seed, std::size_t n, double p) {
    Rng rng(seed);
    Graph g;
    g.adjacency.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.unit() < p) g.add_edge(i, j, 1.0 + static_cast<double>(rng.below(3)));
    return g;
}

// Direct double sum over node pairs.
double naive_modularity(const Graph& g, const std::vector<std::size_t>& c) {
    const std::size_t n = g.size();
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, w] : g.adjacency[i]) {
            k[i] += w;
            two_m += w;
        }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (c[i] != c[j]) continue;
            const auto it = g.adjacency[i].find(j);
            const double a = it == g.adjacency[i].end() ? 0.0 : it->second;
            q += a - k[i] * k[j] / two_m;
        }
    return q / two_m;
}

// Best modularity over all set partitions (restricted growth strings).
double best_modularity(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> a(n, 0), b(n, 1);
    double best = naive_modularity(g, a);
    for (;;) {
        std::size_t i = n - 1;
        while (i > 0 && a[i] == b[i]) --i;
        if (i == 0) break;
        ++a[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            a[j] = 0;
            b[j] = std::max(b[j - 1], a[j - 1] + 1);
        }
        best = std::max(best, naive_modularity(g, a));
    }
    return best;
}

std::vector<std::vector<double>> expected_counts(const std::vector<std::vector<double>>& t) {
    std::vector<double> rows(t.size(), 0.0), cols(t[0].size(), 0.0);
    double n = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t[i].size(); ++j) {
            rows[i] += t[i][j];
            cols[j] += t[i][j];
            n += t[i][j];
        }
    auto e = t;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t[i].size(); ++j) e[i][j] = rows[i] * cols[j] / n;
    return e;
}

// Closed forms of the chi-square survival function for integer df.
double closed_form_sf(double x, int df) {
    if (df % 2 == 0) {
        double term = 1.0, sum = 1.0;
        for (int i = 1; i < df / 2; ++i) {
            term *= (x / 2.0) / i;
            sum += term;
        }
        return std::exp(-x / 2.0) * sum;
    }
    double sum = 0.0, term = std::sqrt(x);
    for (int i = 1; i <= (df - 1) / 2; ++i) {
        if (i > 1) term *= x / (2.0 * i - 1.0);
        sum += term;
    }
    return std::erfc(std::sqrt(x / 2.0)) + std::sqrt(2.0 / std::numbers::pi) * std::exp(-x / 2.0) * sum;
}

}  // namespace

TEST_CASE("quoted_handle") {
    CHECK(quoted_handle("se https://twitter.com/Nora_K/status/123 her") == "Nora_K");
    CHECK(quoted_handle("https://x.com/abc/status/9") == "abc");
    CHECK_FALSE(quoted_handle("https://twitter.com/abc").has_value());
    CHECK_FALSE(quoted_handle("ingen lenke").has_value());
}

TEST_CASE("build_network: retweet edges and weights") {
    std::vector<ingest::PostRecord> corpus{
        make_post("1", "A", "alice", "2020-01-01T00:00:00Z", "vindkraft er bra"),
        make_post("2", "B", "bob", "2020-01-02T00:00:00Z", "RT @alice: vindkraft er bra"),
        make_post("3", "B", "bob", "2020-01-03T00:00:00Z", "RT @Alice: vindkraft er bra"),
        make_post("4", "C", "carol", "2020-01-04T00:00:00Z", "enig https://twitter.com/bob/status/2"),
        make_post("7", "E", "erik", "2020-01-04T00:00:00Z", "lenke https://twitter.com/alice/status/1"),
        make_post("5", "A", "alice", "2020-01-05T00:00:00Z", "RT @alice: selv"),
        make_post("6", "D", "dave", "2020-01-06T00:00:00Z", "RT @ukjent: hei"),
    };
    corpus[3].kind = ingest::PostKind::quote;
    const auto net = build_network(corpus, {{"A", "NO081"}, {"B", "NO0A2"}});
    CHECK(net.nodes == std::vector<std::string>{"A", "B", "C"});
    CHECK(net.edges.at({"B", "A"}) == 2);
    CHECK(net.edges.at({"C", "B"}) == 1);
    CHECK(net.edges.size() == 2);
    CHECK(net.region.at("A") == "NO081");
    CHECK_FALSE(net.region.at("C").has_value());
    const auto g = net.undirected();
    CHECK(g.degree(net.index_of("B")) == 3.0);
    CHECK(g.total_weight() == 6.0);
}

TEST_CASE("build_network: originals only give no edges") {
    std::vector<ingest::PostRecord> corpus{make_post("1", "A", "alice", "2020-01-01T00:00:00Z", "hei"),
                                           make_post("2", "B", "bob", "2020-01-01T00:00:00Z", "hallo")};
    const auto net = build_network(corpus);
    CHECK(net.nodes.empty());
    CHECK(net.edges.empty());
    CHECK_THROWS_AS(detect_communities(net), ContractViolation);
}

TEST_CASE("louvain separates cliques") {
    for (std::size_t k = 2; k <= 5; ++k) {
        const auto p = louvain(cliques(k, 5, true));
        CHECK(p.count == k);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t i = 1; i < 5; ++i) CHECK(p.community[c * 5 + i] == p.community[c * 5]);
    }
    const auto single = louvain(cliques(1, 6, false));
    CHECK(single.count == 1);
    CHECK(single.modularity == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(louvain(Graph{std::vector<std::map<std::size_t, double>>(3)}), ContractViolation);
}

TEST_CASE("louvain: reported modularity matches the direct sum and is bounded by the optimum") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto g = random_graph(seed, 9, 0.35);
        if (g.total_weight() == 0) continue;
        const auto p = louvain(g);
        CHECK(p.modularity == doctest::Approx(naive_modularity(g, p.community)).epsilon(1e-9));
        CHECK(modularity(g, p.community) == doctest::Approx(naive_modularity(g, p.community)).epsilon(1e-9));
        std::vector<std::size_t> singletons(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) singletons[i] = i;
        CHECK(p.modularity >= naive_modularity(g, singletons) - 1e-12);
        CHECK(p.modularity <= best_modularity(g) + 1e-9);
    }
}

TEST_CASE("louvain is deterministic with and without a shuffle seed") {
    const auto g = random_graph(99, 40, 0.1);
    CHECK(louvain(g).community == louvain(g).community);
    LouvainOptions o;
    o.shuffle_seed = 7;
    CHECK(louvain(g, o).community == louvain(g, o).community);
}

TEST_CASE("modularity resolution parameter") {
    const auto g = cliques(2, 4, true);
    std::vector<std::size_t> all_one(8, 0);
    CHECK(modularity(g, all_one, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(modularity(g, all_one, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("chi-square independence") {
    const auto prop = chi_square_independence({{10, 20}, {20, 40}});
    CHECK(prop.chi_square == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(prop.p_value == doctest::Approx(1.0));
    const auto diag = chi_square_independence({{10, 0}, {0, 10}});
    CHECK(diag.chi_square == doctest::Approx(20.0));
    CHECK(diag.degrees_of_freedom == 1);
    CHECK(diag.p_value == doctest::Approx(std::erfc(std::sqrt(10.0))).epsilon(1e-9));
    CHECK_THROWS_AS(chi_square_independence({{1, 2}}), ContractViolation);
    CHECK_THROWS_AS(chi_square_independence({{1, 0}, {2, 0}}), ContractViolation);
    CHECK_THROWS_AS(chi_square_independence({{1, -1}, {2, 3}}), ContractViolation);
}

TEST_CASE("chi-square statistic against the direct formula") {
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const std::size_t r = 2 + rng.below(4), c = 2 + rng.below(5);
        std::vector<std::vector<double>> table(r, std::vector<double>(c));
        for (auto& row : table)
            for (auto& x : row) x = 1.0 + static_cast<double>(rng.below(60));
        const auto e = expected_counts(table);
        double stat = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) stat += (table[i][j] - e[i][j]) * (table[i][j] - e[i][j]) / e[i][j];
        const auto res = chi_square_independence(table);
        CHECK(res.chi_square == doctest::Approx(stat).epsilon(1e-9));
        CHECK(res.degrees_of_freedom == (r - 1) * (c - 1));
    }
}

TEST_CASE("chi-square survival function against closed forms") {
    for (int df = 1; df <= 30; ++df) {
        for (double x : {0.1, 0.5, 1.0, 3.0, 7.5, 15.0, 30.0, 60.0}) {
            const double ref = closed_form_sf(x, df);
            CHECK(chi_square_sf(x, df) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
    CHECK(chi_square_sf(0.0, 4) == 1.0);
}

TEST_CASE("cramers_v") {
    CHECK(cramers_v(6092.78, 60450, 6, 11) == doctest::Approx(0.14198).epsilon(1e-4));
    CHECK(cramers_v(20, 20, 2, 2) == doctest::Approx(1.0));
    CHECK(cramers_v(0, 20, 2, 2) == 0.0);
    CHECK_THROWS_AS(cramers_v(1, 0, 2, 2), ContractViolation);
    CHECK_THROWS_AS(cramers_v(1, 10, 1, 2), ContractViolation);
}

TEST_CASE("association is invariant to community relabeling") {
    std::map<std::string, std::optional<std::string>> regions;
    std::map<std::string, std::size_t> community, relabeled;
    Rng rng(4);
    const std::vector<std::string> codes{"NO081", "NO0A2", "NO060"};
    for (int i = 0; i < 120; ++i) {
        const auto id = "u" + std::to_string(i);
        const auto c = rng.below(4);
        regions[id] = codes[(c + rng.below(2)) % 3];
        community[id] = c;
        relabeled[id] = 10 - c;
    }
    regions["noregion"] = std::nullopt;
    community["noregion"] = 0;
    relabeled["noregion"] = 10;
    const auto a = associate(region_community_table(regions, community, 1));
    const auto b = associate(region_community_table(regions, relabeled, 1));
    CHECK(a.n == 120);
    CHECK(a.test.chi_square == doctest::Approx(b.test.chi_square).epsilon(1e-12));
    CHECK(a.cramers_v == doctest::Approx(b.cramers_v).epsilon(1e-12));
}

TEST_CASE("small communities are pooled") {
    std::map<std::string, std::optional<std::string>> regions{
        {"a", "R1"}, {"b", "R1"}, {"c", "R2"}, {"d", "R2"}, {"e", "R1"}};
    std::map<std::string, std::size_t> community{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 2}, {"e", 0}};
    const auto t = region_community_table(regions, community, 2);
    CHECK(t.columns() == 2);
    CHECK(t.total() == 5.0);
    CHECK(std::find(t.column_labels.begin(), t.column_labels.end(), "other") != t.column_labels.end());
}

TEST_CASE("graphml round trip") {
    std::vector<ingest::PostRecord> corpus{
        make_post("1", "A", "alice", "2020-01-01T00:00:00Z", "RT @bob: x"),
        make_post("2", "B", "bob", "2020-01-02T00:00:00Z", "RT @carol: y"),
        make_post("3", "C", "carol", "2020-01-03T00:00:00Z", "z"),
    };
    const auto net = build_network(corpus, {{"A", "NO081"}});
    const std::map<std::string, std::size_t> community{{"A", 0}, {"B", 0}, {"C", 1}};
    std::stringstream buf;
    write_graphml(buf, net, community);
    const auto doc = read_graphml(buf);
    REQUIRE(doc.nodes.size() == 3);
    CHECK(doc.nodes[0].id == "A");
    CHECK(doc.nodes[0].region == "NO081");
    CHECK_FALSE(doc.nodes[1].region.has_value());
    CHECK(doc.nodes[2].community == 1);
    REQUIRE(doc.edges.size() == 2);
    CHECK(doc.edges[0].source == "A");
    CHECK(doc.edges[0].target == "B");
    CHECK(doc.edges[0].weight == 1.0);

    std::stringstream empty;
    write_graphml(empty, UserNetwork{}, {});
    const auto none = read_graphml(empty);
    CHECK(none.nodes.empty());
    CHECK(none.edges.empty());

    std::istringstream junk("<graphml><graph>");
    CHECK_THROWS_AS(read_graphml(junk), InputError);
}
