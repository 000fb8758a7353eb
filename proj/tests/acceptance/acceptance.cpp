#include "corpus_gen.hpp"
#include "geosent/analytics/user_stats.hpp"
#include "geosent/classify/annotated_set.hpp"
#include "geosent/classify/baseline.hpp"
#include "geosent/classify/metrics.hpp"
#include "geosent/core/random.hpp"
#include "geosent/ingest/retweet.hpp"
#include "geosent/netstats/chi_square.hpp"
#include "geosent/netstats/louvain.hpp"
#include "geosent/pipeline/filtration.hpp"
#include "geosent/pipeline/stages.hpp"
#include "metrics_oracle.hpp"
#include "signature_corpus.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace geosent;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Checker {
public:
    void expect(bool condition, const std::string& what) {
        if (!condition && outcome_.pass) {
            outcome_.pass = false;
            outcome_.detail = what;
        }
    }
    Outcome& outcome() { return outcome_; }

private:
    Outcome outcome_;
};

bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(std::fabs(b), 1e-300); }
double round2(double x) { return std::round(x * 100.0) / 100.0; }

Outcome table_reproduction() {
    struct Row {
        int year;
        std::size_t tweets, fresh, active;
        double share_new, per_user;
    };
    const std::vector<Row> rows{
        {2008, 16, 9, 9, 1.00, 1.78},         {2009, 411, 213, 218, 0.98, 1.89},
        {2010, 682, 285, 349, 0.82, 1.95},    {2011, 931, 328, 455, 0.72, 2.05},
        {2012, 2163, 654, 872, 0.75, 2.48},   {2013, 1910, 538, 852, 0.63, 2.24},
        {2014, 2129, 449, 800, 0.56, 2.66},   {2015, 2497, 431, 850, 0.51, 2.94},
        {2016, 2560, 299, 716, 0.42, 3.58},   {2017, 2542, 318, 740, 0.43, 3.44},
        {2018, 4442, 413, 895, 0.46, 4.96},   {2019, 15783, 1214, 2250, 0.54, 7.01},
        {2020, 13288, 792, 1985, 0.40, 6.69}, {2021, 9512, 714, 1944, 0.37, 4.89},
        {2022, 9961, 630, 1868, 0.34, 5.33}};
    Checker c;
    for (const auto& r : rows) {
        const auto d = analytics::derive_yearly_stats(r.year, r.tweets, r.fresh, r.active);
        c.expect(close_abs(round2(d.share_new), r.share_new, 0.005), "share_new " + std::to_string(r.year));
        c.expect(close_abs(round2(d.tweets_per_user), r.per_user, 0.005), "tweets_per_user " + std::to_string(r.year));
    }
    c.outcome().detail = c.outcome().pass ? "15 years" : c.outcome().detail;
    return c.outcome();
}

Outcome cramers_v_reproduction() {
    const double v = netstats::cramers_v(6092.78, 60450, 11, 6);
    char buf[64];
    std::snprintf(buf, sizeof buf, "V = %.5f", v);
    return {close_abs(v, 0.142, 0.001), buf};
}

Outcome metrics_oracle() {
    using classify::Sentiment;
    Rng rng(1);
    Checker c;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng.below(200);
        // Skewed draws so some classes are missing from one side.
        const std::size_t gold_classes = 1 + rng.below(3), pred_classes = 1 + rng.below(3);
        std::vector<std::size_t> gold(n), pred(n);
        std::vector<Sentiment> gs(n), ps(n);
        for (std::size_t i = 0; i < n; ++i) {
            gold[i] = rng.below(gold_classes);
            pred[i] = rng.below(4) == 0 ? gold[i] : rng.below(pred_classes);
            gs[i] = static_cast<Sentiment>(gold[i]);
            ps[i] = static_cast<Sentiment>(pred[i]);
        }
        const auto oracle = testing::oracle_metrics(pred, gold, 3);
        const auto report = classify::evaluate_labels(ps, gs, classify::LabelScheme::ternary);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& o = oracle.classes[k];
            const std::size_t tp = report.matrix.at(k, k);
            c.expect(tp == o.tp, "tp");
            c.expect(report.matrix.column_sum(k) - tp == o.fp, "fp");
            c.expect(report.matrix.row_sum(k) - tp == o.fn, "fn");
            c.expect(report.per_class[k].present == o.present, "present");
            c.expect(close_abs(report.per_class[k].precision, o.precision, 1e-12), "precision");
            c.expect(close_abs(report.per_class[k].recall, o.recall, 1e-12), "recall");
            c.expect(close_abs(report.per_class[k].f1, o.f1, 1e-12), "f1");
        }
        c.expect(close_abs(report.macro_f1, oracle.macro_f1, 1e-12), "macro_f1");
        c.expect(close_abs(report.accuracy, oracle.accuracy, 1e-12), "accuracy");
    }
    if (c.outcome().pass) c.outcome().detail = "1000 pairs";
    return c.outcome();
}

Outcome f1_grid() {
    Checker c;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double p = i / 9.0, r = j / 9.0;
            const double direct = p + r == 0 ? 0.0 : 2 * p * r / (p + r);
            c.expect(close_abs(classify::f1(p, r), direct, 1e-12), "grid point");
        }
    c.expect(classify::f1(0, 0) == 0.0, "f1(0,0)");
    if (c.outcome().pass) c.outcome().detail = "100 points";
    return c.outcome();
}

textprep::CleanerConfig demo_cleaner() {
    textprep::CleanerConfig cfg;
    cfg.stopwords = textprep::TermSet({"og", "er", "blir", "på", "i"});
    cfg.keywords = textprep::TermSet({"vindkraft", "havvind", "vindturbin"});
    return cfg;
}

Outcome filtration_conservation() {
    const auto gazetteer = testing::small_gazetteer();
    const auto cleaner = demo_cleaner();
    Rng sizes(2);
    Checker c;
    std::size_t largest = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t size = t == 0 ? 0 : t == 1 ? 10000 : sizes.below(10001);
        largest = std::max(largest, size);
        const auto corpus = testing::random_corpus(1000 + t, size);
        const auto result = pipeline::run_filtration(corpus, gazetteer, cleaner);
        const auto& l = result.ledger;
        c.expect(l.total_in == size, "total_in");
        c.expect(l.conserved(), "conservation");
        c.expect(l.retained == result.retained.size(), "retained count");
        auto shuffled = corpus;
        Rng rng(77 + t);
        rng.shuffle(std::span<ingest::PostRecord>(shuffled));
        const auto again = pipeline::run_filtration(shuffled, gazetteer, cleaner);
        c.expect(again.ledger == l, "permuted ledger");
        c.expect(again.documents == result.documents, "permuted documents");
    }
    if (c.outcome().pass) c.outcome().detail = "100 corpora up to " + std::to_string(largest) + " posts, each also permuted";
    return c.outcome();
}

Outcome retweet_repair() {
    Checker c;
    std::size_t restored = 0, orphans = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto fixture = testing::repair_fixture(seed, 200);
        const auto result = ingest::repair_retweets(fixture.corpus);
        const std::set<std::string> dropped(result.dropped_ids.begin(), result.dropped_ids.end());
        c.expect(dropped == std::set<std::string>(fixture.orphans.begin(), fixture.orphans.end()), "orphans dropped");
        std::size_t seen = 0;
        for (const auto& r : result.records)
            if (const auto it = fixture.expected.find(r.id); it != fixture.expected.end()) {
                c.expect(r.text == it->second, "restored text of " + r.id);
                ++seen;
            }
        c.expect(seen == fixture.expected.size(), "every restorable retweet kept");
        restored += seen;
        orphans += dropped.size();
        const auto twice = ingest::repair_retweets(result.records);
        c.expect(twice.records == result.records, "idempotence");
        c.expect(twice.dropped_ids.empty(), "idempotence drops");
    }
    if (c.outcome().pass)
        c.outcome().detail = std::to_string(restored) + " restored, " + std::to_string(orphans) + " orphans dropped";
    return c.outcome();
}

double naive_modularity(const netstats::Graph& g, const std::vector<std::size_t>& community) {
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
            if (community[i] != community[j]) continue;
            const auto it = g.adjacency[i].find(j);
            q += (it == g.adjacency[i].end() ? 0.0 : it->second) - k[i] * k[j] / two_m;
        }
    return q / two_m;
}

Outcome community_detection() {
    Checker c;
    for (std::size_t k = 5; k <= 10; ++k) {
        netstats::Graph g;
        g.adjacency.resize(2 * k);
        for (std::size_t side = 0; side < 2; ++side)
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j) g.add_edge(side * k + i, side * k + j, 1.0);
        g.add_edge(k - 1, k, 1.0);
        for (std::uint64_t seed = 0; seed <= 10; ++seed) {
            netstats::LouvainOptions options;
            if (seed > 0) options.shuffle_seed = seed;
            const auto p = netstats::louvain(g, options);
            c.expect(p.count == 2, "two cliques of " + std::to_string(k));
        }
    }
    Rng rng(3);
    std::size_t graphs = 0;
    while (graphs < 300) {
        const std::size_t n = 2 + rng.below(14);
        netstats::Graph g;
        g.adjacency.resize(n);
        const double p = 0.1 + 0.5 * rng.unit();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.unit() < p) g.add_edge(i, j, 1.0 + static_cast<double>(rng.below(4)));
        if (g.total_weight() == 0) continue;
        ++graphs;
        const auto part = netstats::louvain(g);
        c.expect(close_abs(part.modularity, naive_modularity(g, part.community), 1e-9), "modularity recomputation");
    }
    if (c.outcome().pass) c.outcome().detail = "k = 5..10 with 11 visit orders, 300 graphs up to 15 nodes";
    return c.outcome();
}

// Integer-df survival function by its finite series, in long double.
long double reference_sf(long double x, int df) {
    if (df % 2 == 0) {
        long double term = 1.0L, sum = 1.0L;
        for (int i = 1; i < df / 2; ++i) {
            term *= (x / 2.0L) / i;
            sum += term;
        }
        return std::exp(-x / 2.0L) * sum;
    }
    long double sum = 0.0L, term = std::sqrt(x);
    for (int i = 1; i <= (df - 1) / 2; ++i) {
        if (i > 1) term *= x / (2.0L * i - 1.0L);
        sum += term;
    }
    return std::erfc(std::sqrt(x / 2.0L)) +
           std::sqrt(2.0L / 3.141592653589793238462643383279502884L) * std::exp(-x / 2.0L) * sum;
}

Outcome chi_square_oracle() {
    Checker c;
    Rng rng(4);
    for (int t = 0; t < 500; ++t) {
        const std::size_t r = 2 + rng.below(5), k = 2 + rng.below(5);
        std::vector<std::vector<double>> table(r, std::vector<double>(k));
        std::vector<double> rows(r, 0.0), cols(k, 0.0);
        double n = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                table[i][j] = 1.0 + static_cast<double>(rng.below(t % 2 ? 500 : 20));
                rows[i] += table[i][j];
                cols[j] += table[i][j];
                n += table[i][j];
            }
        double stat = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const double e = rows[i] * cols[j] / n;
                stat += (table[i][j] - e) * (table[i][j] - e) / e;
            }
        const auto res = netstats::chi_square_independence(table);
        c.expect(close_rel(res.chi_square, stat, 1e-9), "statistic");
        c.expect(res.degrees_of_freedom == (r - 1) * (k - 1), "df");
        const auto ref = static_cast<double>(reference_sf(stat, static_cast<int>(res.degrees_of_freedom)));
        c.expect(close_abs(res.p_value, ref, 1e-6), "table p-value");
    }
    std::size_t points = 0;
    for (int df = 1; df <= 60; ++df)
        for (double x = 0.05; x < 4.0 * df + 40.0; x *= 1.3) {
            const double ref = static_cast<double>(reference_sf(x, df));
            c.expect(close_abs(netstats::chi_square_sf(x, df), ref, 1e-6) &&
                         (ref < 1e-290 || close_rel(netstats::chi_square_sf(x, df), ref, 1e-6)),
                     "p-value df " + std::to_string(df) + " x " + std::to_string(x));
            ++points;
        }
    if (c.outcome().pass) c.outcome().detail = "500 tables, " + std::to_string(points) + " p-values for df 1..60";
    return c.outcome();
}

Outcome baseline_classifier() {
    const auto set = testing::signature_corpus(20221001, 1500);
    const auto split = classify::stratified_split(set, 0.2, 20221001);
    const auto model = classify::BaselineModel::train(split.train, {});
    std::vector<classify::Sentiment> pred, gold;
    for (const auto& item : split.validation.items) {
        pred.push_back(model.predict(item.document.post_id, item.document.tokens).label);
        gold.push_back(item.label);
    }
    const double macro = classify::evaluate_labels(pred, gold, classify::LabelScheme::ternary).macro_f1;
    char buf[96];
    std::snprintf(buf, sizeof buf, "macro F1 = %.4f on %zu held-out", macro, gold.size());
    return {macro >= 0.9, buf};
}

int run_cli(const fs::path& run_dir) {
    const std::string command = std::string(GEOSENT_CLI_PATH) + " -c " + DEMO_CONFIG_PATH + " --run-dir " +
                                run_dir.string() + " all >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end_determinism() {
    testing::TempDir a("accept-a"), b("accept-b");
    double slowest = 0.0;
    for (const auto* dir : {&a, &b}) {
        const auto start = std::chrono::steady_clock::now();
        if (run_cli(dir->path()) != 0) return {false, "pipeline run failed"};
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a.path())) {
        const auto name = entry.path().filename();
        if (name == pipeline::kManifestFile) continue;
        if (!fs::exists(b.path() / name)) return {false, "missing " + name.string()};
        if (testing::read_file(entry.path()) != testing::read_file(b.path() / name))
            return {false, "differs: " + name.string()};
        ++files;
    }
    const auto ma = pipeline::read_manifest(a.path()), mb = pipeline::read_manifest(b.path());
    for (const auto& [stage, entry] : ma["stages"].items())
        if (entry["artifacts"] != mb["stages"][stage]["artifacts"]) return {false, "manifest digests differ"};
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu artifacts identical, slowest run %.2f s", files, slowest);
    return {slowest < 30.0, buf};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
        {"yearly-user-table", table_reproduction},
        {"cramers-v", cramers_v_reproduction},
        {"metrics-oracle", metrics_oracle},
        {"f1-grid", f1_grid},
        {"filtration-conservation", filtration_conservation},
        {"retweet-repair", retweet_repair},
        {"community-detection", community_detection},
        {"chi-square-oracle", chi_square_oracle},
        {"baseline-classifier", baseline_classifier},
        {"end-to-end-determinism", end_to_end_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : checks) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (name == "yearly-user-table" && secs >= 1.0) outcome = {false, "too slow"};
        failures += !outcome.pass;
        std::printf("%s %s (%s; %.2f s)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
