#include "geosent/pipeline/stages.hpp"

#include "geosent/analytics/series.hpp"
#include "geosent/analytics/survey.hpp"
#include "geosent/analytics/user_stats.hpp"
#include "geosent/classify/adapter_client.hpp"
#include "geosent/classify/annotated_set.hpp"
#include "geosent/classify/baseline.hpp"
#include "geosent/classify/classifier.hpp"
#include "geosent/classify/metrics.hpp"
#include "geosent/classify/sampling.hpp"
#include "geosent/core/csv.hpp"
#include "geosent/core/digest.hpp"
#include "geosent/core/error.hpp"
#include "geosent/geocode/gazetteer.hpp"
#include "geosent/geocode/resolver.hpp"
#include "geosent/ingest/corpus_reader.hpp"
#include "geosent/ingest/fetch_client.hpp"
#include "geosent/ingest/ledger.hpp"
#include "geosent/ingest/retweet.hpp"
#include "geosent/netstats/chi_square.hpp"
#include "geosent/netstats/graphml.hpp"
#include "geosent/netstats/louvain.hpp"
#include "geosent/netstats/network.hpp"
#include "geosent/pipeline/filtration.hpp"
#include "geosent/textprep/cleaner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace geosent::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kStageVersion = 1;

// Artifact file names.
constexpr const char* kPosts = "posts.jsonl";
constexpr const char* kQuarantine = "quarantine.jsonl";
constexpr const char* kIngestReport = "ingest_report.json";
constexpr const char* kLocated = "located.jsonl";
constexpr const char* kGeocodeReport = "geocode_report.json";
constexpr const char* kRegionalCounts = "regional_counts.csv";
constexpr const char* kCleaned = "cleaned.jsonl";
constexpr const char* kLedgerJson = "filtration_ledger.json";
constexpr const char* kLedgerCsv = "filtration_ledger.csv";
constexpr const char* kModel = "model.bin";
constexpr const char* kTrainMetrics = "train_metrics.json";
constexpr const char* kPredictions = "predictions.jsonl";
constexpr const char* kSample = "annotation_sample.csv";
constexpr const char* kYearlyUsers = "yearly_user_stats.csv";
constexpr const char* kUserFrequency = "user_frequency.csv";
constexpr const char* kSentimentYearly = "sentiment_yearly.csv";
constexpr const char* kSentimentYearlyLong = "sentiment_yearly_long.csv";
constexpr const char* kSentimentMonthly = "sentiment_monthly.csv";
constexpr const char* kSentimentMonthlyLong = "sentiment_monthly_long.csv";
constexpr const char* kNormalized = "normalized_trends.csv";
constexpr const char* kTokenCounts = "token_counts_monthly.csv";
constexpr const char* kSurveyComparison = "survey_comparison.csv";
constexpr const char* kSurveyCoverage = "survey_coverage.csv";
constexpr const char* kGraphml = "network.graphml";
constexpr const char* kCommunities = "communities.csv";
constexpr const char* kAssociation = "association.csv";
constexpr const char* kAssociationSummary = "association_summary.csv";
constexpr const char* kNetworkSummary = "network_summary.json";
constexpr const char* kReport = "report.md";

class StageRun {
public:
    StageRun(const Config& config, std::string name) : config_(config), name_(std::move(name)) {}

    fs::path path(std::string_view file) const { return config_.run_dir / file; }

    /// Throws StageOrderError unless `file` exists.
    fs::path require(std::string_view file, std::string_view producer) const {
        auto p = path(file);
        if (!fs::exists(p)) {
            throw StageOrderError("stage order violation: " + name_ + " needs " + std::string(file) + "; run '" +
                                  std::string(producer) + "' first");
        }
        return p;
    }

    fs::path input(std::string role, const fs::path& file) {
        if (!fs::exists(file)) throw InputError("input file not found: " + file.string());
        inputs_[std::move(role)] = sha256_file(file);
        return file;
    }

    /// Writes via a temporary file so a failed stage never leaves a half-written artifact.
    void write(std::string_view file, const std::function<void(std::ostream&)>& body) {
        fs::create_directories(config_.run_dir);
        const auto target = path(file);
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw InputError("cannot write " + tmp.string());
            body(out);
            out.flush();
            if (!out) throw InputError("write failed for " + tmp.string());
        }
        fs::rename(tmp, target);
        artifacts_.emplace_back(file);
    }

    void write_json(std::string_view file, const ordered_json& j) {
        write(file, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    }

    /// Removes an artifact this stage no longer produces.
    void remove(std::string_view file) { fs::remove(path(file)); }

    ordered_json& counts() { return counts_; }

    void commit(std::ostream& log, const std::optional<ingest::FiltrationLedger>& ledger = std::nullopt) {
        auto manifest = read_manifest(config_.run_dir);
        manifest["config_hash"] = config_hash(config_);
        manifest["seed"] = config_.seed;
        manifest["config"] = config_.to_json();
        if (!manifest.contains("inputs")) manifest["inputs"] = ordered_json::object();
        for (const auto& [role, digest] : inputs_) manifest["inputs"][role] = digest;
        if (ledger) manifest["filtration_ledger"] = ingest::to_json(*ledger);

        ordered_json stage;
        stage["version"] = kStageVersion;
        stage["completed_at"] = timestamp();
        stage["counts"] = counts_;
        ordered_json digests = ordered_json::object();
        for (const auto& file : artifacts_) digests[file] = sha256_file(path(file));
        stage["artifacts"] = digests;
        if (!manifest.contains("stages")) manifest["stages"] = ordered_json::object();
        manifest["stages"][name_] = stage;

        StageRun writer(config_, name_);
        writer.write(kManifestFile, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
        log << name_ << ": wrote " << artifacts_.size() << " artifact(s) to " << config_.run_dir.string() << '\n';
    }

private:
    static std::string timestamp() {
        if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
            try {
                return format_rfc3339(Timestamp{std::chrono::seconds{std::stoll(epoch)}});
            } catch (const std::exception&) {
                throw ConfigError("SOURCE_DATE_EPOCH is not an integer");
            }
        }
        return format_rfc3339(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
    }

    const Config& config_;
    std::string name_;
    std::map<std::string, std::string> inputs_;
    std::vector<std::string> artifacts_;
    ordered_json counts_ = ordered_json::object();
};

template <typename F>
void for_each_json_line(const fs::path& file, F&& f) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read " + file.string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            f(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(file.filename().string() + " line " + std::to_string(number) + ": " + e.what());
        }
    }
}

nlohmann::json read_json_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read " + file.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(file.filename().string() + ": " + e.what());
    }
}

std::vector<ingest::PostRecord> read_posts(const fs::path& file) {
    std::vector<ingest::PostRecord> posts;
    for_each_json_line(file, [&](const nlohmann::json& j) { posts.push_back(ingest::post_from_json(j)); });
    return posts;
}

ordered_json located_to_json(const LocatedRecord& r) {
    ordered_json j;
    j["post"] = ingest::to_json(r.post);
    j["region"] = r.geo.region ? ordered_json(*r.geo.region) : ordered_json(nullptr);
    j["source"] = geocode::to_string(r.geo.source);
    j["matched_name"] = r.geo.matched_name ? ordered_json(*r.geo.matched_name) : ordered_json(nullptr);
    return j;
}

LocatedRecord located_from_json(const nlohmann::json& j) {
    LocatedRecord r;
    r.post = ingest::post_from_json(j.at("post"));
    if (!j.at("region").is_null()) r.geo.region = j.at("region").get<std::string>();
    const auto source = geocode::parse_resolution_source(j.at("source").get<std::string>());
    if (!source) throw InputError("unknown geodata source in located record " + r.post.id);
    r.geo.source = *source;
    if (!j.at("matched_name").is_null()) r.geo.matched_name = j.at("matched_name").get<std::string>();
    return r;
}

std::vector<LocatedRecord> read_located(const fs::path& file) {
    std::vector<LocatedRecord> out;
    for_each_json_line(file, [&](const nlohmann::json& j) { out.push_back(located_from_json(j)); });
    return out;
}

/// A cleaned document together with the fields aggregation needs.
struct CleanedRow {
    textprep::CleanedDocument document;
    std::string author_id;
    Timestamp created_at{};
    std::string region;
};

ordered_json cleaned_to_json(const CleanedRow& row) {
    ordered_json j;
    j["id"] = row.document.post_id;
    j["author_id"] = row.author_id;
    j["created_at"] = format_rfc3339(row.created_at);
    j["region"] = row.region;
    j["tokens"] = row.document.tokens;
    j["raw_length"] = row.document.raw_length;
    j["clean_length"] = row.document.clean_length;
    return j;
}

std::vector<CleanedRow> read_cleaned(const fs::path& file) {
    std::vector<CleanedRow> rows;
    for_each_json_line(file, [&](const nlohmann::json& j) {
        CleanedRow row;
        row.document.post_id = j.at("id").get<std::string>();
        row.document.tokens = j.at("tokens").get<std::vector<std::string>>();
        row.document.raw_length = j.at("raw_length").get<std::size_t>();
        row.document.clean_length = j.at("clean_length").get<std::size_t>();
        row.author_id = j.at("author_id").get<std::string>();
        try {
            row.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw InputError(file.filename().string() + ": " + e.what());
        }
        row.region = j.at("region").get<std::string>();
        rows.push_back(std::move(row));
    });
    return rows;
}

std::vector<classify::Prediction> read_predictions(const fs::path& file) {
    std::vector<classify::Prediction> out;
    for_each_json_line(file, [&](const nlohmann::json& j) { out.push_back(classify::prediction_from_json(j)); });
    return out;
}

geocode::RegionTable region_table(const Config& config, StageRun& run) {
    if (!config.regions) return geocode::default_regions();
    return geocode::load_regions(run.input("regions", *config.regions));
}

textprep::CleanerConfig cleaner_config(const Config& config, StageRun& run) {
    textprep::CleanerConfig cleaner;
    cleaner.stopwords = textprep::TermSet::load(run.input("stopwords", config.stopwords));
    cleaner.keywords = textprep::TermSet::load(run.input("keywords", config.keywords));
    cleaner.min_chars = config.min_chars;
    return cleaner;
}

classify::BaselineConfig baseline_config(const Config& config) {
    classify::BaselineConfig b;
    b.hash_bits = config.hash_bits;
    b.l2 = config.l2;
    b.seed = config.seed;
    return b;
}

std::size_t count_of(const nlohmann::json& report, const char* key) {
    if (!report.contains(key)) throw InputError(std::string("report lacks '") + key + "'");
    return report.at(key).get<std::size_t>();
}

// ---------------------------------------------------------------------------

void stage_ingest(const Config& config, std::ostream& log) {
    StageRun run(config, "ingest");
    auto read = ingest::read_corpus(run.input("corpus", config.corpus));

    std::vector<ingest::PostRecord> in_window;
    std::size_t outside_window = 0;
    for (auto& record : read.records) {
        const bool before = config.window_start && record.created_at < *config.window_start;
        const bool after = config.window_end && record.created_at > *config.window_end;
        if (before || after) {
            ++outside_window;
        } else {
            in_window.push_back(std::move(record));
        }
    }

    const std::size_t total_in = in_window.size();
    auto repaired = ingest::repair_retweets(std::move(in_window), {config.min_prefix});

    std::vector<ingest::LineIssue> issues = read.malformed;
    for (auto issue : read.duplicates) {
        issue.message = "duplicate id: " + issue.message;
        issues.push_back(std::move(issue));
    }
    std::sort(issues.begin(), issues.end(), [](const auto& a, const auto& b) { return a.line < b.line; });

    run.write(kPosts, [&](std::ostream& out) { ingest::write_corpus(out, repaired.records); });
    run.write(kQuarantine, [&](std::ostream& out) { ingest::write_quarantine(out, issues); });

    ordered_json report;
    report["records_read"] = read.records.size();
    report["malformed_lines"] = read.malformed.size();
    report["duplicate_ids"] = read.duplicates.size();
    report["outside_date_window"] = outside_window;
    report["total_in"] = total_in;
    report["repaired_retweets"] = repaired.repaired;
    report["excluded_unresolvable_retweet"] = repaired.dropped_ids.size();
    report["retained"] = repaired.records.size();
    report["marker_forms"] = {{"handle_colon", repaired.handle_colon_markers},
                              {"colon_at", repaired.colon_at_markers}};
    report["dropped_ids"] = repaired.dropped_ids;
    ordered_json ambiguities = ordered_json::array();
    for (const auto& a : repaired.ambiguities) {
        ambiguities.push_back({{"retweet_id", a.retweet_id}, {"chosen_id", a.chosen_id}, {"tied_ids", a.tied_ids}});
    }
    report["ambiguous_matches"] = ambiguities;
    run.write_json(kIngestReport, report);

    run.counts() = {{"total_in", total_in},
                    {"retained", repaired.records.size()},
                    {"quarantined", issues.size()},
                    {"repaired", repaired.repaired}};
    run.commit(log);
}

void stage_geocode(const Config& config, std::ostream& log) {
    StageRun run(config, "geocode");
    auto posts = read_posts(run.require(kPosts, "ingest"));
    auto regions = region_table(config, run);
    const auto gazetteer = geocode::Gazetteer::load(run.input("gazetteer", config.gazetteer), regions);

    const std::size_t total_in = posts.size();
    auto geo = geocode_posts(std::move(posts), gazetteer);

    run.write(kLocated, [&](std::ostream& out) {
        for (const auto& r : geo.retained) out << located_to_json(r).dump() << '\n';
    });

    std::vector<geocode::LocatedPost> located;
    located.reserve(geo.retained.size());
    for (const auto& r : geo.retained) located.push_back({r.post.author_id, *r.geo.region});
    const auto counts = geocode::regional_counts(located, gazetteer.regions());
    run.write(kRegionalCounts, [&](std::ostream& out) {
        csv::write_row(out, {"region", "display_name", "posts", "users", "share", "population"});
        for (const auto& [code, region] : gazetteer.regions()) {
            const auto it = counts.find(code);
            const geocode::RegionCount c = it == counts.end() ? geocode::RegionCount{} : it->second;
            csv::write_row(out, {code, region.display_name, std::to_string(c.posts), std::to_string(c.users),
                                 csv::format_real(c.share),
                                 region.population ? std::to_string(*region.population) : std::string()});
        }
    });

    ordered_json report;
    report["total_in"] = total_in;
    report["excluded_no_geodata"] = geo.no_geodata;
    report["excluded_illegible_geodata"] = geo.illegible;
    report["retained"] = geo.retained.size();
    run.write_json(kGeocodeReport, report);

    run.counts() = report;
    run.commit(log);
}

void stage_clean(const Config& config, std::ostream& log) {
    StageRun run(config, "clean");
    const auto ingest_report = read_json_file(run.require(kIngestReport, "ingest"));
    const auto geocode_report = read_json_file(run.require(kGeocodeReport, "geocode"));
    auto located = read_located(run.require(kLocated, "geocode"));
    const auto cleaner = cleaner_config(config, run);

    auto cleaned = clean_posts(std::move(located), cleaner);

    ingest::FiltrationLedger ledger;
    ledger.total_in = count_of(ingest_report, "total_in");
    ledger.excluded_unresolvable_retweet = count_of(ingest_report, "excluded_unresolvable_retweet");
    ledger.excluded_no_geodata = count_of(geocode_report, "excluded_no_geodata");
    ledger.excluded_illegible_geodata = count_of(geocode_report, "excluded_illegible_geodata");
    ledger.excluded_too_short_after_clean = cleaned.too_short;
    ledger.retained = cleaned.retained.size();
    if (!ledger.conserved()) {
        throw InputError("filtration ledger does not balance; upstream artifacts are from different runs");
    }

    run.write(kCleaned, [&](std::ostream& out) {
        for (std::size_t i = 0; i < cleaned.retained.size(); ++i) {
            const auto& r = cleaned.retained[i];
            CleanedRow row{cleaned.documents[i], r.post.author_id, r.post.created_at, *r.geo.region};
            out << cleaned_to_json(row).dump() << '\n';
        }
    });
    run.write_json(kLedgerJson, ingest::to_json(ledger));
    run.write(kLedgerCsv, [&](std::ostream& out) {
        csv::write_row(out, {"step", "count"});
        csv::write_row(out, {"total_in", std::to_string(ledger.total_in)});
        csv::write_row(out, {"excluded_unresolvable_retweet", std::to_string(ledger.excluded_unresolvable_retweet)});
        csv::write_row(out, {"excluded_no_geodata", std::to_string(ledger.excluded_no_geodata)});
        csv::write_row(out, {"excluded_illegible_geodata", std::to_string(ledger.excluded_illegible_geodata)});
        csv::write_row(out, {"excluded_too_short_after_clean", std::to_string(ledger.excluded_too_short_after_clean)});
        csv::write_row(out, {"retained", std::to_string(ledger.retained)});
    });

    run.counts() = {{"total_in", cleaned.retained.size() + cleaned.too_short},
                    {"excluded_too_short_after_clean", cleaned.too_short},
                    {"retained", cleaned.retained.size()}};
    run.commit(log, ledger);
}

void stage_train(const Config& config, std::ostream& log) {
    StageRun run(config, "train");
    if (!config.annotations) throw ConfigError("train needs inputs.annotations");
    const auto raw = classify::load_annotations(run.input("annotations", *config.annotations));
    const auto cleaner = cleaner_config(config, run);
    const auto built = classify::build_annotated_set(raw, cleaner);
    const auto split = classify::stratified_split(built.set, config.validation_fraction, config.seed);

    classify::TrainingSummary summary;
    const auto model = classify::BaselineModel::train(split.train, baseline_config(config), &summary);

    std::vector<classify::Prediction> predictions;
    std::map<std::string, classify::Sentiment> gold;
    for (const auto& item : split.validation.items) {
        predictions.push_back(model.predict(item.document.post_id, item.document.tokens));
        gold[item.document.post_id] = item.label;
    }

    run.write(kModel, [&](std::ostream& out) { model.save(out); });

    ordered_json metrics;
    metrics["annotations"] = raw.size();
    metrics["dropped_too_short"] = built.dropped_too_short;
    metrics["train_size"] = split.train.items.size();
    metrics["validation_size"] = split.validation.items.size();
    metrics["seed"] = config.seed;
    metrics["optimizer"] = {{"iterations", summary.iterations},
                            {"objective", summary.objective},
                            {"gradient_norm", summary.gradient_norm},
                            {"converged", summary.converged}};
    if (!predictions.empty()) {
        metrics["ternary"] = classify::to_json(classify::evaluate(predictions, gold, classify::LabelScheme::ternary));
        metrics["binary"] = classify::to_json(classify::evaluate(predictions, gold, classify::LabelScheme::binary));
    } else {
        metrics["ternary"] = nullptr;
        metrics["binary"] = nullptr;
    }
    run.write_json(kTrainMetrics, metrics);

    run.counts() = {{"train", split.train.items.size()}, {"validation", split.validation.items.size()}};
    run.commit(log);
}

void stage_classify(const Config& config, std::ostream& log) {
    StageRun run(config, "classify");
    const auto rows = read_cleaned(run.require(kCleaned, "clean"));
    std::vector<textprep::CleanedDocument> documents;
    documents.reserve(rows.size());
    for (const auto& row : rows) documents.push_back(row.document);

    std::vector<classify::Prediction> predictions;
    if (config.backend == Backend::baseline) {
        std::ifstream in(run.require(kModel, "train"), std::ios::binary);
        const auto model = classify::BaselineModel::load(in);
        predictions = classify::classify_corpus(model, documents);
    } else {
        classify::AdapterClient client(classify::open_adapter(config.adapter),
                                       {config.adapter_timeout, config.adapter_batch_size});
        client.await_ready();
        predictions = classify::classify_corpus(client, documents);
        for (const auto& line : client.log()) log << "classify: " << line << '\n';
    }

    std::array<std::size_t, classify::kSentimentClasses> labels{};
    run.write(kPredictions, [&](std::ostream& out) {
        for (const auto& p : predictions) {
            ++labels[static_cast<std::size_t>(p.label)];
            out << classify::to_json(p).dump() << '\n';
        }
    });

    run.counts() = {{"predictions", predictions.size()},
                    {"negative", labels[0]},
                    {"neutral", labels[1]},
                    {"positive", labels[2]},
                    {"backend", config.backend == Backend::baseline ? "baseline" : "external"}};
    run.commit(log);
}

void stage_annotate_sample(const Config& config, std::ostream& log) {
    StageRun run(config, "annotate-sample");
    const auto predictions = read_predictions(run.require(kPredictions, "classify"));
    const auto located = read_located(run.require(kLocated, "geocode"));
    std::map<std::string, const std::string*> text;
    for (const auto& r : located) text[r.post.id] = &r.post.text;

    const auto sample = config.sample_mode == "random"
                            ? classify::random_sample(predictions, config.sample_size, config.seed)
                            : classify::lowest_margin_sample(predictions, config.sample_size);

    run.write(kSample, [&](std::ostream& out) {
        csv::write_row(out, {"id", "text", "predicted", "margin", "score_negative", "score_neutral", "score_positive",
                             "label"});
        for (const auto& p : sample) {
            const auto it = text.find(p.post_id);
            if (it == text.end()) throw InputError("prediction " + p.post_id + " has no located post; rerun geocode");
            csv::write_row(out, {p.post_id, *it->second, std::string(classify::to_string(p.label)),
                                 csv::format_real(classify::margin(p)), csv::format_real(p.scores[0]),
                                 csv::format_real(p.scores[1]), csv::format_real(p.scores[2]), ""});
        }
    });

    run.counts() = {{"sampled", sample.size()}, {"mode", config.sample_mode}};
    run.commit(log);
}

void stage_aggregate(const Config& config, std::ostream& log) {
    StageRun run(config, "aggregate");
    const auto rows = read_cleaned(run.require(kCleaned, "clean"));
    const auto predictions = read_predictions(run.require(kPredictions, "classify"));

    std::map<std::string, classify::Sentiment> label;
    for (const auto& p : predictions) label[p.post_id] = p.label;

    std::vector<analytics::AuthoredPost> authored;
    std::vector<analytics::SentimentPost> posts;
    for (const auto& row : rows) {
        const auto it = label.find(row.document.post_id);
        if (it == label.end()) {
            throw StageOrderError("stage order violation: post " + row.document.post_id +
                                  " has no prediction; run 'classify' first");
        }
        authored.push_back({row.author_id, row.created_at});
        posts.push_back({row.document.post_id, row.author_id, row.created_at, row.region,
                         classify::merge_to_binary(it->second)});
    }
    if (posts.empty()) throw InputError("no classified posts to aggregate");

    const auto yearly_users = analytics::yearly_user_stats(authored, config.window_end);
    run.write(kYearlyUsers, [&](std::ostream& out) { analytics::write_yearly_user_stats(out, yearly_users); });
    run.write(kUserFrequency, [&](std::ostream& out) {
        analytics::write_user_frequency(out, analytics::user_frequency_distribution(authored));
    });

    const auto yearly = analytics::sentiment_series(posts, analytics::Granularity::year);
    const auto monthly = analytics::sentiment_series(posts, analytics::Granularity::month);
    run.write(kSentimentYearly, [&](std::ostream& out) { analytics::write_series(out, yearly); });
    run.write(kSentimentYearlyLong, [&](std::ostream& out) { analytics::write_series_long(out, yearly); });
    run.write(kSentimentMonthly, [&](std::ostream& out) { analytics::write_series(out, monthly); });
    run.write(kSentimentMonthlyLong, [&](std::ostream& out) { analytics::write_series_long(out, monthly); });

    const auto trends = analytics::normalized_regional_trends(monthly);
    for (const auto& warning : trends.warnings) log << "aggregate: " << warning << '\n';
    run.write(kNormalized, [&](std::ostream& out) { analytics::write_normalized(out, trends); });

    // Plain token frequencies per month; ties broken by token.
    std::map<std::string, std::map<std::string, std::size_t>> tokens;
    for (const auto& row : rows) {
        auto& bucket = tokens[analytics::Period::of(row.created_at, analytics::Granularity::month).to_string()];
        for (const auto& token : row.document.tokens) ++bucket[token];
    }
    run.write(kTokenCounts, [&](std::ostream& out) {
        csv::write_row(out, {"period", "token", "count"});
        for (const auto& [period, counts] : tokens) {
            std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
            std::stable_sort(sorted.begin(), sorted.end(),
                             [](const auto& a, const auto& b) { return a.second > b.second; });
            for (const auto& [token, count] : sorted) csv::write_row(out, {period, token, std::to_string(count)});
        }
    });

    std::size_t compared = 0;
    if (config.survey) {
        const auto survey = analytics::read_survey(run.input("survey", *config.survey));
        const auto delta = analytics::survey_delta(yearly, survey);
        compared = delta.comparisons.size();
        run.write(kSurveyComparison, [&](std::ostream& out) { analytics::write_survey_comparison(out, delta.comparisons); });
        run.write(kSurveyCoverage, [&](std::ostream& out) { analytics::write_survey_coverage(out, delta.coverage); });
    } else {
        run.remove(kSurveyComparison);
        run.remove(kSurveyCoverage);
    }

    run.counts() = {{"posts", posts.size()},
                    {"years", yearly_users.size()},
                    {"survey_comparisons", compared}};
    run.commit(log);
}

/// Most frequent region of each author; ties go to the smaller code.
std::map<std::string, std::string> author_regions(const std::vector<LocatedRecord>& located) {
    std::map<std::string, std::map<std::string, std::size_t>> tally;
    for (const auto& r : located) ++tally[r.post.author_id][*r.geo.region];
    std::map<std::string, std::string> out;
    for (const auto& [author, counts] : tally) {
        const auto best = std::max_element(counts.begin(), counts.end(),
                                           [](const auto& a, const auto& b) { return a.second < b.second; });
        out[author] = best->first;
    }
    return out;
}

void stage_network(const Config& config, std::ostream& log) {
    StageRun run(config, "network");
    const auto posts = read_posts(run.require(kPosts, "ingest"));
    const auto located = read_located(run.require(kLocated, "geocode"));
    const auto network = netstats::build_network(posts, author_regions(located));

    ordered_json summary;
    summary["nodes"] = network.nodes.size();
    summary["edges"] = network.edges.size();

    netstats::CommunityResult communities;
    if (!network.edges.empty()) {
        netstats::LouvainOptions options;
        options.resolution = config.resolution;
        if (config.shuffle_louvain) options.shuffle_seed = config.seed;
        communities = netstats::detect_communities(network, options);
    }
    summary["communities"] = communities.count;
    summary["modularity"] = communities.modularity;

    run.write(kGraphml, [&](std::ostream& out) { netstats::write_graphml(out, network, communities.community); });
    run.write(kCommunities, [&](std::ostream& out) {
        csv::write_row(out, {"author_id", "region", "community"});
        for (const auto& [author, community] : communities.community) {
            const auto region = network.region.find(author);
            const bool known = region != network.region.end() && region->second;
            csv::write_row(out, {author, known ? *region->second : std::string(), std::to_string(community)});
        }
    });

    const auto table = netstats::region_community_table(network.region, communities.community, config.min_community_size);
    run.write(kAssociation, [&](std::ostream& out) { netstats::write_association_table(out, table); });

    std::optional<netstats::NetworkAssociation> association;
    if (table.rows() >= 2 && table.columns() >= 2) association = netstats::associate(table);
    run.write(kAssociationSummary, [&](std::ostream& out) {
        if (association) {
            netstats::write_association_summary(out, *association);
        } else {
            csv::write_row(out, {"chi_square", "df", "n", "p", "v"});
        }
    });
    if (association) {
        summary["association"] = {{"chi_square", association->test.chi_square},
                                  {"df", association->test.degrees_of_freedom},
                                  {"n", association->n},
                                  {"p", association->test.p_value},
                                  {"v", association->cramers_v}};
    } else {
        summary["association"] = nullptr;
        log << "network: region x community table too small for a chi-square test\n";
    }
    run.write_json(kNetworkSummary, summary);

    run.counts() = {{"nodes", network.nodes.size()},
                    {"edges", network.edges.size()},
                    {"communities", communities.count}};
    run.commit(log);
}

// ---------------------------------------------------------------------------
// report

std::vector<std::map<std::string, std::string>> read_csv_rows(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read " + file.string());
    csv::Reader reader(in);
    const auto header = reader.next();
    std::vector<std::map<std::string, std::string>> rows;
    if (!header) return rows;
    while (auto row = reader.next()) {
        if (row->size() == 1 && row->front().empty()) continue;
        std::map<std::string, std::string> named;
        for (std::size_t i = 0; i < header->size() && i < row->size(); ++i) named[(*header)[i]] = (*row)[i];
        rows.push_back(std::move(named));
    }
    return rows;
}

std::string fixed2(const std::string& value) {
    if (value.empty()) return "n/a";
    return csv::format_fixed2(std::stod(value));
}

std::string fixed2(const nlohmann::json& value) {
    if (value.is_null()) return "n/a";
    return csv::format_fixed2(value.get<double>());
}

void table_row(std::ostream& out, const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& cell : cells) out << ' ' << cell << " |";
    out << '\n';
}

void table_header(std::ostream& out, const std::vector<std::string>& cells) {
    table_row(out, cells);
    out << '|';
    for (std::size_t i = 0; i < cells.size(); ++i) out << "---|";
    out << '\n';
}

void stage_report(const Config& config, std::ostream& log) {
    StageRun run(config, "report");
    const auto ledger = ingest::ledger_from_json(read_json_file(run.require(kLedgerJson, "clean")));
    const auto users = read_csv_rows(run.require(kYearlyUsers, "aggregate"));
    const auto sentiment = read_csv_rows(run.require(kSentimentYearly, "aggregate"));
    const auto regional = read_csv_rows(run.require(kRegionalCounts, "geocode"));

    std::ostringstream md;
    md << "# Run report\n\n";
    md << "Seed " << config.seed << ". Shares and ratios are rounded to two decimals; the CSV artifacts carry full "
          "precision.\n\n";

    md << "## Filtration\n\n";
    table_header(md, {"step", "posts"});
    table_row(md, {"collected", std::to_string(ledger.total_in)});
    table_row(md, {"unresolvable truncated retweets", std::to_string(ledger.excluded_unresolvable_retweet)});
    table_row(md, {"no geodata", std::to_string(ledger.excluded_no_geodata)});
    table_row(md, {"illegible geodata", std::to_string(ledger.excluded_illegible_geodata)});
    table_row(md, {"too short after cleaning", std::to_string(ledger.excluded_too_short_after_clean)});
    table_row(md, {"retained", std::to_string(ledger.retained)});
    md << '\n';

    md << "## Regions\n\n";
    table_header(md, {"region", "name", "posts", "users", "share"});
    for (const auto& r : regional) {
        table_row(md, {r.at("region"), r.at("display_name"), r.at("posts"), r.at("users"), fixed2(r.at("share"))});
    }
    md << '\n';

    md << "## Users per year\n\n";
    table_header(md, {"year", "posts", "new users", "active users", "share new", "posts per user"});
    for (const auto& r : users) {
        std::string year = r.at("year");
        if (r.at("partial_year") == "true") year += " (partial)";
        table_row(md, {year, r.at("tweet_count"), r.at("new_users"), r.at("active_users"), fixed2(r.at("share_new")),
                       fixed2(r.at("tweets_per_user"))});
    }
    md << '\n';

    md << "## Negative share per year, all regions\n\n";
    table_header(md, {"year", "negative", "non-negative", "share negative"});
    for (const auto& r : sentiment) {
        if (r.at("region") != analytics::kAllRegions) continue;
        table_row(md, {r.at("period"), r.at("negative_count"), r.at("non_negative_count"), fixed2(r.at("share_negative"))});
    }
    md << '\n';

    if (fs::exists(run.path(kTrainMetrics))) {
        const auto metrics = read_json_file(run.path(kTrainMetrics));
        md << "## Classifier validation\n\n";
        table_header(md, {"scheme", "macro F1", "accuracy"});
        for (const char* scheme : {"ternary", "binary"}) {
            const auto& m = metrics.at(scheme);
            if (m.is_null()) continue;
            table_row(md, {scheme, fixed2(m.at("macro_f1")), fixed2(m.at("accuracy"))});
        }
        md << '\n';
    }

    if (fs::exists(run.path(kNetworkSummary))) {
        const auto net = read_json_file(run.path(kNetworkSummary));
        md << "## Interaction network\n\n";
        table_header(md, {"measure", "value"});
        table_row(md, {"nodes", std::to_string(net.at("nodes").get<std::size_t>())});
        table_row(md, {"edges", std::to_string(net.at("edges").get<std::size_t>())});
        table_row(md, {"communities", std::to_string(net.at("communities").get<std::size_t>())});
        table_row(md, {"modularity", fixed2(net.at("modularity"))});
        const auto& a = net.at("association");
        if (!a.is_null()) {
            table_row(md, {"chi-square", fixed2(a.at("chi_square"))});
            table_row(md, {"df", std::to_string(a.at("df").get<std::size_t>())});
            table_row(md, {"n", fixed2(a.at("n"))});
            table_row(md, {"p", fixed2(a.at("p"))});
            table_row(md, {"Cramér's V", fixed2(a.at("v"))});
        }
        md << '\n';
    }

    run.write(kReport, [&](std::ostream& out) { out << md.str(); });
    run.counts() = {{"sections", fs::exists(run.path(kNetworkSummary)) ? 6 : 5}};
    run.commit(log);
}

using StageFn = void (*)(const Config&, std::ostream&);

const std::map<std::string, StageFn, std::less<>>& stage_table() {
    static const std::map<std::string, StageFn, std::less<>> table{
        {"ingest", stage_ingest},       {"geocode", stage_geocode},
        {"clean", stage_clean},         {"train", stage_train},
        {"classify", stage_classify},   {"annotate-sample", stage_annotate_sample},
        {"aggregate", stage_aggregate}, {"network", stage_network},
        {"report", stage_report},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& stage_names() {
    static const std::vector<std::string> names{"ingest",          "geocode",   "clean",   "train", "classify",
                                                "annotate-sample", "aggregate", "network", "report"};
    return names;
}

void run_stage(std::string_view stage, const Config& config, std::ostream& log) {
    const auto& table = stage_table();
    const auto it = table.find(stage);
    if (it == table.end()) throw ConfigError("unknown stage '" + std::string(stage) + "'");
    try {
        it->second(config, log);
    } catch (const Error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        // Contract violations from the libraries surface as bad input here.
        throw InputError(std::string(stage) + ": " + e.what());
    } catch (const fs::filesystem_error& e) {
        throw InputError(std::string(stage) + ": " + e.what());
    }
}

void run_all(const Config& config, std::ostream& log) {
    for (const auto& stage : stage_names()) {
        if (stage == "train" && config.backend == Backend::external) continue;
        if (stage == "train" && !config.annotations) continue;
        run_stage(stage, config, log);
    }
}

void run_fetch(const Config& config, std::ostream& log) {
    const auto records = ingest::fetch_posts(config.fetch);
    if (!config.corpus.parent_path().empty()) fs::create_directories(config.corpus.parent_path());
    std::ofstream out(config.corpus, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + config.corpus.string());
    ingest::write_corpus(out, records);
    log << "fetch: wrote " << records.size() << " post(s) to " << config.corpus.string() << '\n';
}

std::string config_hash(const Config& config) { return sha256_hex(config.to_json().dump()); }

nlohmann::ordered_json read_manifest(const fs::path& run_dir) {
    const auto file = run_dir / kManifestFile;
    if (!fs::exists(file)) return ordered_json::object();
    std::ifstream in(file, std::ios::binary);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest.json is not valid JSON: " + std::string(e.what()));
    }
}

}  // namespace geosent::pipeline
