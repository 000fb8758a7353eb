#include "geosent/pipeline/config.hpp"

#include "geosent/core/error.hpp"

#include <fstream>
#include <set>

namespace geosent::pipeline {

namespace {

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + "." + key + "'");
    }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    try {
        out = it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config key '" + where + "." + key + "' has the wrong type");
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::optional<std::filesystem::path> optional_path(const nlohmann::json& j, const char* key,
                                                   const std::filesystem::path& base) {
    std::string value;
    read(j, key, value, "inputs");
    if (value.empty()) return std::nullopt;
    return resolve(base, value);
}

std::filesystem::path required_path(const nlohmann::json& j, const char* key, const std::filesystem::path& base) {
    auto p = optional_path(j, key, base);
    if (!p) throw ConfigError(std::string("config needs inputs.") + key);
    return *p;
}

std::optional<Timestamp> optional_time(const nlohmann::json& j, const char* key) {
    std::string value;
    read(j, key, value, "date_window");
    if (value.empty()) return std::nullopt;
    try {
        return parse_rfc3339(value);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("date_window.") + key + ": " + e.what());
    }
}

}  // namespace

Config config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    check_keys(j, {"run_dir", "inputs", "seed", "date_window", "classifier", "textprep", "ingest", "network", "sample",
                   "fetch"},
               "config");
    Config c;
    std::string run_dir = "run";
    read(j, "run_dir", run_dir, "config");
    c.run_dir = resolve(base_dir, run_dir);
    read(j, "seed", c.seed, "config");

    const auto inputs = j.value("inputs", nlohmann::json::object());
    check_keys(inputs, {"corpus", "gazetteer", "regions", "stopwords", "keywords", "annotations", "survey"}, "inputs");
    c.corpus = required_path(inputs, "corpus", base_dir);
    c.gazetteer = required_path(inputs, "gazetteer", base_dir);
    c.regions = optional_path(inputs, "regions", base_dir);
    c.stopwords = required_path(inputs, "stopwords", base_dir);
    c.keywords = required_path(inputs, "keywords", base_dir);
    c.annotations = optional_path(inputs, "annotations", base_dir);
    c.survey = optional_path(inputs, "survey", base_dir);

    const auto window = j.value("date_window", nlohmann::json::object());
    check_keys(window, {"start", "end"}, "date_window");
    c.window_start = optional_time(window, "start");
    c.window_end = optional_time(window, "end");
    if (c.window_start && c.window_end && *c.window_end < *c.window_start) {
        throw ConfigError("date_window.end precedes date_window.start");
    }

    const auto classifier = j.value("classifier", nlohmann::json::object());
    check_keys(classifier, {"backend", "adapter", "timeout_ms", "batch_size", "hash_bits", "l2", "validation_fraction"},
               "classifier");
    std::string backend = "baseline";
    read(classifier, "backend", backend, "classifier");
    if (backend == "baseline") {
        c.backend = Backend::baseline;
    } else if (backend == "external") {
        c.backend = Backend::external;
    } else {
        throw ConfigError("classifier.backend must be 'baseline' or 'external'");
    }
    read(classifier, "adapter", c.adapter, "classifier");
    long long timeout_ms = c.adapter_timeout.count();
    read(classifier, "timeout_ms", timeout_ms, "classifier");
    if (timeout_ms <= 0) throw ConfigError("classifier.timeout_ms must be positive");
    c.adapter_timeout = std::chrono::milliseconds(timeout_ms);
    read(classifier, "batch_size", c.adapter_batch_size, "classifier");
    read(classifier, "hash_bits", c.hash_bits, "classifier");
    read(classifier, "l2", c.l2, "classifier");
    read(classifier, "validation_fraction", c.validation_fraction, "classifier");
    if (c.hash_bits == 0 || c.hash_bits > 24) throw ConfigError("classifier.hash_bits must be in 1..24");
    if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0)) {
        throw ConfigError("classifier.validation_fraction must be in (0, 1)");
    }
    if (c.backend == Backend::external && c.adapter.empty()) throw ConfigError("external backend needs classifier.adapter");

    const auto textprep = j.value("textprep", nlohmann::json::object());
    check_keys(textprep, {"min_chars"}, "textprep");
    read(textprep, "min_chars", c.min_chars, "textprep");

    const auto ingest = j.value("ingest", nlohmann::json::object());
    check_keys(ingest, {"min_prefix"}, "ingest");
    read(ingest, "min_prefix", c.min_prefix, "ingest");

    const auto network = j.value("network", nlohmann::json::object());
    check_keys(network, {"resolution", "min_community_size", "shuffle"}, "network");
    read(network, "resolution", c.resolution, "network");
    read(network, "min_community_size", c.min_community_size, "network");
    read(network, "shuffle", c.shuffle_louvain, "network");
    if (!(c.resolution > 0.0)) throw ConfigError("network.resolution must be positive");

    const auto sample = j.value("sample", nlohmann::json::object());
    check_keys(sample, {"k", "mode"}, "sample");
    read(sample, "k", c.sample_size, "sample");
    read(sample, "mode", c.sample_mode, "sample");
    if (c.sample_mode != "lowest_margin" && c.sample_mode != "random") {
        throw ConfigError("sample.mode must be 'lowest_margin' or 'random'");
    }

    const auto fetch = j.value("fetch", nlohmann::json::object());
    check_keys(fetch, {"enabled", "base_url", "path", "bearer_token", "query", "start_time", "end_time", "max_results",
                       "max_pages"},
               "fetch");
    read(fetch, "enabled", c.fetch.enabled, "fetch");
    read(fetch, "base_url", c.fetch.base_url, "fetch");
    read(fetch, "path", c.fetch.path, "fetch");
    read(fetch, "bearer_token", c.fetch.bearer_token, "fetch");
    read(fetch, "query", c.fetch.query, "fetch");
    std::string start, end;
    read(fetch, "start_time", start, "fetch");
    read(fetch, "end_time", end, "fetch");
    if (!start.empty()) c.fetch.start_time = start;
    if (!end.empty()) c.fetch.end_time = end;
    read(fetch, "max_results", c.fetch.max_results, "fetch");
    read(fetch, "max_pages", c.fetch.max_pages, "fetch");
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const std::exception& e) {
        throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

nlohmann::ordered_json Config::to_json() const {
    nlohmann::ordered_json j;
    const auto opt = [](const std::optional<std::filesystem::path>& p) {
        return p ? nlohmann::ordered_json(p->filename().string()) : nlohmann::ordered_json(nullptr);
    };
    // File names only: the digest must not depend on where the run lives.
    j["inputs"] = {{"corpus", corpus.filename().string()},
                   {"gazetteer", gazetteer.filename().string()},
                   {"regions", opt(regions)},
                   {"stopwords", stopwords.filename().string()},
                   {"keywords", keywords.filename().string()},
                   {"annotations", opt(annotations)},
                   {"survey", opt(survey)}};
    j["seed"] = seed;
    j["date_window"] = {{"start", window_start ? nlohmann::ordered_json(format_rfc3339(*window_start)) : nullptr},
                        {"end", window_end ? nlohmann::ordered_json(format_rfc3339(*window_end)) : nullptr}};
    j["classifier"] = {{"backend", backend == Backend::baseline ? "baseline" : "external"},
                       {"adapter", adapter},
                       {"timeout_ms", adapter_timeout.count()},
                       {"batch_size", adapter_batch_size},
                       {"hash_bits", hash_bits},
                       {"l2", l2},
                       {"validation_fraction", validation_fraction}};
    j["textprep"] = {{"min_chars", min_chars}};
    j["ingest"] = {{"min_prefix", min_prefix}};
    j["network"] = {{"resolution", resolution}, {"min_community_size", min_community_size}, {"shuffle", shuffle_louvain}};
    j["sample"] = {{"k", sample_size}, {"mode", sample_mode}};
    return j;
}

}  // namespace geosent::pipeline
