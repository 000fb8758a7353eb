#include "geosent/core/digest.hpp"
#include "geosent/core/error.hpp"
#include "geosent/pipeline/config.hpp"
#include "geosent/pipeline/stages.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

using namespace geosent;
using namespace geosent::pipeline;
using geosent::testing::TempDir;
using geosent::testing::read_file;

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string command = std::string(GEOSENT_CLI_PATH) + " -c " + DEMO_CONFIG_PATH + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::vector<std::string> kArtifacts{
    "posts.jsonl", "quarantine.jsonl", "ingest_report.json", "located.jsonl", "regional_counts.csv",
    "cleaned.jsonl", "filtration_ledger.json", "filtration_ledger.csv", "model.bin", "train_metrics.json",
    "predictions.jsonl", "annotation_sample.csv", "yearly_user_stats.csv", "user_frequency.csv",
    "sentiment_yearly.csv", "sentiment_monthly.csv", "normalized_trends.csv", "survey_comparison.csv",
    "network.graphml", "communities.csv", "association.csv", "association_summary.csv", "report.md",
    "manifest.json"};

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().filename() != kManifestFile) out[entry.path().filename().string()] = read_file(entry.path());
    return out;
}

}  // namespace

TEST_CASE("cli: demo run end to end") {
    TempDir run("cli-demo");
    REQUIRE(run_cli("--run-dir " + run.path().string() + " all") == 0);
    for (const auto& name : kArtifacts) CHECK_MESSAGE(fs::exists(run / name), name);

    const auto manifest = read_manifest(run.path());
    CHECK(manifest.contains("config_hash"));
    for (const auto& stage : stage_names()) CHECK_MESSAGE(manifest["stages"].contains(stage), stage);
    for (const auto& [file, digest] : manifest["stages"]["aggregate"]["artifacts"].items())
        CHECK(digest.get<std::string>() == sha256_hex(read_file(run / file)));

    const auto ledger = nlohmann::json::parse(read_file(run / "filtration_ledger.json"));
    const auto excluded = ledger["excluded_no_geodata"].get<std::size_t>() +
                          ledger["excluded_illegible_geodata"].get<std::size_t>() +
                          ledger["excluded_unresolvable_retweet"].get<std::size_t>() +
                          ledger["excluded_too_short_after_clean"].get<std::size_t>();
    CHECK(ledger["total_in"].get<std::size_t>() == excluded + ledger["retained"].get<std::size_t>());
}

TEST_CASE("cli: stage order and usage errors") {
    TempDir run("cli-order");
    CHECK(run_cli("--run-dir " + run.path().string() + " aggregate") == 4);
    CHECK(run_cli("--run-dir " + run.path().string() + " ingest") == 0);
    CHECK(run_cli("--run-dir " + run.path().string() + " classify") == 4);
    CHECK(run_cli("--run-dir " + run.path().string() + " --backend quantum ingest") == 2);
    CHECK(run_cli("--run-dir " + run.path().string() + " --backend external --adapter nowhere ingest geocode clean classify") != 0);
}

TEST_CASE("cli: repeated runs are byte-identical apart from the manifest") {
    TempDir a("cli-det-a"), b("cli-det-b");
    REQUIRE(run_cli("--run-dir " + a.path().string() + " all") == 0);
    REQUIRE(run_cli("--run-dir " + b.path().string() + " all") == 0);
    const auto sa = snapshot(a.path());
    const auto sb = snapshot(b.path());
    CHECK(sa.size() == sb.size());
    for (const auto& [name, content] : sa) {
        const auto it = sb.find(name);
        REQUIRE_MESSAGE(it != sb.end(), name);
        CHECK_MESSAGE(it->second == content, name);
    }
}

TEST_CASE("cli: external backend through the adapter protocol") {
    TempDir run("cli-external");
    const std::string adapter = std::string("'exec:") + FAKE_ADAPTER_PATH + " lexical'";
    REQUIRE(run_cli("--run-dir " + run.path().string() + " --backend external --adapter " + adapter + " all") == 0);
    CHECK(fs::exists(run / "predictions.jsonl"));
    CHECK_FALSE(fs::exists(run / "model.bin"));
    CHECK(fs::exists(run / "report.md"));
}

TEST_CASE("run_stage: library entry point") {
    TempDir run("stage-lib");
    auto config = load_config(DEMO_CONFIG_PATH);
    config.run_dir = run.path();
    std::ostringstream log;
    CHECK_THROWS_AS(run_stage("geocode", config, log), StageOrderError);
    CHECK_THROWS_AS(run_stage("nonsense", config, log), ConfigError);
    run_stage("ingest", config, log);
    run_stage("geocode", config, log);
    const auto manifest = read_manifest(run.path());
    CHECK(manifest["stages"].contains("geocode"));
    CHECK(manifest["config_hash"] == config_hash(config));
}
