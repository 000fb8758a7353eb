#include "geosent/core/error.hpp"
#include "geosent/pipeline/config.hpp"
#include "geosent/pipeline/stages.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace geosent;
using namespace geosent::pipeline;
using geosent::testing::TempDir;
using geosent::testing::write_file;

namespace {

const char* kMinimal = R"({
  // comments are allowed
  "inputs": {"corpus": "c.jsonl", "gazetteer": "g.csv", "stopwords": "s.txt", "keywords": "k.txt"}
})";

}  // namespace

TEST_CASE("load_config: defaults and path resolution") {
    TempDir dir("config");
    write_file(dir / "config.json", kMinimal);
    const auto c = load_config(dir / "config.json");
    CHECK(c.corpus == dir / "c.jsonl");
    CHECK(c.run_dir == dir / "run");
    CHECK(c.seed == 20221001);
    CHECK(c.backend == Backend::baseline);
    CHECK(c.min_prefix == 20);
    CHECK(c.min_community_size == 5);
    CHECK_FALSE(c.annotations.has_value());
    CHECK_FALSE(c.window_start.has_value());
}

TEST_CASE("load_config: rejects bad input") {
    TempDir dir("config-bad");
    const auto check_rejects = [&](const std::string& text) {
        write_file(dir / "config.json", text);
        CHECK_THROWS_AS(load_config(dir / "config.json"), ConfigError);
    };
    check_rejects("{");
    check_rejects(R"({"inputs": {"corpus": "c"}})");
    check_rejects(R"({"inputs": {"corpus": "c", "gazetteer": "g", "stopwords": "s", "keywords": "k"}, "bogus": 1})");
    check_rejects(R"({"inputs": {"corpus": "c", "gazetteer": "g", "stopwords": "s", "keywords": "k"}, "seed": "x"})");
    check_rejects(R"({"inputs": {"corpus": "c", "gazetteer": "g", "stopwords": "s", "keywords": "k"},
                      "classifier": {"backend": "gpt"}})");
    check_rejects(R"({"inputs": {"corpus": "c", "gazetteer": "g", "stopwords": "s", "keywords": "k"},
                      "date_window": {"start": "yesterday"}})");
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("config hash follows the effective configuration") {
    TempDir dir("config-hash");
    write_file(dir / "config.json", kMinimal);
    auto a = load_config(dir / "config.json");
    auto b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 64);
    b.seed = 1;
    CHECK(config_hash(a) != config_hash(b));
}
