#include "geosent/core/error.hpp"
#include "geosent/ingest/fetch_client.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <thread>

using namespace geosent;
using namespace geosent::ingest;

namespace {

nlohmann::json page(const std::string& id, std::optional<std::string> next) {
    nlohmann::json j = {
        {"data",
         {{{"id", id},
           {"author_id", "42"},
           {"created_at", "2020-06-01T12:00:00.000Z"},
           {"text", "vindkraft " + id},
           {"public_metrics", {{"like_count", 3}, {"retweet_count", 1}}},
           {"geo", {{"place_id", "p1"}}},
           {"referenced_tweets", {{{"type", "quoted"}, {"id", "9"}}}}},
          {{"id", id + "x"}, {"author_id", "missing"}, {"created_at", "2020-06-01T12:00:00Z"}, {"text", "t"}}}},
        {"includes",
         {{"users", {{{"id", "42"}, {"username", "nora"}, {"location", "Bergen"}}}},
          {"places", {{{"id", "p1"}, {"full_name", "Bergen, Norge"}}}}}},
        {"meta", nlohmann::json::object()}};
    if (next) j["meta"]["next_token"] = *next;
    return j;
}

}  // namespace

TEST_CASE("map_search_response") {
    const auto p = map_search_response(page("1", "tok"));
    REQUIRE(p.records.size() == 1);
    const auto& r = p.records[0];
    CHECK(r.author_handle == "nora");
    CHECK(r.user_location == "Bergen");
    CHECK(r.post_geo == "Bergen, Norge");
    CHECK(r.kind == PostKind::quote);
    CHECK(r.like_count == 3);
    CHECK(p.next_token == "tok");
    REQUIRE(p.skipped.size() == 1);
    CHECK(p.skipped[0].rfind("1x:", 0) == 0);
    CHECK(map_search_response(nlohmann::json::object()).records.empty());
}

TEST_CASE("fetch_posts follows pagination against a local server") {
    httplib::Server server;
    std::vector<std::string> tokens;
    std::string auth;
    server.Get("/2/tweets/search/all", [&](const httplib::Request& req, httplib::Response& res) {
        auth = req.get_header_value("Authorization");
        const auto token = req.has_param("next_token") ? req.get_param_value("next_token") : std::string();
        tokens.push_back(token);
        if (token.empty()) res.set_content(page("1", "second").dump(), "application/json");
        else res.set_content(page("2", std::nullopt).dump(), "application/json");
    });
    server.Get("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    FetchConfig config;
    config.enabled = true;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.bearer_token = "secret";
    const auto posts = fetch_posts(config);
    REQUIRE(posts.size() == 2);
    CHECK(posts[1].id == "2");
    CHECK(tokens == std::vector<std::string>{"", "second"});
    CHECK(auth == "Bearer secret");

    config.path = "/broken";
    CHECK_THROWS_AS(fetch_posts(config), InputError);
    config.enabled = false;
    CHECK_THROWS_AS(fetch_posts(config), ConfigError);

    server.stop();
    worker.join();
}
