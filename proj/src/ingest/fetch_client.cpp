#include "geosent/ingest/fetch_client.hpp"

#include "geosent/core/error.hpp"

#include <httplib.h>

#include <map>

namespace geosent::ingest {

std::string default_search_query() {
    return "(havvind OR vindkraft OR vindmølle OR vindmøller OR vindmøllene OR vindturbiner OR vindenergi) lang:no";
}

namespace {

std::string string_or_empty(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    return it != j.end() && it->is_string() ? it->get<std::string>() : std::string();
}

}  // namespace

FetchPage map_search_response(const nlohmann::json& response) {
    FetchPage page;
    std::map<std::string, std::pair<std::string, std::optional<std::string>>> users;
    std::map<std::string, std::string> places;
    if (const auto inc = response.find("includes"); inc != response.end()) {
        for (const auto& u : inc->value("users", nlohmann::json::array())) {
            std::optional<std::string> location;
            if (u.contains("location") && u["location"].is_string()) location = u["location"].get<std::string>();
            users[string_or_empty(u, "id")] = {string_or_empty(u, "username"), location};
        }
        for (const auto& p : inc->value("places", nlohmann::json::array())) {
            places[string_or_empty(p, "id")] = string_or_empty(p, "full_name");
        }
    }

    for (const auto& t : response.value("data", nlohmann::json::array())) {
        const std::string id = string_or_empty(t, "id");
        try {
            PostRecord r;
            r.id = id;
            r.author_id = string_or_empty(t, "author_id");
            const auto user = users.find(r.author_id);
            if (user == users.end()) throw std::invalid_argument("author not in includes.users");
            r.author_handle = user->second.first;
            r.user_location = user->second.second;
            r.created_at = parse_rfc3339(string_or_empty(t, "created_at"));
            r.text = string_or_empty(t, "text");
            if (const auto m = t.find("public_metrics"); m != t.end()) {
                r.like_count = m->value("like_count", std::uint64_t{0});
                r.retweet_count = m->value("retweet_count", std::uint64_t{0});
            }
            if (const auto geo = t.find("geo"); geo != t.end() && geo->contains("place_id")) {
                if (const auto place = places.find(string_or_empty(*geo, "place_id")); place != places.end()) {
                    r.post_geo = place->second;
                }
            }
            for (const auto& ref : t.value("referenced_tweets", nlohmann::json::array())) {
                const std::string type = string_or_empty(ref, "type");
                if (type == "retweeted") r.kind = PostKind::retweet;
                if (type == "quoted" && r.kind != PostKind::retweet) r.kind = PostKind::quote;
            }
            // Round-trip through the validating parser so fetched records obey
            // the same rules as archived ones.
            page.records.push_back(post_from_json(to_json(r)));
        } catch (const std::exception& e) {
            page.skipped.push_back(id + ": " + e.what());
        }
    }
    if (const auto meta = response.find("meta"); meta != response.end()) {
        if (const auto next = meta->find("next_token"); next != meta->end() && next->is_string()) {
            page.next_token = next->get<std::string>();
        }
    }
    return page;
}

std::vector<PostRecord> fetch_posts(const FetchConfig& config) {
    if (!config.enabled) throw ConfigError("fetch client is disabled");
    if (config.base_url.empty()) throw ConfigError("fetch client needs a base_url");

    httplib::Client client(config.base_url);
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    const httplib::Headers headers{{"Authorization", "Bearer " + config.bearer_token}};

    std::vector<PostRecord> out;
    std::optional<std::string> next_token;
    for (std::size_t page_no = 0; page_no < config.max_pages; ++page_no) {
        httplib::Params params{
            {"query", config.query},
            {"max_results", std::to_string(config.max_results)},
            {"tweet.fields", "author_id,created_at,geo,public_metrics,referenced_tweets"},
            {"expansions", "author_id,geo.place_id"},
            {"user.fields", "location,username"},
            {"place.fields", "full_name"},
        };
        if (config.start_time) params.emplace("start_time", *config.start_time);
        if (config.end_time) params.emplace("end_time", *config.end_time);
        if (next_token) params.emplace("next_token", *next_token);

        const auto res = client.Get(config.path, params, headers);
        if (!res) throw InputError("fetch failed: " + httplib::to_string(res.error()));
        if (res->status != 200) throw InputError("fetch failed with HTTP " + std::to_string(res->status));
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(res->body);
        } catch (const std::exception& e) {
            throw InputError(std::string("fetch returned invalid JSON: ") + e.what());
        }
        FetchPage page = map_search_response(body);
        out.insert(out.end(), std::make_move_iterator(page.records.begin()), std::make_move_iterator(page.records.end()));
        if (!page.next_token) break;
        next_token = std::move(page.next_token);
    }
    return out;
}

}  // namespace geosent::ingest
