#include "geosent/analytics/user_stats.hpp"

#include "geosent/core/csv.hpp"
#include "geosent/core/error.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_map>

namespace geosent::analytics {

YearlyUserStats derive_yearly_stats(int year, std::size_t tweet_count, std::size_t new_users, std::size_t active_users) {
    if (active_users == 0) throw ContractViolation("active_users must be positive");
    if (new_users > active_users) throw ContractViolation("new_users exceeds active_users");
    YearlyUserStats s;
    s.year = year;
    s.tweet_count = tweet_count;
    s.new_users = new_users;
    s.active_users = active_users;
    s.share_new = static_cast<double>(new_users) / static_cast<double>(active_users);
    s.tweets_per_user = static_cast<double>(tweet_count) / static_cast<double>(active_users);
    return s;
}

std::vector<YearlyUserStats> yearly_user_stats(std::span<const AuthoredPost> posts, std::optional<Timestamp> collection_end) {
    if (posts.empty()) return {};

    std::unordered_map<std::string, int> first_year;
    std::map<int, std::set<std::string>> active;
    std::map<int, std::size_t> tweets;
    Timestamp latest = posts.front().created_at;
    for (const auto& p : posts) {
        const int y = utc_year(p.created_at);
        auto [it, inserted] = first_year.emplace(p.author_id, y);
        if (!inserted) it->second = std::min(it->second, y);
        active[y].insert(p.author_id);
        ++tweets[y];
        latest = std::max(latest, p.created_at);
    }
    std::map<int, std::size_t> newcomers;
    for (const auto& [author, y] : first_year) ++newcomers[y];

    std::vector<YearlyUserStats> rows;
    for (const auto& [y, authors] : active) {
        rows.push_back(derive_yearly_stats(y, tweets[y], newcomers[y], authors.size()));
    }

    using namespace std::chrono;
    const Timestamp end = collection_end.value_or(latest);
    const sys_days last_day = sys_days{year{rows.back().year} / December / 31};
    if (utc_year(end) == rows.back().year && floor<days>(end) < last_day) rows.back().partial_year = true;
    return rows;
}

std::map<std::size_t, std::size_t> user_frequency_distribution(std::span<const AuthoredPost> posts) {
    std::unordered_map<std::string, std::size_t> per_user;
    for (const auto& p : posts) ++per_user[p.author_id];
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& [author, n] : per_user) ++histogram[n];
    return histogram;
}

void write_yearly_user_stats(std::ostream& out, std::span<const YearlyUserStats> rows) {
    csv::write_row(out, {"year", "tweet_count", "new_users", "active_users", "share_new", "tweets_per_user",
                         "partial_year"});
    for (const auto& r : rows) {
        csv::write_row(out, {std::to_string(r.year), std::to_string(r.tweet_count), std::to_string(r.new_users),
                             std::to_string(r.active_users), csv::format_real(r.share_new),
                             csv::format_real(r.tweets_per_user), r.partial_year ? "true" : "false"});
    }
}

void write_user_frequency(std::ostream& out, const std::map<std::size_t, std::size_t>& histogram) {
    csv::write_row(out, {"posts_per_user", "user_count"});
    for (const auto& [posts, users] : histogram) csv::write_row(out, {std::to_string(posts), std::to_string(users)});
}

}  // namespace geosent::analytics
