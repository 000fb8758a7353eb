#pragma once

#include "geosent/core/timestamp.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace geosent::analytics {

struct AuthoredPost {
    std::string author_id;
    Timestamp created_at{};
};

struct YearlyUserStats {
    int year = 0;
    std::size_t tweet_count = 0;
    std::size_t new_users = 0;     ///< authors with no post in an earlier year
    std::size_t active_users = 0;  ///< distinct authors this year
    double share_new = 0.0;        ///< new_users / active_users
    double tweets_per_user = 0.0;  ///< tweet_count / active_users
    bool partial_year = false;     ///< collection ended before the year did
};

/// Derived columns from the raw ones. Throws ContractViolation when
/// active_users is 0 or new_users exceeds it.
YearlyUserStats derive_yearly_stats(int year, std::size_t tweet_count, std::size_t new_users, std::size_t active_users);

/// One row per UTC calendar year with at least one post. The final year is
/// flagged partial when `collection_end` (default: the latest post) falls
/// before 31 December of that year.
std::vector<YearlyUserStats> yearly_user_stats(std::span<const AuthoredPost> posts,
                                               std::optional<Timestamp> collection_end = std::nullopt);

/// posts-per-user -> number of users with that many posts.
std::map<std::size_t, std::size_t> user_frequency_distribution(std::span<const AuthoredPost> posts);

/// Columns: year, tweet_count, new_users, active_users, share_new,
/// tweets_per_user, partial_year. Full precision.
void write_yearly_user_stats(std::ostream& out, std::span<const YearlyUserStats> rows);

void write_user_frequency(std::ostream& out, const std::map<std::size_t, std::size_t>& histogram);

}  // namespace geosent::analytics
