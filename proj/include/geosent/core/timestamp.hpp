#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace geosent {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)". Fractional seconds
/// are truncated. Throws std::invalid_argument on anything else.
Timestamp parse_rfc3339(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

int utc_year(Timestamp t);
unsigned utc_month(Timestamp t);

}  // namespace geosent
