#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace geosent::netstats {

/// Row-major counts.
struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<double>> counts;

    std::size_t rows() const noexcept { return counts.size(); }
    std::size_t columns() const noexcept { return counts.empty() ? 0 : counts.front().size(); }
    double total() const;
};

struct ChiSquareResult {
    double chi_square = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0: series for
/// x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution.
double chi_square_sf(double statistic, double degrees_of_freedom);

/// Pearson test of independence. Throws ContractViolation("degenerate table")
/// for fewer than two rows or columns, a zero marginal or a negative entry.
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& counts);

/// sqrt(chi_square / (n * min(r - 1, c - 1))). Throws ContractViolation when
/// n <= 0 or min(r, c) < 2.
double cramers_v(double chi_square, double n, std::size_t rows, std::size_t columns);

struct NetworkAssociation {
    ContingencyTable table;
    ChiSquareResult test;
    double n = 0.0;
    double cramers_v = 0.0;
};

/// Regions x communities of user counts. Authors without a region are left
/// out; communities with fewer than `min_community_size` counted users are
/// pooled into an "other" column; all-zero rows and columns are dropped.
ContingencyTable region_community_table(const std::map<std::string, std::optional<std::string>>& regions,
                                        const std::map<std::string, std::size_t>& community,
                                        std::size_t min_community_size = 5);

NetworkAssociation associate(ContingencyTable table);

/// region, community, count rows followed by nothing else.
void write_association_table(std::ostream& out, const ContingencyTable& table);
/// chi_square, df, n, p, v.
void write_association_summary(std::ostream& out, const NetworkAssociation& association);

}  // namespace geosent::netstats
