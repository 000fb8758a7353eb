#include "geosent/netstats/chi_square.hpp"

#include "geosent/core/csv.hpp"
#include "geosent/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace geosent::netstats {

double ContingencyTable::total() const {
    double n = 0.0;
    for (const auto& row : counts) {
        for (double v : row) n += v;
    }
    return n;
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw ContractViolation("gamma_q needs a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 100000;
    const double log_prefix = a * std::log(x) - x - std::lgamma(a);

    if (x < a + 1.0) {
        // P(a, x) = x^a e^-x / Gamma(a+1) * sum x^n / ((a+1)...(a+n))
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < max_iter; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        return std::clamp(1.0 - sum * std::exp(log_prefix), 0.0, 1.0);
    }

    // Modified Lentz evaluation of the continued fraction for Q(a, x).
    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

double chi_square_sf(double statistic, double degrees_of_freedom) {
    if (!(degrees_of_freedom > 0.0)) throw ContractViolation("degrees of freedom must be positive");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& counts) {
    const std::size_t r = counts.size();
    const std::size_t c = r == 0 ? 0 : counts.front().size();
    if (r < 2 || c < 2) throw ContractViolation("degenerate table");
    std::vector<double> row_sum(r, 0.0);
    std::vector<double> col_sum(c, 0.0);
    double n = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        if (counts[i].size() != c) throw ContractViolation("ragged contingency table");
        for (std::size_t j = 0; j < c; ++j) {
            const double v = counts[i][j];
            if (!(v >= 0.0)) throw ContractViolation("degenerate table");
            row_sum[i] += v;
            col_sum[j] += v;
            n += v;
        }
    }
    const auto zero = [](double s) { return s <= 0.0; };
    if (std::any_of(row_sum.begin(), row_sum.end(), zero) || std::any_of(col_sum.begin(), col_sum.end(), zero)) {
        throw ContractViolation("degenerate table");
    }

    ChiSquareResult result;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double expected = row_sum[i] * col_sum[j] / n;
            const double diff = counts[i][j] - expected;
            result.chi_square += diff * diff / expected;
        }
    }
    result.degrees_of_freedom = (r - 1) * (c - 1);
    result.p_value = chi_square_sf(result.chi_square, static_cast<double>(result.degrees_of_freedom));
    return result;
}

double cramers_v(double chi_square, double n, std::size_t rows, std::size_t columns) {
    if (std::min(rows, columns) < 2) throw ContractViolation("Cramer's V needs at least a 2x2 table");
    if (!(n > 0.0)) throw ContractViolation("Cramer's V needs n > 0");
    if (!(chi_square >= 0.0)) throw ContractViolation("chi-square must be non-negative");
    const double k = static_cast<double>(std::min(rows, columns) - 1);
    return std::sqrt(chi_square / (n * k));
}

ContingencyTable region_community_table(const std::map<std::string, std::optional<std::string>>& regions,
                                        const std::map<std::string, std::size_t>& community,
                                        std::size_t min_community_size) {
    std::map<std::size_t, std::size_t> community_size;
    for (const auto& [author, c] : community) {
        const auto it = regions.find(author);
        if (it != regions.end() && it->second) ++community_size[c];
    }
    std::set<std::string> region_set;
    std::set<std::size_t> kept;
    bool need_other = false;
    for (const auto& [c, size] : community_size) {
        if (size >= min_community_size) {
            kept.insert(c);
        } else {
            need_other = true;
        }
    }
    for (const auto& [author, region] : regions) {
        if (region && community.count(author)) region_set.insert(*region);
    }

    ContingencyTable table;
    table.row_labels.assign(region_set.begin(), region_set.end());
    std::map<std::size_t, std::size_t> column_of;
    for (std::size_t c : kept) {
        column_of[c] = table.column_labels.size();
        table.column_labels.push_back(std::to_string(c));
    }
    const std::size_t other = table.column_labels.size();
    if (need_other) table.column_labels.push_back("other");
    table.counts.assign(table.row_labels.size(), std::vector<double>(table.column_labels.size(), 0.0));

    for (const auto& [author, c] : community) {
        const auto it = regions.find(author);
        if (it == regions.end() || !it->second) continue;
        const auto row = static_cast<std::size_t>(
            std::lower_bound(table.row_labels.begin(), table.row_labels.end(), *it->second) - table.row_labels.begin());
        const auto col = column_of.count(c) ? column_of[c] : other;
        table.counts[row][col] += 1.0;
    }

    // Drop empty columns (rows are non-empty by construction).
    for (std::size_t j = table.columns(); j-- > 0;) {
        double sum = 0.0;
        for (const auto& row : table.counts) sum += row[j];
        if (sum > 0.0) continue;
        table.column_labels.erase(table.column_labels.begin() + static_cast<std::ptrdiff_t>(j));
        for (auto& row : table.counts) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return table;
}

NetworkAssociation associate(ContingencyTable table) {
    NetworkAssociation a;
    a.test = chi_square_independence(table.counts);
    a.n = table.total();
    a.cramers_v = cramers_v(a.test.chi_square, a.n, table.rows(), table.columns());
    a.table = std::move(table);
    return a;
}

void write_association_table(std::ostream& out, const ContingencyTable& table) {
    csv::write_row(out, {"region", "community", "count"});
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.columns(); ++j) {
            csv::write_row(out, {table.row_labels[i], table.column_labels[j], csv::format_real(table.counts[i][j])});
        }
    }
}

void write_association_summary(std::ostream& out, const NetworkAssociation& a) {
    csv::write_row(out, {"chi_square", "df", "n", "p", "v"});
    csv::write_row(out, {csv::format_real(a.test.chi_square), std::to_string(a.test.degrees_of_freedom),
                         csv::format_real(a.n), csv::format_real(a.test.p_value), csv::format_real(a.cramers_v)});
}

}  // namespace geosent::netstats
