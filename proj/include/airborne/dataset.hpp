#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "airborne/numerics.hpp"

namespace airborne::dataset {

/// One annual climate variable on a contiguous year grid.
/// Carbon series are in GtC/yr; enso and vai are unitless indices.
struct AnnualSeries {
    std::string name;
    int start_year = 0;
    numerics::Vector values;

    int end_year() const { return start_year + static_cast<int>(values.size()) - 1; }
};

struct YearRange {
    int first = 0;
    int last = 0;
};

enum class LulccSource { gcp, hc, vma };

const char* to_string(LulccSource source);
LulccSource lulcc_from_string(std::string_view token); // DomainError on unknown token

/// Column names every dataset must carry, in canonical CSV order.
const std::vector<std::string>& required_columns();

/// Aligned collection of the required annual series. Immutable after
/// construction; all member series cover exactly year_range().
class Dataset {
public:
    /// Validates that every required series is present, nonempty, finite,
    /// and covers the same year range.
    explicit Dataset(std::vector<AnnualSeries> series);

    const AnnualSeries& series(std::string_view name) const; // MissingColumn if absent
    bool has(std::string_view name) const;
    YearRange year_range() const { return range_; }
    std::size_t size() const { return length_; } // observations per series

private:
    std::vector<AnnualSeries> series_;
    YearRange range_{};
    std::size_t length_ = 0;
};

/// CSV schema (UTF-8, comma separated, header row):
///   year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso,vai
/// Years ascending and contiguous, decimal point '.', no missing cells.
/// Extra columns are ignored with a warning on stderr.
Dataset load_csv(const std::filesystem::path& path);

/// Canonical 8-column CSV with round-trip precision values.
void write_csv(const Dataset& d, const std::filesystem::path& path);

/// Total emissions: emissions_ff + the selected LULCC series.
AnnualSeries emissions(const Dataset& d, LulccSource source);

/// Truncate every series to [from, to]; RangeError outside year_range.
Dataset subset(const Dataset& d, int from, int to);

/// Residuals of the least-squares fit on {intercept, 0-based year index}.
AnnualSeries detrend(const AnnualSeries& s); // TooShort below 3 observations

struct TrendTestResult {
    double slope = 0.0;  // per year
    double t_stat = 0.0;
    double p_value = 1.0; // two-sided, Student t with T−2 dof
};

TrendTestResult trend_test(const AnnualSeries& s); // TooShort below 4 observations

} // namespace airborne::dataset
