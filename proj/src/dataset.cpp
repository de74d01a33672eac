#include "airborne/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace airborne::dataset {

const char* to_string(LulccSource source) {
    switch (source) {
        case LulccSource::gcp: return "gcp";
        case LulccSource::hc: return "hc";
        case LulccSource::vma: return "vma";
    }
    return "?";
}

LulccSource lulcc_from_string(std::string_view token) {
    if (token == "gcp") return LulccSource::gcp;
    if (token == "hc") return LulccSource::hc;
    if (token == "vma") return LulccSource::vma;
    throw DomainError("unknown LULCC source: " + std::string(token));
}

const std::vector<std::string>& required_columns() {
    static const std::vector<std::string> cols = {
        "co2_growth", "emissions_ff", "lulcc_gcp", "lulcc_hc", "lulcc_vma", "enso", "vai"};
    return cols;
}

Dataset::Dataset(std::vector<AnnualSeries> series) : series_(std::move(series)) {
    if (series_.empty()) throw DataError("dataset: no series");
    for (const auto& s : series_) {
        if (s.values.empty()) throw DataError("dataset: series '" + s.name + "' is empty");
        for (double v : s.values)
            if (!std::isfinite(v))
                throw DataError("dataset: series '" + s.name + "' has a non-finite value");
    }
    range_ = {series_.front().start_year, series_.front().end_year()};
    length_ = series_.front().values.size();
    for (const auto& s : series_)
        if (s.start_year != range_.first || s.values.size() != length_)
            throw DataError("dataset: series '" + s.name + "' is not aligned to " +
                            std::to_string(range_.first) + ".." + std::to_string(range_.last));
    for (const auto& name : required_columns())
        if (!has(name)) throw MissingColumn(name);
}

const AnnualSeries& Dataset::series(std::string_view name) const {
    for (const auto& s : series_)
        if (s.name == name) return s;
    throw MissingColumn(std::string(name));
}

bool Dataset::has(std::string_view name) const {
    return std::any_of(series_.begin(), series_.end(),
                       [&](const AnnualSeries& s) { return s.name == name; });
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError(row, column, "cannot parse '" + cell + "' as a number");
    if (!std::isfinite(value))
        throw ParseError(row, column, "non-finite value '" + cell + "'");
    return value;
}

int parse_year(const std::string& cell, std::size_t row) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ParseError(row, "year", "cannot parse '" + cell + "' as a year");
    return value;
}

} // namespace

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("empty file: " + path.string());
    if (!line.empty() && line.front() == '\xEF' && line.size() >= 3) {
        if (line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3); // UTF-8 BOM
    }

    const auto header = split_csv_line(line);
    std::size_t year_col = header.size();
    std::vector<std::size_t> column_of(required_columns().size(), header.size());
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "year") {
            year_col = j;
            continue;
        }
        bool known = false;
        for (std::size_t k = 0; k < required_columns().size(); ++k) {
            if (header[j] == required_columns()[k]) {
                column_of[k] = j;
                known = true;
                break;
            }
        }
        if (!known)
            std::cerr << "warning: ignoring unknown column '" << header[j] << "' in "
                      << path.filename().string() << "\n";
    }
    if (year_col == header.size()) throw MissingColumn("year");
    for (std::size_t k = 0; k < required_columns().size(); ++k)
        if (column_of[k] == header.size()) throw MissingColumn(required_columns()[k]);

    std::vector<int> years;
    std::vector<numerics::Vector> values(required_columns().size());
    std::size_t row = 1; // header is row 1
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < header.size())
            throw ParseError(row, "*", "expected " + std::to_string(header.size()) +
                                           " fields, found " + std::to_string(fields.size()));
        years.push_back(parse_year(fields[year_col], row));
        for (std::size_t k = 0; k < required_columns().size(); ++k)
            values[k].push_back(parse_cell(fields[column_of[k]], row, required_columns()[k]));
    }
    if (years.empty()) throw EmptyFile("no data rows in " + path.string());

    for (std::size_t i = 1; i < years.size(); ++i)
        if (years[i] != years[i - 1] + 1) throw NonContiguousYears(years[i]);

    std::vector<AnnualSeries> series;
    series.reserve(required_columns().size());
    for (std::size_t k = 0; k < required_columns().size(); ++k)
        series.push_back({required_columns()[k], years.front(), std::move(values[k])});
    return Dataset(std::move(series));
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "year";
    for (const auto& name : required_columns()) out << ',' << name;
    out << '\n';
    const auto range = d.year_range();
    char buf[40];
    for (int year = range.first; year <= range.last; ++year) {
        out << year;
        const std::size_t i = static_cast<std::size_t>(year - range.first);
        for (const auto& name : required_columns()) {
            std::snprintf(buf, sizeof buf, "%.17g", d.series(name).values[i]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

AnnualSeries emissions(const Dataset& d, LulccSource source) {
    const auto& ff = d.series("emissions_ff");
    const auto& lulcc = d.series(std::string("lulcc_") + to_string(source));
    AnnualSeries total{std::string("emissions_") + to_string(source), ff.start_year,
                       numerics::Vector(ff.values.size())};
    for (std::size_t i = 0; i < ff.values.size(); ++i)
        total.values[i] = ff.values[i] + lulcc.values[i];
    return total;
}

Dataset subset(const Dataset& d, int from, int to) {
    const auto range = d.year_range();
    if (from > to || from < range.first || to > range.last)
        throw RangeError("requested years " + std::to_string(from) + ".." + std::to_string(to) +
                         " outside available " + std::to_string(range.first) + ".." +
                         std::to_string(range.last));
    std::vector<AnnualSeries> series;
    for (const auto& name : required_columns()) {
        const auto& s = d.series(name);
        const std::size_t offset = static_cast<std::size_t>(from - range.first);
        const std::size_t count = static_cast<std::size_t>(to - from + 1);
        series.push_back({s.name, from,
                          numerics::Vector(s.values.begin() + offset,
                                           s.values.begin() + offset + count)});
    }
    return Dataset(std::move(series));
}

namespace {

struct TrendFit {
    double intercept;
    double slope;
    numerics::Vector residuals;
    double rss;
    double sxx; // Σ (t − t̄)²
};

// Least squares of values on {1, t} with t = 0..T−1. The index regressor,
// not the calendar year: residuals are invariant to that shift and the
// normal equations stay well conditioned.
TrendFit fit_trend(const numerics::Vector& v) {
    const std::size_t n = v.size();
    const double nn = static_cast<double>(n);
    const double t_mean = (nn - 1.0) / 2.0;
    double v_mean = 0.0;
    for (double x : v) v_mean += x;
    v_mean /= nn;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - t_mean;
        sxx += dt * dt;
        sxy += dt * (v[i] - v_mean);
    }
    TrendFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = v_mean - fit.slope * t_mean;
    fit.sxx = sxx;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = v[i] - fit.intercept - fit.slope * static_cast<double>(i);
        fit.rss += fit.residuals[i] * fit.residuals[i];
    }
    return fit;
}

} // namespace

AnnualSeries detrend(const AnnualSeries& s) {
    if (s.values.size() < 3)
        throw TooShort("detrend needs at least 3 observations, got " +
                       std::to_string(s.values.size()));
    auto fit = fit_trend(s.values);
    return {s.name + "_detrended", s.start_year, std::move(fit.residuals)};
}

TrendTestResult trend_test(const AnnualSeries& s) {
    const std::size_t n = s.values.size();
    if (n < 4)
        throw TooShort("trend_test needs at least 4 observations, got " + std::to_string(n));
    const auto fit = fit_trend(s.values);
    const double s2 = fit.rss / static_cast<double>(n - 2);
    TrendTestResult result;
    result.slope = fit.slope;
    if (s2 <= 0.0) {
        // Exact fit: a nonzero slope is infinitely significant, a zero one not at all.
        result.t_stat = fit.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity() *
                                                     (fit.slope > 0 ? 1.0 : -1.0);
        result.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
        return result;
    }
    result.t_stat = fit.slope / std::sqrt(s2 / fit.sxx);
    result.p_value =
        numerics::student_t_two_sided_p(result.t_stat, static_cast<double>(n - 2));
    return result;
}

} // namespace airborne::dataset
