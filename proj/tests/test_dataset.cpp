#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "airborne/dataset.hpp"

using namespace airborne;
namespace fs = std::filesystem;

namespace {

fs::path temp_csv(const std::string& stem, const std::string& body) {
    fs::path p = fs::temp_directory_path() / (stem + ".csv");
    std::ofstream out(p);
    out << body;
    return p;
}

const std::string kHeader = "year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso,vai\n";

std::string small_csv() {
    return kHeader +
           "2000,3.0,6.7,1.2,1.1,1.3,0.4,0.0\n"
           "2001,2.1,6.9,1.1,1.0,1.2,-0.2,0.1\n"
           "2002,4.2,7.0,1.3,1.2,1.4,0.9,0.0\n"
           "2003,3.5,7.3,1.2,1.1,1.3,0.3,-0.1\n";
}

dataset::Dataset small_dataset() {
    return dataset::load_csv(temp_csv("airborne_small", small_csv()));
}

} // namespace

TEST_CASE("lulcc source names round-trip") {
    using dataset::LulccSource;
    CHECK(std::string(dataset::to_string(LulccSource::gcp)) == "gcp");
    CHECK(std::string(dataset::to_string(LulccSource::hc)) == "hc");
    CHECK(std::string(dataset::to_string(LulccSource::vma)) == "vma");
    CHECK(dataset::lulcc_from_string("gcp") == LulccSource::gcp);
    CHECK(dataset::lulcc_from_string("hc") == LulccSource::hc);
    CHECK(dataset::lulcc_from_string("vma") == LulccSource::vma);
    CHECK_THROWS_AS(dataset::lulcc_from_string("houghton"), DomainError);
}

TEST_CASE("required columns list the canonical value series") {
    const auto& cols = dataset::required_columns();
    REQUIRE(cols.size() == 7);
    CHECK(cols.front() == "co2_growth");
    CHECK(cols.back() == "vai");
}

TEST_CASE("load_csv reads the toy file") {
    dataset::Dataset d = small_dataset();
    CHECK(d.size() == 4);
    CHECK(d.year_range().first == 2000);
    CHECK(d.year_range().last == 2003);
    CHECK(d.series("co2_growth").values[2] == doctest::Approx(4.2));
    CHECK(d.series("enso").start_year == 2000);
    CHECK(d.has("vai"));
    CHECK_FALSE(d.has("nope"));
    CHECK_THROWS_AS(d.series("nope"), MissingColumn);
}

TEST_CASE("load_csv tolerates a UTF-8 BOM and column reordering") {
    std::string body = "\xEF\xBB\xBFvai,year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso\n"
                       "0.0,2000,3.0,6.7,1.2,1.1,1.3,0.4\n"
                       "0.1,2001,2.1,6.9,1.1,1.0,1.2,-0.2\n";
    dataset::Dataset d = dataset::load_csv(temp_csv("airborne_bom", body));
    CHECK(d.size() == 2);
    CHECK(d.series("vai").values[1] == doctest::Approx(0.1));
    CHECK(d.series("co2_growth").values[0] == doctest::Approx(3.0));
}

TEST_CASE("load_csv ignores extra columns") {
    std::string body = "year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso,vai,notes\n"
                       "2000,3.0,6.7,1.2,1.1,1.3,0.4,0.0,9\n"
                       "2001,2.1,6.9,1.1,1.0,1.2,-0.2,0.1,9\n";
    dataset::Dataset d = dataset::load_csv(temp_csv("airborne_extra", body));
    CHECK(d.size() == 2);
    CHECK_FALSE(d.has("notes"));
}

TEST_CASE("load_csv failure modes") {
    CHECK_THROWS_AS(dataset::load_csv(temp_csv("airborne_empty", "")), EmptyFile);
    CHECK_THROWS_AS(dataset::load_csv(temp_csv("airborne_headonly", kHeader)), EmptyFile);
    CHECK_THROWS_AS(dataset::load_csv("/nonexistent/path/to/data.csv"), DataError);

    std::string missing = "year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso\n"
                          "2000,3.0,6.7,1.2,1.1,1.3,0.4\n";
    CHECK_THROWS_AS(dataset::load_csv(temp_csv("airborne_missing", missing)), MissingColumn);

    std::string gap = kHeader +
                      "2000,3.0,6.7,1.2,1.1,1.3,0.4,0.0\n"
                      "2002,2.1,6.9,1.1,1.0,1.2,-0.2,0.1\n";
    try {
        dataset::load_csv(temp_csv("airborne_gap", gap));
        FAIL("expected NonContiguousYears");
    } catch (const NonContiguousYears& e) {
        CHECK(e.year() == 2002);
    }

    std::string bad = kHeader +
                      "2000,3.0,6.7,1.2,1.1,1.3,0.4,0.0\n"
                      "2001,oops,6.9,1.1,1.0,1.2,-0.2,0.1\n";
    try {
        dataset::load_csv(temp_csv("airborne_bad", bad));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3); // 1-based file row, header is row 1
        CHECK(e.column() == "co2_growth");
    }

    std::string ragged = kHeader +
                         "2000,3.0,6.7,1.2,1.1,1.3,0.4\n";
    CHECK_THROWS_AS(dataset::load_csv(temp_csv("airborne_ragged", ragged)), ParseError);

    std::string nonfinite = kHeader +
                            "2000,nan,6.7,1.2,1.1,1.3,0.4,0.0\n"
                            "2001,2.1,6.9,1.1,1.0,1.2,-0.2,0.1\n";
    CHECK_THROWS_AS(dataset::load_csv(temp_csv("airborne_nan", nonfinite)), DataError);
}

TEST_CASE("write_csv round-trips exactly") {
    dataset::Dataset d = small_dataset();
    fs::path p = fs::temp_directory_path() / "airborne_roundtrip.csv";
    dataset::write_csv(d, p);
    dataset::Dataset d2 = dataset::load_csv(p);
    CHECK(d2.size() == d.size());
    for (const auto& name : dataset::required_columns()) {
        const auto& a = d.series(name).values;
        const auto& b = d2.series(name).values;
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("emissions adds fossil fuel and the chosen LULCC series") {
    dataset::Dataset d = small_dataset();
    dataset::AnnualSeries e = dataset::emissions(d, dataset::LulccSource::gcp);
    CHECK(e.name == "emissions_gcp");
    CHECK(e.start_year == 2000);
    CHECK(e.values[0] == doctest::Approx(7.9));
    CHECK(e.values[3] == doctest::Approx(8.5));

    dataset::AnnualSeries eh = dataset::emissions(d, dataset::LulccSource::hc);
    CHECK(eh.name == "emissions_hc");
    CHECK(eh.values[0] == doctest::Approx(7.8));
}

TEST_CASE("subset slices on years and validates bounds") {
    dataset::Dataset d = small_dataset();
    dataset::Dataset s = dataset::subset(d, 2001, 2002);
    CHECK(s.size() == 2);
    CHECK(s.year_range().first == 2001);
    CHECK(s.series("co2_growth").values[0] == doctest::Approx(2.1));

    CHECK_THROWS_AS(dataset::subset(d, 1999, 2002), RangeError);
    CHECK_THROWS_AS(dataset::subset(d, 2001, 2004), RangeError);
    CHECK_THROWS_AS(dataset::subset(d, 2002, 2001), RangeError);
}

TEST_CASE("detrend removes the least-squares line") {
    dataset::AnnualSeries s{"x", 1990, {2.0, 1.0, 4.0, 3.0, 6.0}};
    dataset::AnnualSeries r = dataset::detrend(s);
    CHECK(r.name == "x_detrended");
    CHECK(r.start_year == 1990);
    REQUIRE(r.values.size() == 5);
    const double expect[5] = {0.8, -1.2, 0.8, -1.2, 0.8};
    for (int i = 0; i < 5; ++i) CHECK(r.values[i] == doctest::Approx(expect[i]).epsilon(1e-12));

    double sum = 0.0;
    for (double v : r.values) sum += v;
    CHECK(std::abs(sum) < 1e-12);

    dataset::AnnualSeries tiny{"x", 1990, {1.0, 2.0}};
    CHECK_THROWS_AS(dataset::detrend(tiny), TooShort);
}

TEST_CASE("trend test matches the classical t oracle") {
    dataset::AnnualSeries s{"x", 1960,
        {1.2, 0.7, 1.9, 2.3, 1.6, 2.8, 2.2, 3.4, 2.9, 3.1}};
    dataset::TrendTestResult r = dataset::trend_test(s);
    CHECK(r.slope == doctest::Approx(0.24787878787878803).epsilon(1e-12));
    CHECK(r.t_stat == doctest::Approx(4.827828508104293).epsilon(1e-10));
    CHECK(r.p_value == doctest::Approx(0.00130824568537274).epsilon(1e-9));
}

TEST_CASE("trend test degenerate cases") {
    dataset::AnnualSeries flat{"c", 1960, {2.0, 2.0, 2.0, 2.0, 2.0}};
    dataset::TrendTestResult rc = dataset::trend_test(flat);
    CHECK(rc.slope == doctest::Approx(0.0));
    CHECK(rc.p_value == doctest::Approx(1.0));

    dataset::AnnualSeries line{"l", 1960, {1.0, 1.5, 2.0, 2.5, 3.0}};
    dataset::TrendTestResult rl = dataset::trend_test(line);
    CHECK(rl.slope == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rl.p_value == doctest::Approx(0.0));

    dataset::AnnualSeries tiny{"t", 1960, {1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(dataset::trend_test(tiny), TooShort);
}

TEST_CASE("dataset constructor validates alignment") {
    auto mk = [](const std::string& name, int y0, std::size_t n) {
        dataset::AnnualSeries s{name, y0, numerics::Vector(n, 1.0)};
        return s;
    };
    std::vector<dataset::AnnualSeries> cols;
    for (const auto& name : dataset::required_columns()) cols.push_back(mk(name, 2000, 3));
    CHECK_NOTHROW(dataset::Dataset{cols});

    auto misaligned = cols;
    misaligned[2].start_year = 2001;
    CHECK_THROWS_AS(dataset::Dataset{misaligned}, DataError);

    auto shorter = cols;
    shorter[1].values.pop_back();
    CHECK_THROWS_AS(dataset::Dataset{shorter}, DataError);

    auto absent = cols;
    absent.pop_back();
    CHECK_THROWS_AS(dataset::Dataset{absent}, MissingColumn);
}
