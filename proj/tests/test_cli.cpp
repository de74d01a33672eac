#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "airborne/dataset.hpp"
#include "airborne/simulate.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_binary;
fs::path g_dir;
fs::path g_fixture;

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    const fs::path out = g_dir / "stdout.txt";
    const fs::path err = g_dir / "stderr.txt";
    const std::string cmd =
        g_binary + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

// Synthetic panel in the dataset schema, 1959 onwards so the default
// replicate run also produces the 1992 subsample table.
fs::path write_fixture() {
    using airborne::numerics::Vector;
    airborne::simulate::SyntheticConfig cfg;
    cfg.T = 60;
    cfg.alpha_true = 0.45;
    cfg.gamma_true = {{0.2, -0.3}};
    cfg.sigma_u = 0.3;
    cfg.sigma_eta = 0.12;
    cfg.sigma_kappa = 0.15;
    cfg.seed = 99;
    airborne::simulate::SyntheticData s = airborne::simulate::generate(cfg);

    std::vector<airborne::dataset::AnnualSeries> cols;
    Vector zero(cfg.T, 0.0), dh(cfg.T), dv(cfg.T);
    for (std::size_t i = 0; i < cfg.T; ++i) {
        dh[i] = s.e1[i] - s.e_star[i];
        dv[i] = s.e2[i] - s.e_star[i];
    }
    cols.push_back({"co2_growth", 1959, s.g});
    cols.push_back({"emissions_ff", 1959, s.e_star});
    cols.push_back({"lulcc_gcp", 1959, zero});
    cols.push_back({"lulcc_hc", 1959, dh});
    cols.push_back({"lulcc_vma", 1959, dv});
    cols.push_back({"enso", 1959, s.enso});
    cols.push_back({"vai", 1959, s.vai});

    const fs::path p = g_dir / "fixture.csv";
    airborne::dataset::write_csv(airborne::dataset::Dataset(cols), p);
    return p;
}

std::string with_data(const std::string& args) {
    return args + " --data " + g_fixture.string();
}

} // namespace

TEST_CASE("estimate: OLS markdown") {
    CliResult r = run_cli(with_data("estimate --method ols --spec simple"));
    CHECK(r.code == 0);
    CHECK(r.out.find("| OLS | simple | 1959-2018 (n=60) |") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("estimate: JSON schema and subsetting") {
    CliResult r = run_cli(with_data(
        "estimate --method iv --spec extended --instruments hc,vma "
        "--from 1992 --format json"));
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == "give"); // two instruments: overidentified
    CHECK(j["spec"] == "extended");
    CHECK(j["sample"]["from"] == 1992);
    CHECK(j["sample"]["to"] == 2018);
    CHECK(j["sample"]["n"] == 27);
    CHECK(j["estimate"].is_number());
    CHECK(j["se"].is_number());
    CHECK(j["ci"].is_array());
    CHECK_FALSE(j["gamma"]["enso"].is_null());
    CHECK(j["instruments"].size() == 2);
    CHECK(j["bootstrap"].is_null());
}

TEST_CASE("estimate: bootstrapped Deming row is reproducible") {
    const std::string args = with_data(
        "estimate --method deming --delta 1 --bootstrap 199 --seed 5 --format json");
    CliResult a = run_cli(args + " --threads 1");
    CliResult b = run_cli(args + " --threads 4");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out); // byte-identical across thread counts

    nlohmann::json j = nlohmann::json::parse(a.out);
    CHECK(j["method"] == "deming");
    CHECK(j["delta"] == 1.0);
    CHECK(j["bootstrap"]["B"] == 199);
    CHECK(j["bootstrap"]["seed"] == 5);
    CHECK(j["se"].is_number());
}

TEST_CASE("replicate: default run emits full sample and 1992 panel") {
    CliResult r = run_cli(with_data("replicate --bootstrap 0"));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Sample 1959-2018 (n=60)") != std::string::npos);
    CHECK(r.out.find("Sample 1992-2018 (n=27)") != std::string::npos);
    CHECK(r.out.find("| IV reg. (H&C-vMa) | ") != std::string::npos);

    CliResult sub = run_cli(with_data("replicate --bootstrap 0 --from 1970 --to 2000"));
    REQUIRE(sub.code == 0);
    CHECK(sub.out.find("Sample 1970-2000 (n=31)") != std::string::npos);
    CHECK(sub.out.find("Sample 1992-") == std::string::npos); // explicit range: one table
}

TEST_CASE("replicate: identical invocations are byte-identical") {
    const std::string args =
        with_data("replicate --bootstrap 99 --seed 11 --threads 4 --format csv");
    CliResult a = run_cli(args);
    CliResult b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("label,method,spec,from,to,n,estimate,se,") == 0);
}

TEST_CASE("replicate: JSON rows parse and count up") {
    CliResult r = run_cli(with_data("replicate --bootstrap 0 --format json"));
    REQUIRE(r.code == 0);
    nlohmann::json arr = nlohmann::json::parse(r.out);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 36); // two tables, 18 rows each
    for (const auto& row : arr) {
        CHECK(row.contains("method"));
        CHECK(row.contains("estimate"));
        CHECK(row.contains("sample"));
    }
}

TEST_CASE("emit-plot-data writes the tidy csv trio") {
    const fs::path plots = g_dir / "plots";
    fs::remove_all(plots);
    CliResult r = run_cli(with_data("estimate --method ols --emit-plot-data " + plots.string()));
    REQUIRE(r.code == 0);
    for (const char* name : {"emissions.csv", "lulcc.csv", "covariates.csv"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(plots / name));
    }
    const std::string emissions = slurp(plots / "emissions.csv");
    CHECK(emissions.find("year,emissions_gcp,emissions_hc,emissions_vma,co2_growth") == 0);
    const std::string covs = slurp(plots / "covariates.csv");
    CHECK(covs.find("enso_detrended") != std::string::npos);
}

TEST_CASE("simulate: attenuation shows up in the JSON report") {
    CliResult r = run_cli(
        "simulate --T 400 --R 100 --alpha 0.5 --sigma-u 0.1 --sigma-eta 1 "
        "--ramp-base 2 --ramp-slope 0 --seed 3 --format json");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["predicted_ols"].get<double>() == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(j["delta_true"].get<double>() == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(j["ols"]["mean"].get<double>() == doctest::Approx(0.4).epsilon(0.05));
    CHECK(j["iv"]["mean"].get<double>() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("trendtest: JSON fields") {
    CliResult r = run_cli(with_data("trendtest --series enso --format json"));
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["series"] == "enso");
    CHECK(j["slope"].is_number());
    CHECK(j["t_stat"].is_number());
    CHECK(j["p_value"].get<double>() >= 0.0);
    CHECK(j["p_value"].get<double>() <= 1.0);
    CHECK(j["sample"]["n"] == 60);

    CliResult md = run_cli(with_data("trendtest --series emissions_gcp"));
    REQUIRE(md.code == 0);
    CHECK(md.out.find("| Series | Slope (/yr) | t | p |") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("estimate --no-such-flag").code == 2);
    CHECK(run_cli("nosuchcommand").code == 2);
    CHECK(run_cli("").code == 2); // a subcommand is required
    CHECK(run_cli(with_data("estimate --method give")).code == 2);
    CHECK(run_cli(with_data("estimate --method iv")).code == 2); // no instruments
    CHECK(run_cli(with_data("estimate --format yaml")).code == 2);
    CHECK(run_cli(with_data("estimate --level 1.5")).code == 2);
    CHECK(run_cli(with_data("estimate --from 2001 --to 1999")).code == 2);
    CHECK(run_cli(with_data("estimate --method deming --bootstrap 1")).code == 2);
    CHECK(run_cli(with_data("estimate --method deming --delta -2")).code == 2);
    CHECK(run_cli(with_data("replicate --lulcc houghton")).code == 2);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("estimate --help").code == 0);
}

TEST_CASE("data errors exit with 3") {
    CHECK(run_cli("estimate --data /no/such/file.csv").code == 3);

    const fs::path bad = g_dir / "bad.csv";
    std::ofstream(bad) << "year,co2_growth\n1990,1.0\n";
    CHECK(run_cli("estimate --data " + bad.string()).code == 3);

    const fs::path gap = g_dir / "gap.csv";
    std::ofstream(gap) << "year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso,vai\n"
                          "1990,1,2,0,0,0,0,0\n"
                          "1993,1,2,0,0,0,0,0\n";
    CHECK(run_cli("estimate --data " + gap.string()).code == 3);

    // in-range file, out-of-range request
    CHECK(run_cli(with_data("estimate --from 1900")).code == 3);
}

TEST_CASE("estimation failures exit with 4") {
    // constant emissions, alternating growth summing to zero: e'g = 0
    const fs::path degenerate = g_dir / "degenerate.csv";
    std::ofstream out(degenerate);
    out << "year,co2_growth,emissions_ff,lulcc_gcp,lulcc_hc,lulcc_vma,enso,vai\n";
    for (int i = 0; i < 10; ++i)
        out << 1990 + i << "," << (i % 2 ? "-0.1" : "0.1")
            << ",3.0,0,0,0,0.5,0.25\n";
    out.close();
    CliResult r = run_cli("estimate --method deming --data " + degenerate.string());
    CHECK(r.code == 4);
    CHECK(r.err.find("error:") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-airborne-binary> [doctest args]\n");
        return 1;
    }
    g_binary = argv[1];
    g_dir = fs::temp_directory_path() / "airborne_cli_tests";
    fs::create_directories(g_dir);
    g_fixture = write_fixture();

    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
