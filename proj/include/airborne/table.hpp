#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "airborne/bootstrap.hpp"
#include "airborne/dataset.hpp"
#include "airborne/estimators.hpp"

namespace airborne::table {

/// One table line: an estimate plus presentation metadata.
struct RowResult {
    std::string label;                  // "OLS", "IV reg. (H&C)", "Deming reg. (1)", ...
    std::string spec;                   // "simple" | "extended"
    estimators::EstimateResult est;
    std::optional<bootstrap::BootstrapConfig> boot; // set on bootstrapped rows
};

struct TableConfig {
    dataset::LulccSource lulcc = dataset::LulccSource::gcp;
    std::vector<dataset::LulccSource> instruments = {dataset::LulccSource::hc,
                                                     dataset::LulccSource::vma};
    std::vector<double> delta_grid = {0.2, 0.5, 1.0, 2.0, 5.0};
    std::size_t B = 9999; // 0 skips the bootstrap, leaving Deming rows bare
    std::uint64_t seed = 20220101;
    double level = 0.95;
    bool detrend_enso = false;
    bool dof_correction = false;
    unsigned threads = 1;
};

/// Simple-spec rows then extended-spec rows, each panel ordered
/// OLS, one IV row per instrument, one combined-IV row when there are at
/// least two, then one Deming row per delta.
struct ReplicationTable {
    estimators::SampleInfo sample;
    TableConfig config;
    std::vector<RowResult> rows;
};

ReplicationTable build_table(const dataset::Dataset& d, const TableConfig& cfg);

/// "GCP", "H&C", "vMa" as printed in row labels.
std::string display_name(dataset::LulccSource source);

/// x rounded to 4 decimals, ties to even, always 4 digits after the point.
std::string format_fixed4(double x);

/// Paired panel: simple spec on the left, extended on the right.
std::string render_markdown(const ReplicationTable& t);
/// Single-estimate markdown block used by the estimate command.
std::string render_markdown(const RowResult& row);

/// Flat CSV at round-trip precision, one line per row.
std::string render_csv(const std::vector<RowResult>& rows);

/// JSON per row:
/// {"method","spec","sample":{"from","to","n"},"estimate","se","ci",
///  "gamma":{"enso","vai"},"delta","instruments","bootstrap":{"B","seed"}}
/// with null for fields a method does not produce.
std::string render_json(const RowResult& row);
std::string render_json(const std::vector<RowResult>& rows); // array of rows

} // namespace airborne::table
