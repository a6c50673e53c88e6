#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cevdetect/csv_io.hpp"
#include "cevdetect/detection.hpp"
#include "cevdetect/kgrid.hpp"
#include "cevdetect/models.hpp"

namespace cevdetect {

struct RunConfig {
    std::optional<std::filesystem::path> input;
    std::optional<ModelSpec> model;
    CsvOptions csv;
    std::optional<std::size_t> n;
    std::uint64_t seed = 1;
    std::optional<std::size_t> kmin;
    std::optional<std::size_t> kmax;
    std::size_t kcount = 50;
    GridSpacing spacing = GridSpacing::Log;
    std::vector<double> p_values;   ///< empty: subcommand default
    DetectionConfig detection;
    std::optional<std::filesystem::path> out_dir;

    /// Exactly one of input / model; simulation needs n.
    void validate_source() const;
};

/// Sample from the input file or the model, and the number of rejected rows.
IngestResult load_sample(const RunConfig& config);

/// Default grid for n, with kmin / kmax / kcount / spacing overrides applied.
KGrid build_grid(const RunConfig& config, std::size_t n, bool marginal);

/// Writes cev_traces.csv, marginal_traces.csv and verdict.json to out_dir.
DetectionVerdict run_compute(const RunConfig& config, std::ostream& log);

/// Writes sample.csv for the model.
void run_simulate(const RunConfig& config, std::ostream& log);

/// Reads a cev_traces.csv given by `input` (sample size from n) and writes verdict.json.
DetectionVerdict run_detect(const RunConfig& config, std::ostream& log);

/// Prints closed-form and numerical limits; also writes limits.csv when out_dir is set.
void run_limits(const RunConfig& config, std::ostream& out);

/// Writes marginal_traces.csv for both variables.
void run_marginals(const RunConfig& config, std::ostream& log);

}  // namespace cevdetect
