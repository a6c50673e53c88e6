#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cevdetect/cev_statistics.hpp"
#include "cevdetect/kgrid.hpp"
#include "cevdetect/marginal_diagnostics.hpp"
#include "cevdetect/rank_core.hpp"

namespace cevdetect {

/// Column selector: a header name, or a 1-based position when all digits.
struct CsvOptions {
    std::string col_x = "1";
    std::string col_y = "2";
    bool header = false;
    /// When set, X is replaced by size / duration (columns selected like
    /// col_x) and col_x is ignored.
    std::optional<std::string> rate_size;
    std::optional<std::string> rate_duration;
};

class IngestError : public std::runtime_error {
public:
    enum class Code { Unreadable, EmptySelection, NoValidRows };
    IngestError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const noexcept { return code_; }

private:
    Code code_;
};

struct IngestResult {
    BivariateSample sample;
    std::size_t rows_read = 0;      ///< non-blank data rows
    std::size_t rows_rejected = 0;  ///< rows with a missing, non-numeric or non-finite selected field
};

/// Reads two numeric columns. Blank lines are skipped; other bad rows are
/// counted in rows_rejected. Throws IngestError for an unreadable file, a
/// selector that matches no column, or zero valid rows.
IngestResult ingest_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Parses "SIZE:DURATION" into the rate fields of `options`.
void set_derive_rate(CsvOptions& options, const std::string& spec);

/// "x,y" header then one row per observation.
void write_sample_csv(std::ostream& out, const BivariateSample& sample);

/// k,hillish,hillish_neg,pickandsish_p<p>...,kendall; undefined entries empty.
void write_cev_traces(std::ostream& out, const TraceBundle& bundle);

/// Reads a file written by write_cev_traces. The sample size is not part
/// of the file and must be supplied. Errors carry path and line.
TraceBundle read_cev_traces(const std::filesystem::path& path, std::size_t sample_size);

struct MarginalTraces {
    std::string variable;
    EVEstimateTrace hill;
    EVEstimateTrace pickands;
    EVEstimateTrace moment;
};

MarginalTraces marginal_traces(std::string variable, std::span<const double> z, const KGrid& kgrid);

/// Long format: variable,k,hill,pickands,moment.
void write_marginal_traces(std::ostream& out, const std::vector<MarginalTraces>& traces);

}  // namespace cevdetect
