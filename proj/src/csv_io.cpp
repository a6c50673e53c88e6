#include "cevdetect/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cevdetect/detection.hpp"
#include "cevdetect/number_format.hpp"

namespace cevdetect {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t resolve_column(const std::string& selector, const std::vector<std::string>& header,
                           const std::filesystem::path& path) {
    if (all_digits(selector)) {
        const auto pos = std::stoul(selector);
        if (pos == 0) throw IngestError(IngestError::Code::EmptySelection, path.string() + ": column positions start at 1");
        return pos - 1;
    }
    if (header.empty()) {
        throw IngestError(IngestError::Code::EmptySelection,
                          path.string() + ": column '" + selector + "' selected by name but no header row");
    }
    const auto it = std::find(header.begin(), header.end(), selector);
    if (it == header.end()) {
        throw IngestError(IngestError::Code::EmptySelection, path.string() + ": no column named '" + selector + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::string cell(const MaybeReal& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

void set_derive_rate(CsvOptions& options, const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size() ||
        spec.find(':', colon + 1) != std::string::npos) {
        throw std::invalid_argument("derive-rate expects SIZE:DURATION, got '" + spec + "'");
    }
    options.rate_size = spec.substr(0, colon);
    options.rate_duration = spec.substr(colon + 1);
}

IngestResult ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(IngestError::Code::Unreadable, path.string() + ": cannot open file");

    std::string line;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    if (options.header) {
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            for (auto f : split(line)) header.emplace_back(f);
            break;
        }
    }

    const bool derive = options.rate_size.has_value();
    if (derive != options.rate_duration.has_value()) {
        throw std::invalid_argument("derive-rate needs both a size and a duration column");
    }
    std::vector<std::size_t> cols;  // x (or size), y, [duration]
    cols.push_back(resolve_column(derive ? *options.rate_size : options.col_x, header, path));
    cols.push_back(resolve_column(options.col_y, header, path));
    if (derive) cols.push_back(resolve_column(*options.rate_duration, header, path));
    const std::size_t needed = *std::max_element(cols.begin(), cols.end()) + 1;
    if (!header.empty() && needed > header.size()) {
        throw IngestError(IngestError::Code::EmptySelection,
                          path.string() + ": column position " + std::to_string(needed) + " exceeds the " +
                              std::to_string(header.size()) + " header columns");
    }

    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t rows = 0;
    std::size_t rejected = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++rows;
        const auto fields = split(line);
        if (fields.size() < needed) {
            ++rejected;
            continue;
        }
        std::vector<std::optional<double>> v;
        for (auto c : cols) v.push_back(parse_real(fields[c]));
        if (!std::all_of(v.begin(), v.end(), [](const auto& o) { return o && std::isfinite(*o); })) {
            ++rejected;
            continue;
        }
        const double x = derive ? *v[0] / *v[2] : *v[0];
        if (!std::isfinite(x)) {
            ++rejected;
            continue;
        }
        xs.push_back(x);
        ys.push_back(*v[1]);
    }
    if (in.bad()) throw IngestError(IngestError::Code::Unreadable, path.string() + ": read error");
    if (xs.empty()) {
        throw IngestError(IngestError::Code::NoValidRows, path.string() + ": no valid rows (" +
                                                             std::to_string(rejected) + " rejected)");
    }
    return {BivariateSample(std::move(xs), std::move(ys)), rows, rejected};
}

void write_sample_csv(std::ostream& out, const BivariateSample& sample) {
    out << "x,y\n";
    const auto xs = sample.xs();
    const auto ys = sample.ys();
    for (std::size_t i = 0; i < sample.size(); ++i) out << format_real(xs[i]) << ',' << format_real(ys[i]) << '\n';
}

void write_cev_traces(std::ostream& out, const TraceBundle& bundle) {
    out << "k,hillish,hillish_neg";
    for (const auto& t : bundle.pickandsish) out << ',' << pickandsish_id(t.p);
    out << ",kendall\n";
    for (std::size_t i = 0; i < bundle.kgrid.size(); ++i) {
        out << bundle.kgrid[i] << ',' << format_real(bundle.hillish[i]) << ',' << format_real(bundle.hillish_neg[i]);
        for (const auto& t : bundle.pickandsish) out << ',' << cell(t.values[i]);
        out << ',' << format_real(bundle.kendall[i]) << '\n';
    }
}

TraceBundle read_cev_traces(const std::filesystem::path& path, std::size_t sample_size) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(IngestError::Code::Unreadable, path.string() + ": cannot open file");
    auto fail = [&path](std::size_t line_no, const std::string& msg) {
        return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + msg);
    };

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw fail(1, "empty traces file");
    ++line_no;
    const auto head = split(line);
    const std::string_view prefix = "pickandsish_p";
    if (head.size() < 4 || head[0] != "k" || head[1] != "hillish" || head[2] != "hillish_neg" ||
        head.back() != "kendall") {
        throw fail(line_no, "expected header k,hillish,hillish_neg,pickandsish_p...,kendall");
    }
    std::vector<double> ps;
    for (std::size_t c = 3; c + 1 < head.size(); ++c) {
        if (head[c].substr(0, prefix.size()) != prefix) throw fail(line_no, "unexpected column '" + std::string(head[c]) + "'");
        const auto p = parse_real(head[c].substr(prefix.size()));
        if (!p) throw fail(line_no, "bad probe in column '" + std::string(head[c]) + "'");
        ps.push_back(*p);
    }

    std::vector<std::size_t> ks;
    std::vector<double> hill, hill_neg, kendall;
    std::vector<std::vector<MaybeReal>> pick(ps.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(line);
        if (f.size() != head.size()) throw fail(line_no, "expected " + std::to_string(head.size()) + " fields");
        if (!all_digits(f[0])) throw fail(line_no, "k must be a positive integer");
        ks.push_back(std::stoul(std::string(f[0])));
        auto required = [&](std::string_view s) {
            const auto v = parse_real(s);
            if (!v) throw fail(line_no, "non-numeric value '" + std::string(s) + "'");
            return *v;
        };
        hill.push_back(required(f[1]));
        hill_neg.push_back(required(f[2]));
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const auto s = f[3 + j];
            pick[j].push_back(s.empty() ? MaybeReal{} : MaybeReal{required(s)});
        }
        kendall.push_back(required(f.back()));
    }
    if (ks.empty()) throw fail(line_no, "no trace rows");

    TraceBundle bundle{.sample_size = sample_size, .kgrid = KGrid(std::move(ks)), .hillish = std::move(hill),
                       .hillish_neg = std::move(hill_neg), .pickandsish = {}, .kendall = std::move(kendall)};
    if (bundle.kgrid.max() > sample_size) throw fail(line_no, "grid maximum exceeds the sample size");
    for (std::size_t j = 0; j < ps.size(); ++j) bundle.pickandsish.push_back({ps[j], std::move(pick[j])});
    return bundle;
}

MarginalTraces marginal_traces(std::string variable, std::span<const double> z, const KGrid& kgrid) {
    return {std::move(variable), estimate_trace(z, kgrid, Estimator::Hill), estimate_trace(z, kgrid, Estimator::Pickands),
            estimate_trace(z, kgrid, Estimator::Moment)};
}

void write_marginal_traces(std::ostream& out, const std::vector<MarginalTraces>& traces) {
    out << "variable,k,hill,pickands,moment\n";
    for (const auto& t : traces) {
        for (std::size_t i = 0; i < t.hill.kgrid.size(); ++i) {
            out << t.variable << ',' << t.hill.kgrid[i] << ',' << cell(t.hill.values[i]) << ','
                << cell(t.pickands.values[i]) << ',' << cell(t.moment.values[i]) << '\n';
        }
    }
}

}  // namespace cevdetect
