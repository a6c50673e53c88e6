#include "cevdetect/runner.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cevdetect/number_format.hpp"

namespace cevdetect {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<double> kLimitProbes{0.5};

std::filesystem::path output_dir(const RunConfig& config) {
    const auto dir = config.out_dir.value_or(".");
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path, std::ostream& log) {
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
    log << "wrote " << path.string() << '\n';
}

Json maybe(const MaybeReal& v) { return v ? Json(*v) : Json(nullptr); }

Json report_json(const StabilityReport& r) {
    Json j;
    j["statistic"] = r.statistic_id;
    j["k_lo"] = r.k_lo;
    j["k_hi"] = r.k_hi;
    j["level"] = maybe(r.level);
    j["dispersion"] = maybe(r.dispersion);
    j["iqr"] = maybe(r.iqr);
    j["undefined_count"] = r.undefined_count;
    j["stable"] = r.stable;
    return j;
}

Json thresholds_json(const DetectionConfig& c) {
    Json j;
    j["admissible_lo_frac"] = c.admissible_lo_frac;
    j["admissible_hi_frac"] = c.admissible_hi_frac;
    j["window_frac"] = c.window_frac;
    j["min_window"] = c.min_window;
    j["dispersion_rank"] = c.dispersion_rank;
    j["dispersion_pickandsish"] = c.dispersion_ratio;
    j["max_undefined_frac"] = c.max_undefined_frac;
    j["eps_hillish"] = c.eps_hillish;
    j["eps_pickandsish"] = c.eps_pickandsish;
    j["eps_kendall"] = c.eps_kendall;
    return j;
}

void write_verdict(const DetectionVerdict& v, const TraceBundle& bundle, Json source, const std::filesystem::path& path,
                   std::ostream& log) {
    Json j;
    j["verdict"] = std::string(to_string(v.verdict));
    j["sample_size"] = bundle.sample_size;
    j["source"] = std::move(source);
    j["kgrid"] = std::vector<std::size_t>(bundle.kgrid.values().begin(), bundle.kgrid.values().end());
    j["p_values"] = bundle.p_values();
    j["thresholds"] = thresholds_json(v.thresholds);
    Json evidence = Json::array();
    for (const auto& r : v.evidence) evidence.push_back(report_json(r));
    j["evidence"] = std::move(evidence);
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    finish(out, path, log);
}

Json source_json(const RunConfig& config, const IngestResult& ingest) {
    Json j;
    if (config.input) {
        j["input"] = config.input->string();
        j["rows_read"] = ingest.rows_read;
        j["rows_rejected"] = ingest.rows_rejected;
    } else {
        j["model"] = config.model->kind == ModelKind::Example1 ? "example1" : "example2";
        if (config.model->rho) j["rho"] = *config.model->rho;
        j["seed"] = config.seed;
    }
    return j;
}

std::vector<double> probes(const RunConfig& config, const std::vector<double>& fallback) {
    return config.p_values.empty() ? fallback : config.p_values;
}

void write_marginals(const BivariateSample& sample, const KGrid& grid, const std::filesystem::path& path,
                     std::ostream& log) {
    std::vector<MarginalTraces> traces;
    traces.push_back(marginal_traces("x", sample.xs(), grid));
    traces.push_back(marginal_traces("y", sample.ys(), grid));
    auto out = open_output(path);
    write_marginal_traces(out, traces);
    finish(out, path, log);
}

}  // namespace

void RunConfig::validate_source() const {
    if (input.has_value() == model.has_value()) throw std::invalid_argument("give exactly one of --input or --model");
    if (model) {
        model->validate();
        if (!n || *n == 0) throw std::invalid_argument("--model requires --n >= 1");
    }
}

IngestResult load_sample(const RunConfig& config) {
    config.validate_source();
    if (config.input) return ingest_csv(*config.input, config.csv);
    return {simulate(*config.model, *config.n, config.seed), *config.n, 0};
}

KGrid build_grid(const RunConfig& config, std::size_t n, bool marginal) {
    if (n < 2) throw std::invalid_argument("need n >= 2 for a k-grid");
    const bool defaults = !config.kmin && !config.kmax && config.kcount == 50 && config.spacing == GridSpacing::Log;
    if (defaults) return marginal ? KGrid::marginal_default_for(n) : KGrid::default_for(n);
    const std::size_t kmax_default = std::min(n, std::max<std::size_t>(2, marginal ? n / 4 : n / 10));
    const std::size_t kmax = config.kmax.value_or(kmax_default);
    const std::size_t kmin = config.kmin.value_or(std::min<std::size_t>(marginal ? 2 : 10, kmax));
    if (kmax > n) {
        throw std::invalid_argument("kmax " + std::to_string(kmax) + " exceeds sample size " + std::to_string(n));
    }
    return KGrid::spaced(kmin, kmax, config.kcount, config.spacing);
}

DetectionVerdict run_compute(const RunConfig& config, std::ostream& log) {
    const auto ingest = load_sample(config);
    const auto& sample = ingest.sample;
    if (config.input) log << "read " << ingest.rows_read << " rows, rejected " << ingest.rows_rejected << '\n';
    const auto grid = build_grid(config, sample.size(), false);
    const auto bundle = compute_traces(sample, grid, probes(config, kDefaultProbes));
    const auto verdict = product_verdict(bundle, config.detection);

    const auto dir = output_dir(config);
    {
        const auto path = dir / "cev_traces.csv";
        auto out = open_output(path);
        write_cev_traces(out, bundle);
        finish(out, path, log);
    }
    const bool grid_overridden = config.kmin || config.kmax || config.kcount != 50 || config.spacing != GridSpacing::Log;
    write_marginals(sample, grid_overridden ? grid : build_grid(config, sample.size(), true),
                    dir / "marginal_traces.csv", log);
    write_verdict(verdict, bundle, source_json(config, ingest), dir / "verdict.json", log);
    log << "verdict " << to_string(verdict.verdict) << '\n';
    return verdict;
}

void run_simulate(const RunConfig& config, std::ostream& log) {
    if (config.input) throw std::invalid_argument("simulate takes --model, not --input");
    const auto ingest = load_sample(config);
    const auto path = output_dir(config) / "sample.csv";
    auto out = open_output(path);
    write_sample_csv(out, ingest.sample);
    finish(out, path, log);
}

DetectionVerdict run_detect(const RunConfig& config, std::ostream& log) {
    if (!config.input) throw std::invalid_argument("detect requires --input (a cev_traces.csv file)");
    if (config.model) throw std::invalid_argument("detect takes --input, not --model");
    if (!config.n) throw std::invalid_argument("detect requires --n (the sample size behind the traces)");
    const auto bundle = read_cev_traces(*config.input, *config.n);
    const auto verdict = product_verdict(bundle, config.detection);
    Json source;
    source["traces"] = config.input->string();
    write_verdict(verdict, bundle, std::move(source), output_dir(config) / "verdict.json", log);
    log << "verdict " << to_string(verdict.verdict) << '\n';
    return verdict;
}

void run_limits(const RunConfig& config, std::ostream& out) {
    if (config.input) throw std::invalid_argument("limits takes --model, not --input");
    const ModelSpec model = config.model.value_or(ModelSpec::example1());
    model.validate();
    const auto ps = probes(config, kLimitProbes);
    for (double p : ps) {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p probes must lie in (0,1)");
    }
    constexpr double kTol = 1e-9;

    struct Row {
        std::string quantity;
        MaybeReal closed;
        MaybeReal numeric;
    };
    std::vector<Row> rows;
    if (model.kind == ModelKind::Example1) {
        const auto spec = product_spec();
        rows.push_back({"hillish", 1.0, numeric_I_mustar(spec, kTol)});
        rows.push_back({"kendall", 0.0, numeric_J_mustar(spec, kTol)});
        for (double p : ps) rows.push_back({pickandsish_id(p), 0.0, pickandsish_limit(spec, p)});
    } else {
        const double rho = *model.rho;
        const auto spec = example2_spec(rho);
        rows.push_back({"hillish", hillish_limit_ex2(rho), numeric_I_mustar(spec, kTol)});
        rows.push_back({"kendall", kendall_limit_ex2(rho), numeric_J_mustar(spec, kTol)});
        for (double p : ps) rows.push_back({pickandsish_id(p), pickandsish_limit_ex2(rho, p), pickandsish_limit(spec, p)});
    }

    auto diff = [](const Row& r) -> MaybeReal {
        if (!r.closed || !r.numeric) return std::nullopt;
        return std::abs(*r.closed - *r.numeric);
    };
    auto text = [](const MaybeReal& v) -> std::string {
        if (!v) return "undefined";
        std::ostringstream s;
        s << std::setprecision(10) << *v;
        return s.str();
    };

    out << "model " << (model.kind == ModelKind::Example1 ? "example1" : "example2");
    if (model.rho) out << " rho " << format_real(*model.rho);
    out << '\n';
    out << std::left << std::setw(22) << "quantity" << std::setw(20) << "closed_form" << std::setw(20) << "numerical"
        << "abs_diff" << '\n';
    for (const auto& r : rows) {
        out << std::setw(22) << r.quantity << std::setw(20) << text(r.closed) << std::setw(20) << text(r.numeric)
            << text(diff(r)) << '\n';
    }

    if (config.out_dir) {
        const auto path = output_dir(config) / "limits.csv";
        auto csv = open_output(path);
        csv << "quantity,closed_form,numerical,abs_diff\n";
        auto cell = [](const MaybeReal& v) { return v ? format_real(*v) : std::string(); };
        for (const auto& r : rows) {
            csv << r.quantity << ',' << cell(r.closed) << ',' << cell(r.numeric) << ',' << cell(diff(r)) << '\n';
        }
        finish(csv, path, out);
    }
}

void run_marginals(const RunConfig& config, std::ostream& log) {
    const auto ingest = load_sample(config);
    if (config.input) log << "read " << ingest.rows_read << " rows, rejected " << ingest.rows_rejected << '\n';
    const auto grid = build_grid(config, ingest.sample.size(), true);
    write_marginals(ingest.sample, grid, output_dir(config) / "marginal_traces.csv", log);
}

}  // namespace cevdetect
