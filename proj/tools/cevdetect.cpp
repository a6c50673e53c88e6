// Command-line front end: compute, simulate, detect, limits, marginals.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cevdetect/runner.hpp"

namespace {

struct Flags {
    std::optional<std::string> input;
    std::string col_x = "1";
    std::string col_y = "2";
    std::optional<std::string> derive_rate;
    bool header = false;
    std::optional<std::size_t> kmin;
    std::optional<std::size_t> kmax;
    std::size_t kcount = 50;
    std::string kspacing = "log";
    std::vector<double> p;
    std::optional<std::string> model;
    std::optional<double> rho;
    std::optional<std::size_t> n;
    std::uint64_t seed = 1;
    std::optional<double> eps_hillish;
    std::optional<double> eps_pickandsish;
    std::optional<double> window_frac;
    std::optional<std::string> out_dir;
};

cevdetect::RunConfig to_config(const Flags& f) {
    using namespace cevdetect;
    RunConfig c;
    if (f.input) c.input = *f.input;
    if (f.model) {
        if (*f.model == "example1") {
            if (f.rho) throw std::invalid_argument("--rho applies to example2 only");
            c.model = ModelSpec::example1();
        } else {
            if (!f.rho) throw std::invalid_argument("--model example2 requires --rho");
            c.model = ModelSpec::example2(*f.rho);
        }
    } else if (f.rho) {
        throw std::invalid_argument("--rho requires --model example2");
    }
    c.csv.col_x = f.col_x;
    c.csv.col_y = f.col_y;
    c.csv.header = f.header;
    if (f.derive_rate) set_derive_rate(c.csv, *f.derive_rate);
    c.n = f.n;
    c.seed = f.seed;
    c.kmin = f.kmin;
    c.kmax = f.kmax;
    c.kcount = f.kcount;
    c.spacing = f.kspacing == "linear" ? GridSpacing::Linear : GridSpacing::Log;
    c.p_values = f.p;
    if (f.eps_hillish) c.detection.eps_hillish = *f.eps_hillish;
    if (f.eps_pickandsish) c.detection.eps_pickandsish = *f.eps_pickandsish;
    if (f.window_frac) c.detection.window_frac = *f.window_frac;
    c.detection.validate();
    if (f.out_dir) c.out_dir = *f.out_dir;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional extreme value diagnostics on bivariate samples"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--input", f.input, "CSV data file (compute, marginals) or traces file (detect)");
    app.add_option("--col-x", f.col_x, "X column: header name or 1-based position")->capture_default_str();
    app.add_option("--col-y", f.col_y, "Y column (conditioning variable)")->capture_default_str();
    app.add_option("--derive-rate", f.derive_rate, "SIZE:DURATION, use size/duration as X");
    app.add_flag("--header", f.header, "first row holds column names");
    app.add_option("--kmin", f.kmin, "smallest k of the grid")->check(CLI::Range(std::size_t{2}, SIZE_MAX));
    app.add_option("--kmax", f.kmax, "largest k of the grid")->check(CLI::Range(std::size_t{2}, SIZE_MAX));
    app.add_option("--kcount", f.kcount, "number of grid points")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--kspacing", f.kspacing, "grid spacing")->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
    app.add_option("--p", f.p, "Pickandsish probe in (0,1); repeatable")->take_all()->allow_extra_args(false);
    app.add_option("--model", f.model, "simulated model")->check(CLI::IsMember({"example1", "example2"}));
    app.add_option("--rho", f.rho, "example2 parameter in (0,1)");
    app.add_option("--n", f.n, "sample size to simulate, or behind a traces file");
    app.add_option("--seed", f.seed, "random seed")->capture_default_str();
    app.add_option("--eps-hillish", f.eps_hillish, "Hillish tolerance around 1");
    app.add_option("--eps-pickandsish", f.eps_pickandsish, "Pickandsish tolerance around 0");
    app.add_option("--window-frac", f.window_frac, "stability window as a fraction of admissible grid points");
    app.add_option("--out-dir", f.out_dir, "directory for output files");

    auto* compute = app.add_subcommand("compute", "traces, marginal traces and verdict from data or a model");
    auto* simulate = app.add_subcommand("simulate", "write a simulated sample");
    auto* detect = app.add_subcommand("detect", "verdict from a traces file");
    auto* limits = app.add_subcommand("limits", "closed-form and numerical limit constants");
    auto* marginals = app.add_subcommand("marginals", "extreme value index traces of each variable");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = to_config(f);
        if (compute->parsed()) {
            cevdetect::run_compute(config, std::cerr);
        } else if (simulate->parsed()) {
            cevdetect::run_simulate(config, std::cerr);
        } else if (detect->parsed()) {
            cevdetect::run_detect(config, std::cerr);
        } else if (limits->parsed()) {
            cevdetect::run_limits(config, std::cout);
        } else if (marginals->parsed()) {
            cevdetect::run_marginals(config, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
