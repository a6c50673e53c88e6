#include "cevdetect/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include <boost/math/distributions/normal.hpp>

#include "cevdetect/quadrature.hpp"

namespace cevdetect {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void require_rho(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// u = s^2 (3 - 2s) stretches both ends of (0,1), where the support of the
// limit integrands narrows like a power of the other coordinate.
double stretch(double s) { return s * s * (3.0 - 2.0 * s); }
double stretch_jacobian(double s) { return 6.0 * s * (1.0 - s); }

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)))) {}

double StreamRng::uniform_open() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double pareto_quantile(double u, double alpha) {
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("pareto_quantile: u must lie in (0,1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("pareto_quantile: alpha must be > 0");
    return std::pow(u, -1.0 / alpha);
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("normal_quantile: u must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), u);
}

double normal_cdf(double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

ModelSpec ModelSpec::example2(double rho) {
    ModelSpec spec{ModelKind::Example2, rho};
    spec.validate();
    return spec;
}

void ModelSpec::validate() const {
    if (kind == ModelKind::Example1) {
        if (rho) throw std::invalid_argument("rho applies to example2 only");
        return;
    }
    if (!rho) throw std::invalid_argument("example2 requires rho");
    require_rho(*rho);
}

std::pair<double, double> example2_pair(double u_x, double u_z, double rho) {
    require_rho(rho);
    const double x = pareto_quantile(u_x, rho);
    const double z = pareto_quantile(u_z, 1.0 - rho);
    return {x, std::min(x, z)};
}

BivariateSample simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate requires n >= 1");
    StreamRng first(seed, 0);
    StreamRng second(seed, 1);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    if (spec.kind == ModelKind::Example1) {
        for (std::size_t i = 0; i < n; ++i) xs[i] = normal_quantile(first.uniform_open());
        for (std::size_t i = 0; i < n; ++i) ys[i] = pareto_quantile(second.uniform_open(), 1.0);
    } else {
        const double rho = *spec.rho;
        for (std::size_t i = 0; i < n; ++i) {
            std::tie(xs[i], ys[i]) = example2_pair(first.uniform_open(), second.uniform_open(), rho);
        }
    }
    return BivariateSample(std::move(xs), std::move(ys));
}

std::vector<double> simulate_pareto(std::size_t n, double alpha, std::uint64_t seed) {
    StreamRng rng(seed, 0);
    std::vector<double> z(n);
    for (auto& v : z) v = pareto_quantile(rng.uniform_open(), alpha);
    return z;
}

double MuStarSpec::psi1(double c) const { return std::pow(c, psi1_exponent); }

double MuStarSpec::psi2(double c) const {
    if (psi2_coeff == 0.0) return 0.0;
    if (psi1_exponent == 0.0) return psi2_coeff * std::log(c);
    return psi2_coeff * (std::pow(c, psi1_exponent) - 1.0) / psi1_exponent;
}

double MuStarSpec::copula(double x, double y) const {
    if (x <= 0.0 || y <= 0.0) return 0.0;
    const double xq = x >= 1.0 ? kInf : quantile(x);
    return upper(xq, 1.0 / y);
}

MuStarSpec product_spec() {
    MuStarSpec spec;
    spec.cdf = normal_cdf;
    spec.quantile = normal_quantile;
    spec.psi1_exponent = 0.0;
    spec.psi2_coeff = 0.0;
    spec.upper = [](double x, double y) { return normal_cdf(x) / y; };
    spec.copula_density = [](double, double) { return 1.0; };
    return spec;
}

MuStarSpec example2_spec(double rho) {
    require_rho(rho);
    MuStarSpec spec;
    spec.cdf = [rho](double x) { return x >= 1.0 ? 1.0 - std::pow(x, -rho) : 0.0; };
    spec.quantile = [rho](double u) { return std::pow(1.0 - u, -1.0 / rho); };
    spec.psi1_exponent = 1.0;
    spec.psi2_coeff = 0.0;
    spec.upper = [rho](double x, double y) {
        if (!(x >= y)) return 0.0;
        return (1.0 - std::pow(y / x, rho)) / y;
    };
    // C(x,y) = y - y^{1-rho}(1-x) where positive. The remaining mass rho lies
    // on the curve 1-x = y^rho (the atom X = Y), where C is zero.
    spec.copula_density = [rho](double x, double y) {
        return (1.0 - x) < std::pow(y, rho) ? (1.0 - rho) * std::pow(y, -rho) : 0.0;
    };
    return spec;
}

MuStarSpec scaling_family_spec(std::function<double(double)> cdf, std::function<double(double)> quantile,
                               double psi1_exponent, double psi2_coeff) {
    MuStarSpec spec;
    spec.cdf = std::move(cdf);
    spec.quantile = std::move(quantile);
    spec.psi1_exponent = psi1_exponent;
    spec.psi2_coeff = psi2_coeff;
    spec.upper = [s = spec](double x, double y) {
        const double c = 1.0 / y;
        if (std::isinf(x)) return x > 0 ? c : 0.0;
        return c * s.cdf(s.psi1(c) * x + s.psi2(c));
    };
    return spec;
}

double numeric_I_mustar(const MuStarSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    auto integrand = [&spec](double s, double v) {
        const double u = stretch(s);
        if (!(u > 0.0 && u < 1.0)) return 0.0;
        return spec.upper(spec.quantile(u), 1.0 / v) / (u * v) * stretch_jacobian(s);
    };
    return integrate_unit_square(integrand, tol).value;
}

double numeric_J_mustar(const MuStarSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (!spec.copula_density) throw std::invalid_argument("J oracle requires a density");
    auto integrand = [&spec](double s, double y) {
        const double x = stretch(s);
        const double density = spec.copula_density(x, y);
        return density == 0.0 ? 0.0 : spec.copula(x, y) * density * stretch_jacobian(s);
    };
    return 4.0 * integrate_unit_square(integrand, tol / 4.0).value - 1.0;
}

MaybeReal pickandsish_limit(const MuStarSpec& spec, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    const double q_full = spec.quantile(p);
    const double q_half = spec.quantile(p / 2.0);
    const double denom = q_full - q_half;
    if (denom == 0.0) return std::nullopt;
    return (q_full * (1.0 - spec.psi1(2.0)) - spec.psi2(2.0)) / denom;
}

double hillish_limit_ex2(double rho) {
    require_rho(rho);
    const double a = 1.0 / rho;
    // signed = (-1)^k C(a, k), advanced by the ratio (k - 1 - a) / k.
    double signed_binom = a * (a - 1.0) / 2.0;
    double sum = 0.0;
    for (std::size_t k = 2; k < 1'000'000; ++k) {
        if (k > 2) signed_binom *= (static_cast<double>(k) - 1.0 - a) / static_cast<double>(k);
        const double term = signed_binom / static_cast<double>(k);
        sum += term;
        if (std::abs(term) < 1e-14) break;
    }
    return rho / (1.0 - rho) * sum;
}

double pickandsish_limit_ex2(double rho, double p) {
    require_rho(rho);
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    return -1.0 / (1.0 - std::pow((1.0 - p) / (1.0 - p / 2.0), 1.0 / rho));
}

double kendall_limit_ex2(double rho) {
    require_rho(rho);
    return -rho;
}

}  // namespace cevdetect
