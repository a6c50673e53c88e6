#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "cevdetect/kgrid.hpp"
#include "cevdetect/rank_core.hpp"

namespace cevdetect {

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Reproducible uniform stream. Each (seed, stream) pair seeds its own
/// std::mt19937_64 through one SplitMix64 step, so substreams for different
/// variables are decorrelated and identical on every platform. Uniforms are
/// built from the top 53 bits as (m + 0.5) / 2^53, strictly inside (0, 1).
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream);
    double uniform_open();

private:
    std::mt19937_64 engine_;
};

/// u^{-1/alpha}: inverse transform for P(Z > z) = z^{-alpha}, z >= 1.
double pareto_quantile(double u, double alpha);

/// Standard normal quantile; used to draw normals by inversion.
double normal_quantile(double u);

/// Standard normal distribution function.
double normal_cdf(double x);

// ---------------------------------------------------------------------------
// Simulated models
// ---------------------------------------------------------------------------

enum class ModelKind { Example1, Example2 };

/// Example1: X ~ N(0,1) independent of Y ~ Pareto(1); the limit measure
/// is a product.
/// Example2: X ~ Pareto(rho), Z ~ Pareto(1-rho) independent, Y = min(X, Z);
/// a non-product limit for every rho in (0,1).
struct ModelSpec {
    ModelKind kind = ModelKind::Example1;
    std::optional<double> rho;

    static ModelSpec example1() { return {ModelKind::Example1, std::nullopt}; }
    static ModelSpec example2(double rho);

    /// Throws unless rho is present exactly for Example2 and lies in (0,1).
    void validate() const;
};

/// (x, y) for Example2 from the two underlying uniforms.
std::pair<double, double> example2_pair(double u_x, double u_z, double rho);

/// n draws of the model. Stream 0 drives X, stream 1 drives Y (Example1)
/// or Z (Example2). Deterministic in (spec, n, seed).
BivariateSample simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed);

/// n i.i.d. Pareto(alpha) draws from stream 0.
std::vector<double> simulate_pareto(std::size_t n, double alpha, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Limit measures and limit constants
// ---------------------------------------------------------------------------

/// Analytic description of a standardized limit measure mu* through the
/// limit law H of the normalized X and the scaling functions
/// psi1(c) = c^e, psi2(c) = coeff (c^e - 1)/e (coeff log c when e == 0).
struct MuStarSpec {
    std::function<double(double)> cdf;         ///< H
    std::function<double(double)> quantile;    ///< H^{<-} on (0,1)
    double psi1_exponent = 0.0;
    double psi2_coeff = 0.0;
    /// (x, y) -> mu*([-inf, x] x (y, inf]) for y > 0.
    std::function<double(double, double)> upper;
    /// Density of the absolutely continuous part of dC. Any singular part of
    /// dC must sit where C vanishes, otherwise integrals against it are wrong.
    /// Empty when no density is available.
    std::function<double(double, double)> copula_density;

    double psi1(double c) const;
    double psi2(double c) const;

    /// C(x, y) = mu*([-inf, H^{<-}(x)] x [1/y, inf]) on [0,1]^2.
    double copula(double x, double y) const;
};

/// Product measure H x nu_1 with H standard normal (the Example1 limit).
MuStarSpec product_spec();

/// Example2 limit: mu*([0,x] x (y,inf]) = (1/y)(1 - (y/x)^rho) for x >= y,
/// H(x) = 1 - x^{-rho} on [1, inf), psi1(c) = c, psi2 = 0.
MuStarSpec example2_spec(double rho);

/// Builds `upper` from H and the scaling functions via
/// mu*([-inf,x] x (y,inf]) = (1/y) H(psi1(1/y) x + psi2(1/y)).
MuStarSpec scaling_family_spec(std::function<double(double)> cdf, std::function<double(double)> quantile,
                               double psi1_exponent, double psi2_coeff);

/// Hillish limit I = int_1^inf int_1^inf mu*([-inf, H^{<-}(1/x)] x (y,inf]) dx/x dy/y,
/// computed on the unit square after x = 1/u, y = 1/v. Throws QuadratureError
/// on non-convergence.
double numeric_I_mustar(const MuStarSpec& spec, double tol);

/// Kendall limit J = 4 int C dC - 1 using the copula density.
/// Throws std::invalid_argument("J oracle requires a density") without one.
double numeric_J_mustar(const MuStarSpec& spec, double tol);

/// (H^{<-}(p)(1 - 2^e) - psi2(2)) / (H^{<-}(p) - H^{<-}(p/2)); undefined
/// when the denominator vanishes.
MaybeReal pickandsish_limit(const MuStarSpec& spec, double p);

/// Example2 Hillish limit (rho/(1-rho)) sum_{k>=2} (-1)^k C(1/rho, k) / k.
double hillish_limit_ex2(double rho);

/// Example2 Pickandsish limit -1 / (1 - ((1-p)/(1-p/2))^{1/rho}).
double pickandsish_limit_ex2(double rho, double p);

/// Example2 Kendall limit, -rho.
double kendall_limit_ex2(double rho);

}  // namespace cevdetect
