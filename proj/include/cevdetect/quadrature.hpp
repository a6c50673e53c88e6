#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace cevdetect {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

/// Thrown when an adaptive rule exhausts its interval budget above tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const QuadratureResult& partial() const noexcept { return partial_; }

private:
    QuadratureResult partial_;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: the interval with the
/// largest error estimate is bisected until the summed estimate is <= abs_tol.
/// Never evaluates f at the endpoints. Returns with converged=false when
/// max_intervals is reached. Like any sampling rule it cannot see a feature
/// that lies entirely between the nodes of the first panel.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals = 4000);

/// Iterated adaptive integral of f(u, v) over the unit square: an adaptive
/// outer rule in v whose integrand is itself an adaptive integral in u.
/// Throws QuadratureError if either level fails to converge.
QuadratureResult integrate_unit_square(const std::function<double(double, double)>& f, double abs_tol);

}  // namespace cevdetect
