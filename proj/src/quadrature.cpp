#include "cevdetect/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace cevdetect {

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; the
// odd-indexed abscissae and the centre are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    std::array<double, 7> lo{};
    std::array<double, 7> hi{};
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        lo[i] = f(centre - dx);
        hi[i] = f(centre + dx);
        kronrod += kKronrodWeights[i] * (lo[i] + hi[i]);
        abs_sum += kKronrodWeights[i] * (std::abs(lo[i]) + std::abs(hi[i]));
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (lo[i] + hi[i]);
    }
    // QUADPACK's error estimate: |K - G| scaled against the spread of f
    // about its mean, which is far less optimistic than |K - G| alone.
    const double mean = 0.5 * kronrod;
    double spread = kKronrodWeights[7] * std::abs(fc - mean);
    for (std::size_t i = 0; i < 7; ++i) {
        spread += kKronrodWeights[i] * (std::abs(lo[i] - mean) + std::abs(hi[i] - mean));
    }
    const double scale = std::abs(half);
    spread *= scale;
    abs_sum *= scale;
    double error = std::abs((kronrod - gauss) * half);
    if (spread != 0.0 && error != 0.0) error = spread * std::min(1.0, std::pow(200.0 * error / spread, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) error = std::max(50.0 * eps * abs_sum, error);
    return {a, b, kronrod * half, error};
}

bool by_error(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals) {
    std::vector<Panel> heap{gauss_kronrod(f, a, b)};
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(b - a);

    auto totals = [&heap] {
        double value = 0.0;
        double error = 0.0;
        for (const auto& p : heap) {
            value += p.value;
            error += p.error;
        }
        return std::pair{value, error};
    };

    auto [value, error] = totals();
    while (true) {
        const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
        if (error <= std::max(abs_tol, floor)) {
            return {value, error, heap.size(), true};
        }
        if (heap.size() >= max_intervals) break;
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Panel worst = heap.back();
        heap.pop_back();
        if (worst.b - worst.a <= min_width) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_error);
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod(f, worst.a, mid);
        Panel right = gauss_kronrod(f, mid, worst.b);
        // A jump hiding between a panel edge and its outermost node gives
        // both halves a zero estimate; the parent/children mismatch exposes it.
        const double mismatch = 0.5 * std::abs(worst.value - (left.value + right.value));
        left.error = std::max(left.error, mismatch);
        right.error = std::max(right.error, mismatch);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        std::tie(value, error) = totals();
    }
    return {value, error, heap.size(), false};
}

QuadratureResult integrate_unit_square(const std::function<double(double, double)>& f, double abs_tol) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be > 0");
    const double inner_tol = 0.1 * abs_tol;
    const double outer_tol = 0.5 * abs_tol;
    double inner_error_total = 0.0;
    std::size_t inner_panels = 0;

    auto inner = [&](double v) {
        const auto r = integrate_adaptive([&](double u) { return f(u, v); }, 0.0, 1.0, inner_tol);
        if (!r.converged) {
            std::ostringstream msg;
            msg << "inner quadrature did not converge at v=" << v << " (estimate " << r.value
                << ", error " << r.error_estimate << ", " << r.intervals << " panels)";
            throw QuadratureError(msg.str(), r);
        }
        inner_error_total = std::max(inner_error_total, r.error_estimate);
        inner_panels += r.intervals;
        return r.value;
    };

    auto outer = integrate_adaptive(inner, 0.0, 1.0, outer_tol);
    if (!outer.converged) {
        std::ostringstream msg;
        msg << "outer quadrature did not converge (estimate " << outer.value << ", error "
            << outer.error_estimate << ", " << outer.intervals << " panels)";
        throw QuadratureError(msg.str(), outer);
    }
    outer.error_estimate += inner_error_total;
    outer.intervals += inner_panels;
    return outer;
}

}  // namespace cevdetect
