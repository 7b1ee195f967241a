#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace hawkamp::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Sample {
    double x;
    State<N> y;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 picks |x1 - x0| / 100
    std::size_t max_steps = 1'000'000;
    double min_step_fraction = 1e-15;  // relative to |x|, below this is underflow
};

enum class Status { Ok, StepUnderflow, MaxStepsExceeded, NonFinite };

template <std::size_t N>
struct Result {
    Status status = Status::Ok;
    std::vector<Sample<N>> samples;  // accepted steps, first entry is the initial value
    std::size_t rejected = 0;

    bool ok() const { return status == Status::Ok; }
    const Sample<N>& last() const { return samples.back(); }
};

namespace detail {

// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (const auto& [coef, k] : terms) {
        for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
    }
    return out;
}

}  // namespace detail

/// Integrates dy/dx = f(x, y) from x0 to x1 (either direction). Every accepted
/// step is recorded. Integration stops early with a non-Ok status on step
/// underflow, step budget exhaustion, or a non-finite derivative; the samples
/// gathered so far are kept so callers can report the last valid point.
template <std::size_t N, class Rhs>
Result<N> integrate(Rhs&& f, double x0, const State<N>& y0, double x1, const Options& opt = {}) {
    using namespace detail;
    Result<N> res;
    res.samples.push_back({x0, y0});
    if (x1 == x0) return res;

    const double dir = x1 > x0 ? 1.0 : -1.0;
    double h = opt.initial_step > 0 ? opt.initial_step : std::abs(x1 - x0) / 100.0;
    h = std::min(h, std::abs(x1 - x0));
    double x = x0;
    State<N> y = y0;
    State<N> k1 = f(x, y);

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (dir * (x1 - x) <= 0) return res;
        const bool last = std::abs(x1 - x) <= h;
        const double hs = last ? (x1 - x) : dir * h;

        const State<N> k2 = f(x + c2 * hs, axpy<N>(y, hs, {{a21, &k1}}));
        const State<N> k3 = f(x + c3 * hs, axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = f(x + c4 * hs, axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 =
            f(x + c5 * hs, axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 =
            f(x + hs, axpy<N>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y5 =
            axpy<N>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<N> k7 = f(x + hs, y5);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                    e7 * k7[i]);
            const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(ei) / scale);
            finite = finite && std::isfinite(y5[i]) && std::isfinite(k7[i]);
        }
        if (!finite) {
            // Shrink once; a persistent non-finite derivative is fatal.
            h *= 0.25;
            ++res.rejected;
            if (h < opt.min_step_fraction * std::max(1.0, std::abs(x))) {
                res.status = Status::NonFinite;
                return res;
            }
            continue;
        }

        if (err <= 1.0) {
            x = last ? x1 : x + hs;
            y = y5;
            k1 = k7;
            res.samples.push_back({x, y});
            if (last) return res;
            const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
            h *= std::max(1.0, grow);
        } else {
            ++res.rejected;
            h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
        }
        if (h < opt.min_step_fraction * std::max(1.0, std::abs(x))) {
            res.status = Status::StepUnderflow;
            return res;
        }
    }
    res.status = Status::MaxStepsExceeded;
    return res;
}

}  // namespace hawkamp::ode
