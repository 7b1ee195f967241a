#pragma once

// Composite Newton-Cotes and Romberg rules for complex integrands.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hawkamp::quadrature {

using complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Composite Simpson on uniformly spaced samples with spacing h. An odd
/// interval count closes with the 3/8 rule over the last three intervals.
inline complex simpson(std::span<const complex> f, double h) {
    const std::size_t intervals = f.size() - 1;
    if (f.size() < 2) return {};
    if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
    std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    complex sum{};
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    }
    if (simpson_end != intervals) {
        const std::size_t i = simpson_end;
        sum += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
    return sum;
}

/// Romberg extrapolation over the nested trapezoid sums available on a grid
/// of 2^k + 1 uniformly spaced samples.
inline complex romberg_samples(std::span<const complex> f, double h) {
    const std::size_t intervals = f.size() - 1;
    std::vector<complex> row;
    for (std::size_t stride = intervals; stride >= 1; stride /= 2) {
        complex trap = 0.5 * (f.front() + f.back());
        for (std::size_t i = stride; i < intervals; i += stride) trap += f[i];
        row.push_back(trap * (h * static_cast<double>(stride)));
        if (stride == 1) break;
    }
    // row[k] uses 2^k intervals; extrapolate in place.
    for (std::size_t level = 1; level < row.size(); ++level) {
        const double factor = std::pow(4.0, static_cast<double>(level));
        for (std::size_t k = row.size() - 1; k >= level; --k) {
            row[k] = (factor * row[k] - row[k - 1]) / (factor - 1.0);
            if (k == level) break;
        }
    }
    return row.back();
}

/// Romberg integration of a callable on [a, b]. Returns nullopt when the
/// diagonal has not settled to rel_tol after max_level halvings. abs_floor
/// bounds the convergence test for integrals that cancel to ~0.
template <class F>
std::optional<complex> romberg(F&& f, double a, double b, double rel_tol, double abs_floor,
                               int max_level = 22, int min_level = 4) {
    std::vector<complex> prev, cur;
    double h = b - a;
    complex trap = 0.5 * h * (f(a) + f(b));
    prev.push_back(trap);
    std::size_t n = 1;
    for (int level = 1; level <= max_level; ++level) {
        complex mid{};
        for (std::size_t i = 0; i < n; ++i) mid += f(a + (static_cast<double>(i) + 0.5) * h);
        trap = 0.5 * trap + 0.5 * h * mid;
        h *= 0.5;
        n *= 2;
        cur.assign(1, trap);
        double factor = 4.0;
        for (std::size_t j = 1; j <= prev.size(); ++j, factor *= 4.0) {
            cur.push_back((factor * cur[j - 1] - prev[j - 1]) / (factor - 1.0));
        }
        const double change = std::abs(cur.back() - prev.back());
        if (level >= min_level && change <= std::max(rel_tol * std::abs(cur.back()), abs_floor)) {
            return cur.back();
        }
        prev.swap(cur);
    }
    return std::nullopt;
}

}  // namespace hawkamp::quadrature
