#include "hawkamp/ergotropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hawkamp::ergotropy {

namespace {

constexpr const char* kModule = "ergotropy";

}  // namespace

DiagonalState::DiagonalState(std::vector<double> probabilities, std::vector<double> energies)
    : p_(std::move(probabilities)), e_(std::move(energies)) {
    if (p_.size() != e_.size()) throw InputError(kModule, "probabilities and energies differ in length");
    if (p_.empty()) throw InputError(kModule, "diagonal state needs at least one level");
    double sum = 0.0;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        if (!std::isfinite(p_[k]) || !std::isfinite(e_[k])) throw InputError(kModule, "non-finite level data");
        if (p_[k] < 0.0) throw InputError(kModule, "negative population");
        sum += p_[k];
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
        std::ostringstream os;
        os << "populations sum to " << sum << ", not 1";
        throw InputError(kModule, os.str());
    }
}

DiagonalState DiagonalState::ladder(std::vector<double> probabilities, double nu) {
    std::vector<double> energies(probabilities.size());
    for (std::size_t k = 0; k < energies.size(); ++k) energies[k] = nu * static_cast<double>(k);
    return DiagonalState(std::move(probabilities), std::move(energies));
}

double DiagonalState::mean_energy() const {
    return std::transform_reduce(p_.begin(), p_.end(), e_.begin(), 0.0);
}

DiagonalState DiagonalState::canonical() const {
    std::vector<std::size_t> order(p_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return e_[a] < e_[b]; });
    std::vector<double> p, e;
    p.reserve(order.size());
    e.reserve(order.size());
    for (std::size_t i : order) {
        p.push_back(p_[i]);
        e.push_back(e_[i]);
    }
    return DiagonalState(std::move(p), std::move(e));
}

DiagonalState passive_state(const DiagonalState& state) {
    std::vector<double> p = state.probabilities();
    std::vector<double> e = state.energies();
    std::sort(p.begin(), p.end(), std::greater<>());
    std::sort(e.begin(), e.end());
    return DiagonalState(std::move(p), std::move(e));
}

double ergotropy_bruteforce(const DiagonalState& state) {
    const double work = state.mean_energy() - passive_state(state).mean_energy();
    // Rearrangement inequality: work >= 0; clip rounding residue.
    return std::max(0.0, work);
}

double thermal_occupancy(const BathSpec& bath) {
    if (std::isinf(bath.beta) && bath.beta > 0) return 0.0;
    const double x = bath.beta * bath.frequency;
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(kModule, "thermal occupancy needs beta * Omega > 0");
    return 1.0 / std::expm1(x);
}

std::vector<double> thermal_populations(const BathSpec& bath, std::size_t levels) {
    std::vector<double> p(levels, 0.0);
    if (levels == 0) return p;
    if (std::isinf(bath.beta) && bath.beta > 0) {
        p[0] = 1.0;
        return p;
    }
    const double x = bath.beta * bath.frequency;
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(kModule, "thermal populations need beta * Omega > 0");
    const double ratio = std::exp(-x);
    const double norm = -std::expm1(-x);  // 1/Z
    double w = norm;
    for (std::size_t n = 0; n < levels; ++n, w *= ratio) p[n] = w;
    return p;
}

double fock_mixture_ergotropy(int n_s, double w_lo, double w_hi, double nu) {
    if (n_s < 0) throw InputError(kModule, "Fock number must be nonnegative");
    if (!(w_lo >= 0.0) || !(w_hi >= 0.0) || std::abs(w_lo + w_hi - 1.0) > kNormalizationTolerance) {
        throw InputError(kModule, "Fock mixture weights must be nonnegative and sum to 1");
    }
    if (!(nu > 0.0)) throw DomainError(kModule, "signal frequency must be positive");
    std::vector<double> p(static_cast<std::size_t>(n_s) + 2, 0.0);
    p[static_cast<std::size_t>(n_s)] = w_lo;
    p[static_cast<std::size_t>(n_s) + 1] = w_hi;
    return ergotropy_bruteforce(DiagonalState::ladder(std::move(p), nu));
}

SignalStateSummary displaced_thermal_summary(double amplitude, double variance, double nu) {
    if (!(variance >= 0.0)) throw InputError(kModule, "P-function variance must be nonnegative");
    if (!(amplitude >= 0.0)) throw InputError(kModule, "displacement magnitude must be nonnegative");
    SignalStateSummary s;
    s.amplitude = amplitude;
    s.variance = variance;
    s.frequency = nu;
    s.ergotropy = nu * amplitude * amplitude;
    s.thermal = nu * variance;
    s.mean = s.ergotropy + s.thermal;
    return s;
}

double displaced_thermal_tail_bound(double amplitude, double variance, int n) {
    const double a2 = amplitude * amplitude;
    double best = 1.0;
    // Scan z - 1 = s over (0, 1/sigma^2); any s gives a valid bound.
    const double s_max = variance > 0 ? 1.0 / variance : 50.0;
    for (int k = 1; k <= 400; ++k) {
        const double s = s_max * k / 401.0;
        const double denom = 1.0 - s * variance;
        const double log_g = s * a2 / denom - std::log(denom);
        const double log_bound = log_g - n * std::log1p(s);
        best = std::min(best, std::exp(log_bound));
    }
    return best;
}

int fock_cutoff(double amplitude, double variance, double tail) {
    const double sigma = std::sqrt(variance);
    int n = static_cast<int>(std::ceil(amplitude * amplitude + 10.0 * (amplitude + sigma) + 20.0));
    while (displaced_thermal_tail_bound(amplitude, variance, n + 1) > tail) ++n;
    return n;
}

}  // namespace hawkamp::ergotropy
