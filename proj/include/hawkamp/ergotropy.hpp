#pragma once

// Ergotropy (maximal cyclic-unitary work) of diagonal states, plus the
// closed forms used for Fock mixtures and displaced thermal signals.
// Energies are in frequency units with hbar = 1.

#include <limits>
#include <vector>

#include "hawkamp/errors.hpp"

namespace hawkamp::ergotropy {

inline constexpr double kNormalizationTolerance = 1e-12;

/// Populations p_k on levels E_k. Construction validates p_k >= 0 and
/// sum p_k = 1 within kNormalizationTolerance.
class DiagonalState {
public:
    DiagonalState(std::vector<double> probabilities, std::vector<double> energies);

    /// Pure Fock-ladder mixture on levels {0, 1, ..., size-1} with spacing nu.
    static DiagonalState ladder(std::vector<double> probabilities, double nu);

    const std::vector<double>& probabilities() const { return p_; }
    const std::vector<double>& energies() const { return e_; }
    std::size_t size() const { return p_.size(); }

    double mean_energy() const;

    /// Same state with levels reordered so energies are nondecreasing.
    DiagonalState canonical() const;

private:
    std::vector<double> p_;
    std::vector<double> e_;
};

/// Populations sorted descending onto energies sorted ascending.
DiagonalState passive_state(const DiagonalState& state);

/// <E> - <E>_passive; zero exactly when the state is already passive.
double ergotropy_bruteforce(const DiagonalState& state);

/// Bosonic bath with inverse temperature beta (may be +inf for T = 0) and
/// mode frequency.
struct BathSpec {
    double beta = std::numeric_limits<double>::infinity();
    double frequency = 1.0;

    static BathSpec zero_temperature(double frequency) {
        return {std::numeric_limits<double>::infinity(), frequency};
    }
};

/// Bose occupancy 1/(e^{beta Omega} - 1); 0 at beta = inf.
double thermal_occupancy(const BathSpec& bath);

/// Gibbs weights e^{-beta Omega n}/Z for n = 0..levels-1, with Z summed over
/// the infinite ladder.
std::vector<double> thermal_populations(const BathSpec& bath, std::size_t levels);

/// Ergotropy of w_lo |n_s><n_s| + w_hi |n_s+1><n_s+1| on the ladder 0..n_s+1.
/// Equals nu (n_s + w_hi - w_lo) when w_hi >= w_lo and nu n_s otherwise.
double fock_mixture_ergotropy(int n_s, double w_lo, double w_hi, double nu);

/// Energy bookkeeping for a displaced thermal signal with Gaussian
/// P-function of mean |alpha| and variance sigma^2.
struct SignalStateSummary {
    double amplitude = 0.0;  // |alpha|
    double variance = 0.0;   // sigma^2
    double frequency = 0.0;  // nu
    double ergotropy = 0.0;  // nu |alpha|^2
    double thermal = 0.0;    // nu sigma^2
    double mean = 0.0;       // ergotropy + thermal
};

SignalStateSummary displaced_thermal_summary(double amplitude, double variance, double nu);

/// Fock cutoff for a truncated displaced-thermal density matrix:
/// the smallest N with N >= |alpha|^2 + 10 (|alpha| + sigma) + 20 whose
/// tail bound (displaced_thermal_tail_bound) is below `tail`.
int fock_cutoff(double amplitude, double variance, double tail = 1e-10);

/// Chernoff upper bound on P(photon number >= n) for a displaced thermal
/// state, using the generating function
///   E[z^n] = exp((z-1)|alpha|^2 / (1 - (z-1) sigma^2)) / (1 - (z-1) sigma^2).
double displaced_thermal_tail_bound(double amplitude, double variance, int n);

}  // namespace hawkamp::ergotropy
