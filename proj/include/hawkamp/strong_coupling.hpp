#pragma once

// Single-hot-mode Rabi amplifier.
//
// The atom, the signal mode and one redirected hot mode exchange a quantum
// within the two-state subspace
//   |1> = |g, n_s, n_h>,   |2> = |e, n_s + 1, n_h - 1>
// generated by H = [[0, k], [k, delta]] with k = g_h |phi_h| and
// delta = omega0 + nu - Omega_h. The coupling is the same for every (n_s, n_h)
// branch, so the thermal hot-mode weights only matter for reporting.

#include <complex>
#include <optional>
#include <vector>

#include "hawkamp/ergotropy.hpp"

namespace hawkamp::strong {

using complex = std::complex<double>;

/// |delta| below this counts as resonant.
inline constexpr double kResonanceTolerance = 1e-12;

struct StrongCouplingParams {
    double g_h = 1.0;
    complex phi_h{1.0, 0.0};  // only |phi_h| enters the dynamics
    double omega0 = 1.0;      // atomic transition
    double nu = 1.0;          // signal mode
    double Omega_h = 2.0;     // redirected hot mode
    int n_s = 0;              // initial signal Fock number
    double beta_h = 1.0;      // hot-bath inverse temperature (reporting only)
    int atoms = 1;

    double detuning() const { return omega0 + nu - Omega_h; }
    /// g_h |phi_h|
    double coupling() const { return g_h * std::abs(phi_h); }
    /// sqrt(delta^2 + 4 g_h^2 |phi_h|^2)
    double rabi_frequency() const;

    void validate() const;

    /// Parameters with Omega_h chosen so that detuning() == delta.
    static StrongCouplingParams with_detuning(double coupling, double delta, double omega0 = 1.0, double nu = 1.0);
};

struct AmplitudePair {
    complex u;  // amplitude left in |1>
    complex v;  // amplitude transferred to |2>
};

/// Closed-form propagation of |1> for time t >= 0.
AmplitudePair rabi_amplitudes(const StrongCouplingParams& params, double t);

struct FinalStates {
    ergotropy::DiagonalState atom;    // {|u|^2 on g, |v|^2 on e}, energies {0, omega0}
    ergotropy::DiagonalState signal;  // ladder 0..n_s+1, weight only on n_s and n_s+1
};

FinalStates final_states(const StrongCouplingParams& params, double t);

/// Erg(rho_s^f) - Erg(|n_s>), evaluated by the passive-state sort.
double ergotropy_gain(const StrongCouplingParams& params, double t);

/// Full-transfer times t_m = (2m+1) pi / (2 g_h |phi_h|), m = 0..m_max.
/// Requires resonance.
std::vector<double> optimal_pulse_times(const StrongCouplingParams& params, int m_max);

/// nu / (omega0 + nu).
double efficiency_strong(double omega0, double nu);

/// Mean quanta moved per single atom passage at time t.
struct EnergyAudit {
    double signal_gain;  // nu |v|^2
    double atom_gain;    // omega0 |v|^2
    double hot_loss;     // Omega_h |v|^2
    double efficiency() const { return signal_gain / hot_loss; }
};
EnergyAudit energy_audit(const StrongCouplingParams& params, double t);

/// N * 2 g_h |phi_h| nu / ((2m+1) pi): the ergotropy gain over t_m, boosted
/// N-fold for collectively coupled atoms. Requires resonance.
double max_power(const StrongCouplingParams& params, int m);

/// Average power N * ergotropy_gain(t) / t; zero at t = 0.
double average_power(const StrongCouplingParams& params, double t);

/// Thermal branch weights p_{n_h} = e^{-beta_h Omega_h n_h} / Z, n_h < levels.
std::vector<double> hot_branch_weights(const StrongCouplingParams& params, std::size_t levels);

struct EfficiencyBounds {
    double eta_ssd;
    double eta_carnot;
    /// T_h / T_c >= Omega_h / omega_c; empty when T_c = 0 (ratio undefined).
    std::optional<bool> carnot_reachable;
};

EfficiencyBounds ssd_carnot_check(double T_h, double T_c, double Omega_h, double omega_c, double nu,
                                  double omega0);

}  // namespace hawkamp::strong
