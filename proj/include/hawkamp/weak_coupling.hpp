#pragma once

// Continuously operating amplifier: the atom is held at its cold-bath steady
// state and pumps the signal through the hot-mode Raman coupling. The signal's
// P-function obeys a Fokker-Planck equation with gain G and diffusion D, so
// an initial coherent state stays Gaussian.

#include <complex>
#include <span>
#include <vector>

#include "hawkamp/errors.hpp"

namespace hawkamp::weak {

using complex = std::complex<double>;

struct WeakCouplingParams {
    double g_h = 1.0;
    double overlap_sq = 1.0;  // |I_{h,gi}|^2 = |I_{h,ei}|^2
    double n_h = 1.0;         // hot-mode mean occupancy
    double n_c = 0.0;         // cold-bath mean occupancy
    double nu = 1.0;
    double Omega_h = 2.0;
    complex alpha0{1.0, 0.0};
    int atoms = 1;

    void validate() const;
    /// n_h > n_c: the baths are inverted and the signal grows.
    bool amplifying() const { return n_h > n_c; }
};

struct Populations {
    double ground;
    double excited;
};

/// rho_ee / rho_gg = n_c / (n_c + 1), normalized. n_c = +inf gives (1/2, 1/2).
Populations steady_state_populations(double n_c);

struct GainDiffusion {
    double gain;       // G
    double diffusion;  // D
};

/// G = 2 g^2 I^2 (n_h - n_c) / (2 n_c + 1),  D = 2 g^2 I^2 n_h (n_c + 1) / (2 n_c + 1).
GainDiffusion gain_diffusion(const WeakCouplingParams& params);

/// Same coefficients from the steady populations:
/// G = 2 g^2 I^2 (n_h rho_gg - (n_h + 1) rho_ee),  D = 2 g^2 I^2 n_h rho_gg.
GainDiffusion gain_diffusion_from_populations(const WeakCouplingParams& params);

struct GaussianPState {
    complex mean;     // alpha(t)
    double variance;  // sigma^2(t)

    /// <n> = |alpha|^2 + sigma^2
    double mean_photons() const { return std::norm(mean) + variance; }
};

/// alpha(t) = alpha0 e^{G t / 2},  sigma^2(t) = (D / G)(e^{G t} - 1), with the
/// G = 0 limit sigma^2 = D t. Negative G (attenuation) uses the same forms.
GaussianPState evolve_p_function(complex alpha0, double gain, double diffusion, double t);

/// Integrates d<n>/dt = G <n> + D from <n>(0) = n0 with an adaptive
/// Runge-Kutta stepper at relative tolerance tol.
double photon_number_ode(double n0, double gain, double diffusion, double t, double tol = 1e-10);

struct WorkPower {
    double work;   // N nu |alpha0|^2 e^{G t}
    double power;  // G * work
};

WorkPower work_and_power(complex alpha0, double gain, double nu, double t, int atoms = 1);

/// n_h (n_c + 1) / (n_h - n_c); equals D / G.
double noise_ratio(double n_h, double n_c);

/// (nu / Omega_h) |alpha0|^2 / (|alpha(t)|^2 + n_h (n_c + 1)/(n_h - n_c)),
/// with |alpha(t)|^2 = |alpha0|^2 e^{G t}.
double efficiency_weak(double nu, double Omega_h, complex alpha0, double t, double gain, double n_h, double n_c);

struct EnergySplitRow {
    double gain;
    double ergotropy;  // nu |alpha0|^2 e^{G t}
    double thermal;    // nu c (e^{G t} - 1)
    double mean;       // ergotropy + thermal
};

/// Ergotropy / thermal split of the amplified signal across a gain grid, with
/// c = D / G held fixed.
std::vector<EnergySplitRow> energy_split_vs_gain(complex alpha0, double nu, double ratio_c,
                                                 std::span<const double> gains, double t);

}  // namespace hawkamp::weak
