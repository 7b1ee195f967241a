#pragma once

// Scalar-field mode functions near a Schwarzschild horizon.
//
// Two frequency conventions coexist. The Kruskal-form modes are labelled by
// Omega; the Schwarzschild-form modes psi_1 and psi_2 by nu. They are related
// by Omega = nu for the outgoing plane pair and Omega = 4 nu for the ingoing
// pair, since psi_2(T, X) = (T + X)^{-4 i nu}. `ModeSpec::frequency` is always
// read in the convention native to `kind`; use kruskal_frequency /
// schwarzschild_frequency to translate.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hawkamp/geometry.hpp"

namespace hawkamp::modes {

using complex = std::complex<double>;

/// Mirrors inside this radius have no stable circular orbit.
inline constexpr double kInnermostStableOrbit = 3.0;

enum class ModeKind {
    OutgoingPlane,          // e^{-i Omega (T - X)}
    IngoingRindler,         // (T + X)^{-i Omega} theta(T + X)
    OutgoingRindler,        // (X - T)^{i Omega} theta(X - T)
    MirrorComposite,        // outgoing Rindler minus its mirror reflection
    SchwarzschildOutgoing,  // psi_1(t, r) = exp(i nu e^{-(t - r_*)/2})
    SchwarzschildIngoing,   // psi_2(t, r) = e^{-2 i nu (t + r_*)}
};

const char* to_string(ModeKind kind);
std::optional<ModeKind> mode_kind_from_string(std::string_view name);

struct ModeSpec {
    ModeKind kind = ModeKind::OutgoingPlane;
    double frequency = 1.0;
    std::optional<double> mirror_radius;  // MirrorComposite only

    /// Throws DomainError / StabilityError when the spec is unusable.
    void validate() const;
};

struct ModeValue {
    complex amplitude{0.0, 0.0};
    bool in_support = false;
};

/// Omega for a mode given its Schwarzschild-convention frequency nu.
double kruskal_frequency(ModeKind kind, double nu);
/// nu for a mode given its Kruskal-convention frequency Omega.
double schwarzschild_frequency(ModeKind kind, double omega);

/// Evaluates a mode at a Kruskal point. Points outside a step-function
/// support give amplitude 0 with in_support = false.
ModeValue eval_mode(const ModeSpec& spec, const geometry::KruskalPoint& point);

/// Mode that vanishes on a mirror orbiting at r0:
///   (X - T)^{i Omega} - e^{i Omega (r0 + ln(r0 - 1))} (T + X)^{-i Omega}.
/// Omega = 0 is accepted and returns the trivially vanishing limit.
ModeValue mirror_mode(double omega, double mirror_radius, const geometry::KruskalPoint& point);

/// Evaluates a mode at Schwarzschild (t, r), r > 1. Kruskal-form kinds are
/// mapped through to_kruskal first.
ModeValue eval_schwarzschild_mode(const ModeSpec& spec, double t, double r);

/// -d(arg psi)/dtau along the trajectory by a central difference of the
/// unwrapped phase, psi sampled at tau - h, tau, tau + h. The caller picks h
/// small enough that the phase moves by well under pi per step; a step of
/// exactly pi is rejected, larger ones alias silently.
double instantaneous_frequency(const ModeSpec& spec, const geometry::InfallTrajectory& trajectory,
                               double tau, double h);

/// |int_{t_i}^{t_f} e^{i delta t} phi(t) dt|^2 from samples on a uniform grid
/// covering [t_i, t_f] (endpoints included). Uses Romberg extrapolation when
/// the interval count is a power of two and composite Simpson otherwise.
/// A zero-length window gives 0.
double overlap_integral(std::span<const complex> samples, double t_i, double t_f, double detuning);

/// Same quantity for a callable mode, with Romberg refinement until the
/// relative change of the integral drops below rel_tol.
double overlap_integral(const std::function<complex(double)>& mode, double t_i, double t_f, double detuning,
                        double rel_tol = 1e-8);

/// Both orderings of the double integral defining the ground- and excited-
/// branch overlaps. They coincide for any input since one is the complex
/// conjugate of the other.
struct OverlapPair {
    double ground;   // int e^{-i d t'} phi*(t') dt' * int e^{i d t''} phi(t'') dt''
    double excited;  // int e^{i d t'} phi(t') dt' * int e^{-i d t''} phi*(t'') dt''
};
OverlapPair overlap_pair(std::span<const complex> samples, double t_i, double t_f, double detuning);

struct ModeSample {
    geometry::TrajectorySample point;
    geometry::KruskalPoint kruskal;
    ModeValue value;
};

/// Mode evaluated along the worldline at the given proper times.
std::vector<ModeSample> sample_along(const ModeSpec& spec, const geometry::InfallTrajectory& trajectory,
                                     std::span<const double> taus);

}  // namespace hawkamp::modes
