#include "hawkamp/modes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hawkamp/quadrature.hpp"

namespace hawkamp::modes {

namespace {

constexpr const char* kModule = "modes";

[[noreturn]] void domain_fail(const std::string& what) { throw DomainError(kModule, what); }

// b^{i p} for real b > 0.
complex imaginary_power(double base, double p) { return std::polar(1.0, p * std::log(base)); }

ModeValue supported(complex z) { return {z, true}; }
ModeValue unsupported() { return {{0.0, 0.0}, false}; }

void require_frequency(double f) {
    if (!(f > 0.0) || !std::isfinite(f)) domain_fail("mode frequency must be positive and finite");
}

void require_mirror_radius(double r0) {
    if (!(r0 > 1.0) || !std::isfinite(r0)) domain_fail("mirror radius must lie outside the horizon (r0 > 1)");
    if (!(r0 > kInnermostStableOrbit)) {
        std::ostringstream os;
        os << "mirror radius " << r0 << " has no stable circular orbit; it must exceed " << kInnermostStableOrbit;
        throw StabilityError(kModule, os.str());
    }
}

}  // namespace

const char* to_string(ModeKind kind) {
    switch (kind) {
        case ModeKind::OutgoingPlane: return "outgoing_plane";
        case ModeKind::IngoingRindler: return "ingoing_rindler";
        case ModeKind::OutgoingRindler: return "outgoing_rindler";
        case ModeKind::MirrorComposite: return "mirror_composite";
        case ModeKind::SchwarzschildOutgoing: return "schwarzschild_outgoing";
        case ModeKind::SchwarzschildIngoing: return "schwarzschild_ingoing";
    }
    return "unknown";
}

std::optional<ModeKind> mode_kind_from_string(std::string_view name) {
    for (ModeKind k : {ModeKind::OutgoingPlane, ModeKind::IngoingRindler, ModeKind::OutgoingRindler,
                       ModeKind::MirrorComposite, ModeKind::SchwarzschildOutgoing, ModeKind::SchwarzschildIngoing}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

void ModeSpec::validate() const {
    require_frequency(frequency);
    if (kind == ModeKind::MirrorComposite) {
        if (!mirror_radius) domain_fail("mirror_composite mode needs a mirror radius");
        require_mirror_radius(*mirror_radius);
    }
}

double kruskal_frequency(ModeKind kind, double nu) {
    require_frequency(nu);
    switch (kind) {
        case ModeKind::OutgoingPlane:
        case ModeKind::SchwarzschildOutgoing: return nu;
        case ModeKind::IngoingRindler:
        case ModeKind::SchwarzschildIngoing: return 4.0 * nu;
        default: break;
    }
    domain_fail(std::string(to_string(kind)) + " has no Schwarzschild-convention counterpart");
}

double schwarzschild_frequency(ModeKind kind, double omega) {
    require_frequency(omega);
    switch (kind) {
        case ModeKind::OutgoingPlane:
        case ModeKind::SchwarzschildOutgoing: return omega;
        case ModeKind::IngoingRindler:
        case ModeKind::SchwarzschildIngoing: return 0.25 * omega;
        default: break;
    }
    domain_fail(std::string(to_string(kind)) + " has no Schwarzschild-convention counterpart");
}

ModeValue eval_mode(const ModeSpec& spec, const geometry::KruskalPoint& p) {
    spec.validate();
    const double f = spec.frequency;
    switch (spec.kind) {
        case ModeKind::OutgoingPlane:
            return supported(std::polar(1.0, -f * (p.T - p.X)));
        case ModeKind::SchwarzschildOutgoing:
            return supported(std::polar(1.0, -f * (p.T - p.X)));
        case ModeKind::IngoingRindler:
            return p.T + p.X > 0.0 ? supported(imaginary_power(p.T + p.X, -f)) : unsupported();
        case ModeKind::SchwarzschildIngoing:
            return p.T + p.X > 0.0 ? supported(imaginary_power(p.T + p.X, -4.0 * f)) : unsupported();
        case ModeKind::OutgoingRindler:
            return p.X - p.T > 0.0 ? supported(imaginary_power(p.X - p.T, f)) : unsupported();
        case ModeKind::MirrorComposite:
            return mirror_mode(f, *spec.mirror_radius, p);
    }
    return unsupported();
}

ModeValue mirror_mode(double omega, double mirror_radius, const geometry::KruskalPoint& p) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) domain_fail("mirror mode frequency must be >= 0");
    require_mirror_radius(mirror_radius);
    if (p.region != geometry::Region::Exterior || !(p.X - p.T > 0.0) || !(p.X + p.T > 0.0)) {
        domain_fail("mirror mode is defined on the exterior region only");
    }
    const double reflection_phase = omega * (mirror_radius + std::log(mirror_radius - 1.0));
    const complex outgoing = imaginary_power(p.X - p.T, omega);
    const complex reflected = std::polar(1.0, reflection_phase) * imaginary_power(p.T + p.X, -omega);
    return supported(outgoing - reflected);
}

ModeValue eval_schwarzschild_mode(const ModeSpec& spec, double t, double r) {
    spec.validate();
    if (!(r > 1.0 + geometry::kHorizonGuard)) domain_fail("Schwarzschild-form modes require r > 1");
    const double r_star = geometry::regge_wheeler(r);
    switch (spec.kind) {
        case ModeKind::SchwarzschildOutgoing:
            return supported(std::polar(1.0, spec.frequency * std::exp(-0.5 * (t - r_star))));
        case ModeKind::SchwarzschildIngoing:
            return supported(std::polar(1.0, -2.0 * spec.frequency * (t + r_star)));
        default:
            return eval_mode(spec, geometry::to_kruskal(t, r));
    }
}

double instantaneous_frequency(const ModeSpec& spec, const geometry::InfallTrajectory& trajectory, double tau,
                               double h) {
    if (!(h > 0.0)) domain_fail("finite-difference step must be positive");
    if (!trajectory.contains_proper_time(tau - h) || !trajectory.contains_proper_time(tau + h)) {
        domain_fail("finite-difference stencil leaves the trajectory domain");
    }
    complex psi[3];
    for (int k = 0; k < 3; ++k) {
        const auto s = trajectory.at_proper_time(tau + (k - 1) * h);
        const ModeValue v = eval_schwarzschild_mode(spec, s.t, s.r);
        if (!v.in_support || std::abs(v.amplitude) == 0.0) {
            domain_fail("mode leaves its support inside the finite-difference stencil");
        }
        psi[k] = v.amplitude;
    }
    // Nearest-branch continuation between neighbouring samples.
    const double d1 = std::arg(psi[1] / psi[0]);
    const double d2 = std::arg(psi[2] / psi[1]);
    constexpr double kStepLimit = std::numbers::pi * (1.0 - 1e-9);
    if (std::abs(d1) >= kStepLimit || std::abs(d2) >= kStepLimit) {
        domain_fail("phase advances by ~pi per step; reduce h");
    }
    return -(d1 + d2) / (2.0 * h);
}

namespace {

complex oscillatory_integral(std::span<const complex> samples, double t_i, double t_f, double detuning,
                             double sign) {
    const double h = (t_f - t_i) / static_cast<double>(samples.size() - 1);
    std::vector<complex> integrand(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const complex phi = sign > 0 ? samples[k] : std::conj(samples[k]);
        integrand[k] = std::polar(1.0, sign * detuning * (t_i + static_cast<double>(k) * h)) * phi;
    }
    if (quadrature::is_power_of_two(samples.size() - 1)) return quadrature::romberg_samples(integrand, h);
    return quadrature::simpson(integrand, h);
}

bool check_window(std::span<const complex> samples, double t_i, double t_f) {
    if (!std::isfinite(t_i) || !std::isfinite(t_f)) throw InputError(kModule, "window bounds must be finite");
    if (t_f < t_i) domain_fail("overlap window requires t_f >= t_i");
    if (t_f == t_i) return false;
    if (samples.size() < 2) throw InputError(kModule, "overlap integral needs at least two samples");
    for (const complex& z : samples) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InputError(kModule, "mode samples contain NaN or infinity");
        }
    }
    return true;
}

}  // namespace

double overlap_integral(std::span<const complex> samples, double t_i, double t_f, double detuning) {
    if (!check_window(samples, t_i, t_f)) return 0.0;
    return std::norm(oscillatory_integral(samples, t_i, t_f, detuning, +1.0));
}

OverlapPair overlap_pair(std::span<const complex> samples, double t_i, double t_f, double detuning) {
    if (!check_window(samples, t_i, t_f)) return {0.0, 0.0};
    const complex forward = oscillatory_integral(samples, t_i, t_f, detuning, +1.0);
    const complex backward = oscillatory_integral(samples, t_i, t_f, detuning, -1.0);
    // Each product is real up to rounding; keep the real part.
    return {(backward * forward).real(), (forward * backward).real()};
}

double overlap_integral(const std::function<complex(double)>& mode, double t_i, double t_f, double detuning,
                        double rel_tol) {
    if (!std::isfinite(t_i) || !std::isfinite(t_f)) throw InputError(kModule, "window bounds must be finite");
    if (t_f < t_i) domain_fail("overlap window requires t_f >= t_i");
    if (t_f == t_i) return 0.0;
    bool bad_sample = false;
    double peak = 0.0;
    auto integrand = [&](double t) {
        const complex phi = mode(t);
        if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag())) bad_sample = true;
        peak = std::max(peak, std::abs(phi));
        return std::polar(1.0, detuning * t) * phi;
    };
    // Probe the scale first so a fully cancelling integral still terminates.
    for (int k = 0; k <= 16; ++k) integrand(t_i + (t_f - t_i) * k / 16.0);
    const double floor = 1e-3 * rel_tol * peak * (t_f - t_i);
    const auto result = quadrature::romberg(integrand, t_i, t_f, rel_tol, floor);
    if (bad_sample) throw InputError(kModule, "mode returned NaN or infinity inside the window");
    if (!result) throw NumericError(kModule, "Romberg refinement did not converge; widen the tolerance");
    return std::norm(*result);
}

std::vector<ModeSample> sample_along(const ModeSpec& spec, const geometry::InfallTrajectory& trajectory,
                                     std::span<const double> taus) {
    spec.validate();
    std::vector<ModeSample> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        const auto p = trajectory.at_proper_time(tau);
        out.push_back({p, geometry::to_kruskal(p.t, p.r), eval_schwarzschild_mode(spec, p.t, p.r)});
    }
    return out;
}

}  // namespace hawkamp::modes
