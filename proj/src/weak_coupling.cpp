#include "hawkamp/weak_coupling.hpp"

#include <cmath>
#include <sstream>

#include "hawkamp/ode.hpp"

namespace hawkamp::weak {

namespace {

constexpr const char* kModule = "weak_coupling";

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(kModule, "evolution time must be >= 0");
}

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << name << " must be finite";
        throw DomainError(kModule, os.str());
    }
}

double rate_prefactor(const WeakCouplingParams& p) { return 2.0 * p.g_h * p.g_h * p.overlap_sq; }

}  // namespace

void WeakCouplingParams::validate() const {
    if (!(g_h > 0.0) || !std::isfinite(g_h)) throw DomainError(kModule, "g_h must be positive");
    if (!(overlap_sq >= 0.0) || !std::isfinite(overlap_sq)) throw DomainError(kModule, "overlap |I|^2 must be >= 0");
    if (!(n_h >= 0.0) || !std::isfinite(n_h)) throw DomainError(kModule, "n_h must be >= 0");
    if (!(n_c >= 0.0) || !std::isfinite(n_c)) throw DomainError(kModule, "n_c must be >= 0");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError(kModule, "nu must be positive");
    if (!(Omega_h > 0.0) || !std::isfinite(Omega_h)) throw DomainError(kModule, "Omega_h must be positive");
    require_finite(alpha0.real(), "alpha0");
    require_finite(alpha0.imag(), "alpha0");
    if (atoms < 1) throw DomainError(kModule, "atom count must be >= 1");
}

Populations steady_state_populations(double n_c) {
    if (!(n_c >= 0.0)) throw DomainError(kModule, "cold occupancy n_c must be >= 0");
    if (std::isinf(n_c)) return {0.5, 0.5};
    const double z = 2.0 * n_c + 1.0;
    return {(n_c + 1.0) / z, n_c / z};
}

GainDiffusion gain_diffusion(const WeakCouplingParams& p) {
    p.validate();
    const double k = rate_prefactor(p);
    const double z = 2.0 * p.n_c + 1.0;
    return {k * (p.n_h - p.n_c) / z, k * p.n_h * (p.n_c + 1.0) / z};
}

GainDiffusion gain_diffusion_from_populations(const WeakCouplingParams& p) {
    p.validate();
    const double k = rate_prefactor(p);
    const Populations rho = steady_state_populations(p.n_c);
    return {k * (p.n_h * rho.ground - (p.n_h + 1.0) * rho.excited), k * p.n_h * rho.ground};
}

GaussianPState evolve_p_function(complex alpha0, double gain, double diffusion, double t) {
    require_time(t);
    require_finite(gain, "gain");
    require_finite(diffusion, "diffusion");
    const double x = gain * t;
    // (D/G)(e^{Gt} - 1) = D t * expm1(x)/x, continuous through G = 0.
    const double growth = x == 0.0 ? 1.0 : std::expm1(x) / x;
    return {alpha0 * std::exp(0.5 * x), diffusion * t * growth};
}

double photon_number_ode(double n0, double gain, double diffusion, double t, double tol) {
    if (!(n0 >= 0.0)) throw DomainError(kModule, "initial photon number must be >= 0");
    require_time(t);
    ode::Options opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-3;
    auto rhs = [gain, diffusion](double, const ode::State<1>& n) { return ode::State<1>{gain * n[0] + diffusion}; };
    const auto res = ode::integrate<1>(rhs, 0.0, {n0}, t, opt);
    if (!res.ok()) {
        std::ostringstream os;
        os << "photon-number integration stopped at t = " << res.last().x << " (<n> = " << res.last().y[0]
           << ", " << res.samples.size() << " accepted, " << res.rejected << " rejected steps)";
        throw NumericError(kModule, os.str());
    }
    return res.last().y[0];
}

WorkPower work_and_power(complex alpha0, double gain, double nu, double t, int atoms) {
    require_time(t);
    if (atoms < 1) throw DomainError(kModule, "atom count must be >= 1");
    const double work = atoms * nu * std::norm(alpha0) * std::exp(gain * t);
    return {work, gain * work};
}

double noise_ratio(double n_h, double n_c) {
    if (!(n_h > n_c)) throw DomainError(kModule, "efficiency needs n_h > n_c");
    return n_h * (n_c + 1.0) / (n_h - n_c);
}

double efficiency_weak(double nu, double Omega_h, complex alpha0, double t, double gain, double n_h, double n_c) {
    require_time(t);
    if (!(nu > 0.0) || !(Omega_h > 0.0)) throw DomainError(kModule, "frequencies must be positive");
    const double c = noise_ratio(n_h, n_c);
    const double a0 = std::norm(alpha0);
    const double at = a0 * std::exp(gain * t);
    return nu / Omega_h * a0 / (at + c);
}

std::vector<EnergySplitRow> energy_split_vs_gain(complex alpha0, double nu, double ratio_c,
                                                 std::span<const double> gains, double t) {
    require_time(t);
    if (!(ratio_c > 0.0)) throw DomainError(kModule, "noise ratio c = D/G must be positive");
    std::vector<EnergySplitRow> rows;
    rows.reserve(gains.size());
    const double a0 = std::norm(alpha0);
    for (double g : gains) {
        require_finite(g, "gain");
        if (!(g > 0.0)) throw DomainError(kModule, "gain grid values must be positive");
        EnergySplitRow row;
        row.gain = g;
        row.ergotropy = nu * a0 * std::exp(g * t);
        row.thermal = nu * ratio_c * std::expm1(g * t);
        row.mean = row.ergotropy + row.thermal;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hawkamp::weak
