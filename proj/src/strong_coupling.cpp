#include "hawkamp/strong_coupling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hawkamp::strong {

namespace {

constexpr const char* kModule = "strong_coupling";

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << name << " must be positive and finite (got " << x << ")";
        throw DomainError(kModule, os.str());
    }
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(kModule, "interaction time must be >= 0");
}

void require_resonance(const StrongCouplingParams& p) {
    if (std::abs(p.detuning()) > kResonanceTolerance) {
        std::ostringstream os;
        os << "full transfer needs resonance nu = Omega_h - omega0 (detuning " << p.detuning() << ")";
        throw PreconditionError(kModule, os.str());
    }
}

}  // namespace

double StrongCouplingParams::rabi_frequency() const {
    const double d = detuning();
    const double k = coupling();
    return std::sqrt(d * d + 4.0 * k * k);
}

void StrongCouplingParams::validate() const {
    require_positive(g_h, "g_h");
    require_positive(omega0, "omega0");
    require_positive(nu, "nu");
    require_positive(Omega_h, "Omega_h");
    if (!std::isfinite(phi_h.real()) || !std::isfinite(phi_h.imag())) {
        throw DomainError(kModule, "phi_h must be finite");
    }
    if (n_s < 0) throw DomainError(kModule, "n_s must be >= 0");
    if (atoms < 1) throw DomainError(kModule, "atom count must be >= 1");
    if (!(beta_h > 0.0)) throw DomainError(kModule, "beta_h must be positive");
}

StrongCouplingParams StrongCouplingParams::with_detuning(double coupling, double delta, double omega0, double nu) {
    StrongCouplingParams p;
    p.g_h = 1.0;
    p.phi_h = coupling;
    p.omega0 = omega0;
    p.nu = nu;
    p.Omega_h = omega0 + nu - delta;
    return p;
}

AmplitudePair rabi_amplitudes(const StrongCouplingParams& params, double t) {
    params.validate();
    require_time(t);
    const double delta = params.detuning();
    const double w = params.rabi_frequency();
    if (w == 0.0) return {{1.0, 0.0}, {0.0, 0.0}};
    const complex phase = std::polar(1.0, -0.5 * delta * t);
    const double c = std::cos(0.5 * w * t);
    const double s = std::sin(0.5 * w * t);
    const complex u = phase * complex(c, delta * s / w);
    const complex v = phase * complex(0.0, -2.0 * params.coupling() * s / w);
    return {u, v};
}

FinalStates final_states(const StrongCouplingParams& params, double t) {
    const auto [u, v] = rabi_amplitudes(params, t);
    // |u|^2 + |v|^2 = 1 up to rounding; renormalize the pair exactly.
    const double pv = std::norm(v) / (std::norm(u) + std::norm(v));
    const double pu = 1.0 - pv;
    ergotropy::DiagonalState atom({pu, pv}, {0.0, params.omega0});
    std::vector<double> ladder(static_cast<std::size_t>(params.n_s) + 2, 0.0);
    ladder[static_cast<std::size_t>(params.n_s)] = pu;
    ladder[static_cast<std::size_t>(params.n_s) + 1] = pv;
    return {std::move(atom), ergotropy::DiagonalState::ladder(std::move(ladder), params.nu)};
}

double ergotropy_gain(const StrongCouplingParams& params, double t) {
    const FinalStates f = final_states(params, t);
    std::vector<double> fock(static_cast<std::size_t>(params.n_s) + 1, 0.0);
    fock.back() = 1.0;
    const double initial = ergotropy::ergotropy_bruteforce(ergotropy::DiagonalState::ladder(std::move(fock), params.nu));
    return ergotropy::ergotropy_bruteforce(f.signal) - initial;
}

std::vector<double> optimal_pulse_times(const StrongCouplingParams& params, int m_max) {
    params.validate();
    require_resonance(params);
    if (m_max < 0) throw DomainError(kModule, "m_max must be >= 0");
    const double k = params.coupling();
    if (!(k > 0.0)) throw DomainError(kModule, "full transfer needs g_h |phi_h| > 0");
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) times.push_back((2.0 * m + 1.0) * std::numbers::pi / (2.0 * k));
    return times;
}

double efficiency_strong(double omega0, double nu) {
    require_positive(omega0, "omega0");
    require_positive(nu, "nu");
    return nu / (omega0 + nu);
}

EnergyAudit energy_audit(const StrongCouplingParams& params, double t) {
    const FinalStates f = final_states(params, t);
    const double pv = f.atom.probabilities()[1];
    return {params.nu * pv, params.omega0 * pv, params.Omega_h * pv};
}

double max_power(const StrongCouplingParams& params, int m) {
    params.validate();
    require_resonance(params);
    if (m < 0) throw DomainError(kModule, "pulse index m must be >= 0");
    return params.atoms * 2.0 * params.coupling() * params.nu / ((2.0 * m + 1.0) * std::numbers::pi);
}

double average_power(const StrongCouplingParams& params, double t) {
    if (t == 0.0) {
        params.validate();
        return 0.0;
    }
    return params.atoms * ergotropy_gain(params, t) / t;
}

std::vector<double> hot_branch_weights(const StrongCouplingParams& params, std::size_t levels) {
    params.validate();
    return ergotropy::thermal_populations({params.beta_h, params.Omega_h}, levels);
}

EfficiencyBounds ssd_carnot_check(double T_h, double T_c, double Omega_h, double omega_c, double nu,
                                  double omega0) {
    if (!(T_c >= 0.0) || !(T_h > T_c) || !std::isfinite(T_h)) {
        throw DomainError(kModule, "bath temperatures must satisfy T_h > T_c >= 0");
    }
    require_positive(Omega_h, "Omega_h");
    require_positive(omega_c, "omega_c");
    EfficiencyBounds b;
    b.eta_ssd = efficiency_strong(omega0, nu);
    if (T_c == 0.0) {
        b.eta_carnot = 1.0;
        b.carnot_reachable = std::nullopt;
    } else {
        b.eta_carnot = 1.0 - T_c / T_h;
        b.carnot_reachable = T_h / T_c >= Omega_h / omega_c;
    }
    return b;
}

}  // namespace hawkamp::strong
