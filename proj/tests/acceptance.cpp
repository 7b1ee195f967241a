// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hawkamp/ergotropy.hpp"
#include "hawkamp/geometry.hpp"
#include "hawkamp/modes.hpp"
#include "hawkamp/scenario.hpp"
#include "hawkamp/strong_coupling.hpp"
#include "hawkamp/weak_coupling.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace geo = hawkamp::geometry;
namespace md = hawkamp::modes;
namespace erg = hawkamp::ergotropy;
namespace st = hawkamp::strong;
namespace wk = hawkamp::weak;
namespace sc = hawkamp::scenario;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("AC%02d %s  %s  [%s]\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome unitarity() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> k(0.0, 10.0), d(-10.0, 10.0), t(0.0, 100.0);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto a = st::rabi_amplitudes(st::StrongCouplingParams::with_detuning(k(rng), d(rng), 6.0, 6.0), t(rng));
        worst = std::max(worst, std::abs(std::norm(a.u) + std::norm(a.v) - 1.0));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {worst < 1e-12 && secs < 1.0, fmt("max dev %.2e", worst) + fmt(", %.3f s", secs)};
}

Outcome pi_pulse() {
    double worst_v = 0.0, worst_gain = 0.0;
    for (double kappa : {0.25, 1.0, 3.0}) {
        for (double nu : {0.5, 1.0, 2.0}) {
            const auto p = st::StrongCouplingParams::with_detuning(kappa, 0.0, 1.0, nu);
            const double t = kPi / (2.0 * kappa);
            worst_v = std::max(worst_v, std::abs(std::norm(st::rabi_amplitudes(p, t).v) - 1.0));
            worst_gain = std::max(worst_gain, std::abs(st::ergotropy_gain(p, t) - nu));
        }
    }
    return {worst_v < 1e-9 && worst_gain < 1e-9, fmt("|v|^2 dev %.2e", worst_v) + fmt(", gain dev %.2e", worst_gain)};
}

Outcome strong_efficiency() {
    double worst_eta = 0.0, worst_power = 0.0;
    for (double omega0 : {0.5, 1.0, 3.0}) {
        for (double nu : {0.2, 1.0, 2.5}) {
            const auto p = st::StrongCouplingParams::with_detuning(0.7, 0.0, omega0, nu);
            const auto audit = st::energy_audit(p, kPi / (2.0 * 0.7));
            worst_eta = std::max(worst_eta, std::abs(audit.efficiency() - nu / (omega0 + nu)));
            const auto times = st::optimal_pulse_times(p, 3);
            for (int m = 0; m <= 3; ++m) {
                worst_power = std::max(worst_power, std::abs(st::max_power(p, m) * times[m] - nu));
            }
        }
    }
    return {worst_eta < 1e-15 && worst_power < 1e-12,
            fmt("eta dev %.2e", worst_eta) + fmt(", P*t_m - nu dev %.2e", worst_power)};
}

Outcome rabi_oracle() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> k(0.0, 3.0), d(-4.0, 4.0), t(0.0, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double kappa = k(rng), delta = d(rng), time = t(rng);
        const auto a = st::rabi_amplitudes(st::StrongCouplingParams::with_detuning(kappa, delta, 6.0, 6.0), time);
        const auto prop = oracle::two_level_propagator(kappa, delta, time);
        worst = std::max({worst, std::abs(a.u - prop(0, 0)), std::abs(a.v - prop(1, 0))});
    }
    return {worst < 1e-9, fmt("max |amp - expm| %.2e", worst)};
}

Outcome moment_oracle() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> g(0.05, 2.0), d(0.0, 3.0), a(0.0, 3.0), frac(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double gain = g(rng), diff = d(rng), t = 5.0 / gain * frac(rng);
        const std::complex<double> a0 = std::polar(a(rng), 6.0 * frac(rng));
        const double closed = wk::evolve_p_function(a0, gain, diff, t).mean_photons();
        const double ode = wk::photon_number_ode(std::norm(a0), gain, diff, t);
        if (closed > 0.0) worst = std::max(worst, std::abs(ode - closed) / closed);
    }
    return {worst < 1e-6, fmt("max rel err %.2e", worst)};
}

Outcome ssd_asymptote() {
    const double nu = 1.0, omega0 = 1.0, Omega_h = omega0 + nu, n_h = 1.0, n_c = 0.0, gain = 1.0;
    const double c = wk::noise_ratio(n_h, n_c);
    const double ssd = nu / (omega0 + nu);
    bool increasing = true;
    double prev = -1.0;
    for (int k = 0; k <= 60; ++k) {
        const double a2 = c * std::pow(10.0, -2.0 + 0.1 * k);
        const double eta = wk::efficiency_weak(nu, Omega_h, std::sqrt(a2), 0.0, gain, n_h, n_c);
        increasing = increasing && eta > prev;
        prev = eta;
    }
    const double eta_big = wk::efficiency_weak(nu, Omega_h, std::sqrt(1e4 * c), 0.0, gain, n_h, n_c);
    const double rel = std::abs(eta_big - ssd) / ssd;
    const double spot = wk::efficiency_weak(1.0, 2.0, std::sqrt(99.0), 0.0, gain, 1.0, 0.0);
    const bool ok = increasing && rel < 1e-4 && std::abs(spot - 0.495) < 1e-12;
    return {ok, std::string(increasing ? "increasing" : "NOT increasing") + fmt(", rel gap %.2e", rel) +
                    fmt(", spot %.15f", spot)};
}

Outcome fig3_bookkeeping() {
    std::vector<double> gains;
    for (int k = 0; k < 20; ++k) gains.push_back(0.1 * (k + 1));
    const std::complex<double> a0(1.2, -0.4);
    const double nu = 1.0, c = 1.5, t = 1.0;
    double sum_err = 0.0, diff_err = 0.0;
    for (const auto& r : wk::energy_split_vs_gain(a0, nu, c, gains, t)) {
        sum_err = std::max(sum_err, std::abs(r.mean - r.ergotropy - r.thermal));
        const double e = std::exp(r.gain * t);
        diff_err = std::max(diff_err, std::abs(r.ergotropy - r.thermal - nu * ((std::norm(a0) - c) * e + c)));
    }
    return {sum_err < 1e-12 && diff_err < 1e-10, fmt("sum err %.2e", sum_err) + fmt(", diff err %.2e", diff_err)};
}

Outcome geometry() {
    const auto samples = geo::integrate_geodesic(10.0, 1.01, {});
    double worst = 0.0;
    for (const auto& s : samples) {
        worst = std::max(worst, std::abs(s.tau - geo::proper_time_of_radius(s.r)));
        worst = std::max(worst, std::abs(s.t - geo::schwarzschild_time_of_radius(s.r, 10.0)));
    }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> tt(-4.0, 4.0), ro(1.001, 8.0), ri(0.001, 0.999);
    double kr_ext = 0.0, kr_int = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double t = tt(rng), r = ro(rng);
        const auto p = geo::to_kruskal(t, r);
        const double ref = (r - 1.0) * std::exp(r);
        kr_ext = std::max(kr_ext, std::abs(p.X * p.X - p.T * p.T - ref) / std::max(1.0, ref));
        const double r2 = ri(rng);
        const auto q = geo::to_kruskal(t, r2);
        kr_int = std::max(kr_int, std::abs(q.T * q.T - q.X * q.X - (1.0 - r2) * std::exp(r2)));
    }
    const bool ok = samples.size() > 10 && worst < 1e-8 && kr_ext < 1e-10 && kr_int < 1e-10;
    return {ok, fmt("ODE vs closed %.2e", worst) + fmt(", Kruskal ext %.2e", kr_ext) + fmt(", int %.2e", kr_int)};
}

Outcome modes() {
    double mirror = 0.0;
    for (double omega : {0.5, 1.0, 4.0}) {
        for (double r0 : {3.5, 4.0, 8.0}) {
            for (double t = -5.0; t <= 5.0; t += 0.05) {
                mirror = std::max(mirror, std::abs(md::mirror_mode(omega, r0, geo::to_kruskal(t, r0)).amplitude));
            }
        }
    }
    const auto traj = geo::InfallTrajectory::horizon_matched(6.0);
    bool within = true, monotone = true;
    std::string detail = fmt("mirror max %.2e", mirror);
    for (auto kind : {md::ModeKind::SchwarzschildOutgoing, md::ModeKind::SchwarzschildIngoing}) {
        for (double nu : {0.5, 1.0, 2.0}) {
            double prev = std::numeric_limits<double>::infinity();
            for (double r : {1.1, 1.01, 1.001}) {
                const double f = md::instantaneous_frequency({kind, nu}, traj, geo::proper_time_of_radius(r), 1e-6);
                const double dev = std::abs(f - nu) / nu;
                monotone = monotone && dev < prev;
                prev = dev;
                if (r == 1.001) {
                    within = within && dev < 0.01;
                    if (nu == 1.0) detail += std::string(", ") + md::to_string(kind) + fmt(" dev %.2e", dev);
                }
            }
        }
    }
    return {mirror < 1e-10 && within && monotone, detail + (monotone ? ", monotone" : ", NOT monotone")};
}

Outcome ergotropy() {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    double fock = 0.0;
    int low_branch = 0;
    for (int i = 0; i < 2000; ++i) {
        const int n = static_cast<int>(w(rng) * 20.0);
        const double hi = w(rng), lo = 1.0 - hi, nu = 0.2 + 2.0 * w(rng);
        if (hi < lo) ++low_branch;
        const double closed = hi >= lo ? nu * (n + hi - lo) : nu * n;
        fock = std::max(fock, std::abs(erg::fock_mixture_ergotropy(n, lo, hi, nu) - closed));
    }
    double dt = 0.0;
    for (auto [a, s2] : std::vector<std::pair<double, double>>{{1.0, 0.25}, {0.5, 0.0}, {1.5, 0.5}, {0.0, 1.0}}) {
        const auto split = oracle::ergotropy_of(oracle::displaced_thermal_density({a, 0.0}, s2, 40), 1.0);
        const auto s = erg::displaced_thermal_summary(a, s2, 1.0);
        dt = std::max({dt, std::abs(split.ergotropy() - s.ergotropy), std::abs(split.mean - s.mean)});
    }
    return {fock < 1e-12 && low_branch > 0 && dt < 1e-8,
            fmt("Fock max dev %.2e", fock) + " (" + std::to_string(low_branch) + " w_hi<w_lo draws)" +
                fmt(", displaced thermal N=40 dev %.2e", dt)};
}

Outcome gain_diffusion() {
    double worst = 0.0;
    int cases = 0;
    for (double n_c : {0.0, 0.5, 1.0, 10.0}) {
        for (int k = 1; n_c + 0.1 * k <= 10.0 + 1e-9; ++k) {
            wk::WeakCouplingParams p;
            p.g_h = 0.8;
            p.overlap_sq = 0.6;
            p.n_c = n_c;
            p.n_h = n_c + 0.1 * k;
            const auto a = wk::gain_diffusion(p), b = wk::gain_diffusion_from_populations(p);
            worst = std::max({worst, std::abs(a.gain - b.gain), std::abs(a.diffusion - b.diffusion)});
            ++cases;
        }
    }
    return {worst < 1e-12, fmt("max dev %.2e", worst) + " over " + std::to_string(cases) + " cases"};
}

Outcome cli_determinism(const Clock::time_point& start) {
    const char* tmp = std::getenv("HAWKAMP_ACCEPTANCE_TMP");
    const fs::path root = tmp ? fs::path(tmp) : fs::temp_directory_path() / "hawkamp_acceptance";
    const fs::path configs = fs::path(HAWKAMP_SOURCE_DIR) / "examples_config";
    int files = 0;
    std::string mismatch;
    for (const char* name : {"trajectory", "modes", "strong", "weak", "fig2", "fig3", "sweep"}) {
        std::ifstream in(configs / (std::string(name) + ".json"));
        if (!in) return {false, std::string("missing config ") + name};
        const auto doc = sc::json::parse(in);
        auto config = sc::ScenarioConfig::from_json(doc, sc::scenario_from_string(name));
        std::vector<sc::RunReport> runs;
        for (const char* pass : {"a", "b"}) {
            config.output_dir = root / name / pass;
            fs::remove_all(config.output_dir);
            runs.push_back(sc::run_scenario(config));
        }
        for (const auto& f : runs[0].files) {
            ++files;
            if (slurp(root / name / "a" / f.name) != slurp(root / name / "b" / f.name)) mismatch += " " + f.name;
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {mismatch.empty() && files >= 7 && secs < 60.0,
            std::to_string(files) + " CSV files identical" + (mismatch.empty() ? "" : ", differ:" + mismatch) +
                fmt(", acceptance wall clock %.2f s", secs)};
}

}  // namespace

int main() {
    const auto start = Clock::now();
    report(1, "unitarity |u|^2+|v|^2=1 over 1e4 draws in < 1 s", unitarity);
    report(2, "pi-pulse full transfer and ergotropy gain nu", pi_pulse);
    report(3, "strong-coupling efficiency and max-power identity", strong_efficiency);
    report(4, "Rabi amplitudes vs matrix exponential", rabi_oracle);
    report(5, "P-function moments vs photon-number ODE", moment_oracle);
    report(6, "weak-coupling efficiency approaches SSD bound", ssd_asymptote);
    report(7, "gain-sweep energy bookkeeping", fig3_bookkeeping);
    report(8, "geodesic closed forms and Kruskal identities", geometry);
    report(9, "mirror boundary and near-horizon mode frequency", modes);
    report(10, "passive-state ergotropy vs closed forms", ergotropy);
    report(11, "gain/diffusion from steady populations", gain_diffusion);
    report(12, "CLI scenarios byte-identical across runs", [&] { return cli_determinism(start); });
    std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
