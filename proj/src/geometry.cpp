#include "hawkamp/geometry.hpp"

#include <cmath>
#include <sstream>

#include "hawkamp/ode.hpp"

namespace hawkamp::geometry {

namespace {

constexpr const char* kModule = "geometry";

[[noreturn]] void domain_fail(const std::string& what) { throw DomainError(kModule, what); }

void require_outside_horizon(double r, const char* name) {
    if (!std::isfinite(r) || r <= 1.0 + kHorizonGuard) {
        std::ostringstream os;
        os << name << " = " << r << " must exceed the horizon radius 1 (guard " << kHorizonGuard << ")";
        domain_fail(os.str());
    }
}

// Antiderivative of dt/dr = -r^{3/2}/(r-1), zero constant.
double time_antiderivative(double r) {
    const double s = std::sqrt(r);
    return -2.0 / 3.0 * r * s - 2.0 * s - std::log((s - 1.0) / (s + 1.0));
}

}  // namespace

double proper_time_of_radius(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) domain_fail("proper time requires r >= 0");
    return 2.0 / 3.0 * (1.0 - r * std::sqrt(r));
}

double radius_of_proper_time(double tau) {
    if (!std::isfinite(tau) || tau > 2.0 / 3.0) domain_fail("proper time beyond the singularity (tau > 2/3)");
    return std::cbrt(std::pow(1.0 - 1.5 * tau, 2.0));
}

double schwarzschild_time_of_radius(double r, double r_ref) {
    require_outside_horizon(r, "r");
    require_outside_horizon(r_ref, "r_ref");
    return time_antiderivative(r) - time_antiderivative(r_ref);
}

double regge_wheeler(double r) {
    require_outside_horizon(r, "r");
    return r + std::log(r - 1.0);
}

GeodesicRates geodesic_rates(double r) {
    require_outside_horizon(r, "r");
    return {-1.0 / std::sqrt(r), r / (r - 1.0)};
}

KruskalPoint to_kruskal(double t, double r) {
    if (!std::isfinite(t) || !std::isfinite(r) || r <= 0.0) domain_fail("Kruskal map requires finite t and r > 0");
    if (std::abs(r - 1.0) <= kHorizonGuard) domain_fail("r = 1 is the boundary of the Schwarzschild chart");
    const double half_t = 0.5 * t;
    if (r > 1.0) {
        const double a = std::sqrt(r - 1.0) * std::exp(0.5 * r);
        return {a * std::sinh(half_t), a * std::cosh(half_t), Region::Exterior};
    }
    const double a = std::sqrt(1.0 - r) * std::exp(0.5 * r);
    return {a * std::cosh(half_t), a * std::sinh(half_t), Region::Interior};
}

// ---------------------------------------------------------------------------

InfallTrajectory::InfallTrajectory(double r_start) : InfallTrajectory(r_start, r_start) {}

InfallTrajectory::InfallTrajectory(double r_start, double time_anchor)
    : r_start_(r_start), time_anchor_(time_anchor) {
    require_outside_horizon(r_start, "r_start");
    require_outside_horizon(time_anchor, "time_anchor");
}

InfallTrajectory InfallTrajectory::horizon_matched(double r_start) {
    return InfallTrajectory(r_start, horizon_matched_anchor());
}

double horizon_matched_anchor() {
    // Solve time_antiderivative(r) = 2 ln 2 - 11/3; the left side decreases
    // monotonically from +inf at r = 1.
    static const double anchor = [] {
        const double target = 2.0 * std::log(2.0) - 11.0 / 3.0;
        double lo = 1.0 + 1e-9;
        double hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (time_antiderivative(mid) > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return anchor;
}

double InfallTrajectory::tau_start() const { return proper_time_of_radius(r_start_); }

bool InfallTrajectory::contains_radius(double r) const {
    return r > 1.0 + kHorizonGuard && r <= r_start_;
}

bool InfallTrajectory::contains_proper_time(double tau) const {
    return tau < 0.0 && tau >= tau_start() && contains_radius(radius_of_proper_time(tau));
}

TrajectorySample InfallTrajectory::at_radius(double r) const {
    if (!contains_radius(r)) {
        std::ostringstream os;
        os << "radius " << r << " outside trajectory domain (1, " << r_start_ << "]";
        domain_fail(os.str());
    }
    return {proper_time_of_radius(r), schwarzschild_time_of_radius(r, time_anchor_), r};
}

TrajectorySample InfallTrajectory::at_proper_time(double tau) const {
    if (!(tau < 0.0) || tau < tau_start()) {
        std::ostringstream os;
        os << "proper time " << tau << " outside trajectory domain [" << tau_start() << ", 0)";
        domain_fail(os.str());
    }
    const double r = radius_of_proper_time(tau);
    if (!contains_radius(r)) domain_fail("proper time maps inside the horizon guard");
    return {tau, schwarzschild_time_of_radius(r, time_anchor_), r};
}

// ---------------------------------------------------------------------------

std::vector<TrajectorySample> integrate_geodesic(double r_start, double r_end, const GeodesicOptions& options) {
    require_outside_horizon(r_end, "r_end");
    require_outside_horizon(r_start, "r_start");
    if (!(r_end < r_start)) domain_fail("integrate_geodesic requires r_end < r_start");
    if (!(options.tol > 1e-14 && options.tol < 1e-3)) domain_fail("tolerance must lie in (1e-14, 1e-3)");

    ode::Options opt;
    opt.rel_tol = options.tol * 1e-2;
    opt.abs_tol = options.tol * 1e-2;
    opt.max_steps = options.max_steps;

    // Proper time at r_start, measured from the horizon: tau(r) = -int_1^r sqrt(s) ds.
    auto dtau = [](double r, const ode::State<1>&) { return ode::State<1>{-std::sqrt(r)}; };
    const auto tau_pass = ode::integrate<1>(dtau, 1.0, {0.0}, r_start, opt);
    if (!tau_pass.ok()) {
        throw IntegrationError("proper-time quadrature failed", {tau_pass.last().y[0], 0.0, tau_pass.last().x});
    }
    const double tau0 = tau_pass.last().y[0];

    auto rhs = [](double r, const ode::State<2>&) {
        const double s = std::sqrt(r);
        return ode::State<2>{-s, -r * s / (r - 1.0)};
    };
    const auto res = ode::integrate<2>(rhs, r_start, {tau0, 0.0}, r_end, opt);

    std::vector<TrajectorySample> out;
    out.reserve(res.samples.size());
    for (const auto& s : res.samples) out.push_back({s.y[0], s.y[1], s.x});
    if (!res.ok()) {
        const char* why = res.status == ode::Status::StepUnderflow      ? "step-size underflow"
                          : res.status == ode::Status::MaxStepsExceeded ? "step budget exhausted"
                                                                        : "non-finite derivative";
        std::ostringstream os;
        os << "geodesic integration stopped at r = " << out.back().r << ": " << why;
        throw IntegrationError(os.str(), out.back());
    }
    return out;
}

NullCoordinates near_horizon_null_coords(double tau, const InfallTrajectory& trajectory,
                                         double calibration_radius) {
    if (!(tau < 0.0)) domain_fail("near-horizon expansion requires tau < 0");
    if (!(std::abs(tau) < 0.5)) domain_fail("near-horizon expansion requires |tau| < 0.5");
    require_outside_horizon(calibration_radius, "calibration_radius");

    const double anchor = trajectory.time_anchor();
    auto exact = [anchor](double r) {
        const double t = schwarzschild_time_of_radius(r, anchor);
        const double rs = regge_wheeler(r);
        return std::pair{t - rs, t + rs};
    };

    const double tau_cal = proper_time_of_radius(calibration_radius);
    const auto [u_cal, v_cal] = exact(calibration_radius);
    const double c1 = u_cal + 2.0 * std::log(-tau_cal);
    const double c2 = v_cal - 0.5 * tau_cal;

    const auto [u, v] = exact(trajectory.at_proper_time(tau).r);
    return {-2.0 * std::log(-tau) + c1, 0.5 * tau + c2, u, v, c1, c2, std::abs(tau) > 0.1};
}

}  // namespace hawkamp::geometry
