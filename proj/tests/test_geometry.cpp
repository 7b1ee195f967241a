#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "hawkamp/geometry.hpp"

using namespace hawkamp::geometry;
using hawkamp::DomainError;

namespace {

// Test-side adaptive Simpson, independent of the library's Runge-Kutta path.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 50) {
    auto simpson = [&](double lo, double hi) {
        const double m = 0.5 * (lo + hi);
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(m) + f(hi));
    };
    std::function<double(double, double, double, double, int)> rec = [&](double lo, double hi, double whole,
                                                                         double tol, int d) {
        const double m = 0.5 * (lo + hi);
        const double left = simpson(lo, m);
        const double right = simpson(m, hi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(lo, m, left, 0.5 * tol, d - 1) + rec(m, hi, right, 0.5 * tol, d - 1);
    };
    return rec(a, b, simpson(a, b), eps, depth);
}

}  // namespace

TEST(ProperTime, ClosedFormValues) {
    EXPECT_EQ(proper_time_of_radius(1.0), 0.0);
    EXPECT_DOUBLE_EQ(proper_time_of_radius(0.0), 2.0 / 3.0);
    EXPECT_NEAR(proper_time_of_radius(4.0), -14.0 / 3.0, 1e-14);
    EXPECT_THROW(proper_time_of_radius(-0.1), DomainError);
}

TEST(ProperTime, InverseRoundTrip) {
    for (double r : {0.1, 0.9, 1.0, 1.001, 2.0, 7.5, 40.0}) {
        EXPECT_NEAR(radius_of_proper_time(proper_time_of_radius(r)), r, 1e-12 * r);
    }
}

TEST(ProperTime, ChainRuleMatchesMinusSqrtR) {
    for (double r : {1.5, 2.0, 4.0}) {
        const double h = 1e-5;
        const double fd = (proper_time_of_radius(r + h) - proper_time_of_radius(r - h)) / (2 * h);
        EXPECT_NEAR(fd / -std::sqrt(r), 1.0, 1e-6) << "r = " << r;
    }
}

TEST(SchwarzschildTime, AnchoredAtReference) {
    EXPECT_EQ(schwarzschild_time_of_radius(4.0, 4.0), 0.0);
}

TEST(SchwarzschildTime, DivergesTowardsHorizon) {
    const double far = schwarzschild_time_of_radius(1.0 + 1e-4, 4.0);
    const double near = schwarzschild_time_of_radius(1.0 + 1e-8, 4.0);
    EXPECT_GT(near, far);
    EXPECT_GT(far, 0.0);
}

TEST(SchwarzschildTime, MatchesQuadratureOracle) {
    // dt/dr = -r^{3/2}/(r-1), integrated from 4 down to 2.
    const double oracle = -adaptive_simpson([](double r) { return -r * std::sqrt(r) / (r - 1.0); }, 2.0, 4.0, 1e-13);
    const double closed = schwarzschild_time_of_radius(2.0, 4.0);
    EXPECT_NEAR(closed, oracle, 1e-8);
    EXPECT_NEAR(closed, 5.283423010793993, 1e-12);  // mpmath, 30 digits
}

TEST(SchwarzschildTime, RejectsHorizonAndInterior) {
    EXPECT_THROW(schwarzschild_time_of_radius(1.0, 4.0), DomainError);
    EXPECT_THROW(schwarzschild_time_of_radius(0.5, 4.0), DomainError);
    EXPECT_THROW(schwarzschild_time_of_radius(2.0, 1.0), DomainError);
    EXPECT_THROW(schwarzschild_time_of_radius(1.0 + 1e-13, 4.0), DomainError);
}

TEST(GeodesicRates, DirectValues) {
    EXPECT_DOUBLE_EQ(geodesic_rates(4.0).dr_dtau, -0.5);
    EXPECT_DOUBLE_EQ(geodesic_rates(2.0).dt_dtau, 2.0);
    EXPECT_THROW(geodesic_rates(1.0), DomainError);
}

TEST(ReggeWheeler, Values) {
    EXPECT_DOUBLE_EQ(regge_wheeler(2.0), 2.0);
    EXPECT_NEAR(regge_wheeler(1.5), 0.8068528194400547, 1e-15);
    EXPECT_NEAR(regge_wheeler(1.0 + std::exp(-5.0)), -3.9932620530009145, 1e-13);
    EXPECT_THROW(regge_wheeler(1.0), DomainError);
    EXPECT_THROW(regge_wheeler(0.5), DomainError);
}

TEST(Kruskal, ExteriorAndInteriorValues) {
    const auto ext = to_kruskal(0.0, 2.0);
    EXPECT_EQ(ext.region, Region::Exterior);
    EXPECT_EQ(ext.T, 0.0);
    EXPECT_NEAR(ext.X, std::exp(1.0), 1e-15);

    const auto in = to_kruskal(0.0, 0.5);
    EXPECT_EQ(in.region, Region::Interior);
    EXPECT_EQ(in.X, 0.0);
    EXPECT_NEAR(in.T, 0.9079430793557843, 1e-15);  // sqrt(0.5) e^{0.25}

    EXPECT_THROW(to_kruskal(0.0, 1.0), DomainError);
    EXPECT_THROW(to_kruskal(0.0, -1.0), DomainError);
}

TEST(Kruskal, HyperbolicIdentity) {
    for (double r : {0.25, 0.5, 2.0, 3.0, 5.0}) {
        for (double t = -5.0; t <= 5.0; t += 0.25) {
            const auto p = to_kruskal(t, r);
            const double expected = std::abs(r - 1.0) * std::exp(r);
            const double got = r > 1 ? p.X * p.X - p.T * p.T : p.T * p.T - p.X * p.X;
            EXPECT_NEAR(got / expected, 1.0, 1e-10) << "t = " << t << ", r = " << r;
            if (r > 1) {
                EXPECT_GT(p.X, std::abs(p.T));
            } else {
                EXPECT_GT(p.T, std::abs(p.X));
            }
        }
    }
}

TEST(Kruskal, NullCoordinateIdentities) {
    for (double r : {1.2, 2.0, 6.0}) {
        for (double t : {-3.0, 0.0, 2.5}) {
            const auto p = to_kruskal(t, r);
            const double rs = regge_wheeler(r);
            EXPECT_NEAR(p.X - p.T, std::exp(-0.5 * (t - rs)), 1e-12 * std::exp(-0.5 * (t - rs)));
            EXPECT_NEAR(p.T + p.X, std::exp(0.5 * (t + rs)), 1e-12 * std::exp(0.5 * (t + rs)));
        }
    }
}

TEST(InfallTrajectory, AnchorsAndMonotonicity) {
    const InfallTrajectory traj(6.0);
    EXPECT_EQ(traj.at_radius(6.0).t, 0.0);
    double prev_tau = -1e300, prev_t = -1e300;
    for (double r = 6.0; r > 1.001; r -= 0.05) {
        const auto s = traj.at_radius(r);
        EXPECT_LT(s.tau, 0.0);
        EXPECT_GT(s.tau, prev_tau);
        EXPECT_GT(s.t, prev_t - 1e-15);
        prev_tau = s.tau;
        prev_t = s.t;
    }
    EXPECT_THROW(traj.at_radius(6.5), DomainError);
    EXPECT_THROW(traj.at_radius(1.0), DomainError);
    EXPECT_THROW(traj.at_proper_time(0.0), DomainError);
}

TEST(InfallTrajectory, RatesByDifferentiation) {
    const InfallTrajectory traj(8.0);
    for (double r : {1.3, 2.0, 5.0}) {
        const double tau = proper_time_of_radius(r);
        const double h = 1e-5;
        const auto lo = traj.at_proper_time(tau - h);
        const auto hi = traj.at_proper_time(tau + h);
        const auto rates = geodesic_rates(r);
        EXPECT_NEAR((hi.r - lo.r) / (2 * h), rates.dr_dtau, 1e-8);
        EXPECT_NEAR((hi.t - lo.t) / (2 * h) / rates.dt_dtau, 1.0, 1e-7);
    }
}

TEST(InfallTrajectory, HorizonMatchedAnchorLinearisesOutgoingCoordinate) {
    EXPECT_NEAR(horizon_matched_anchor(), 1.7710183574796488, 1e-12);  // mpmath root
    const auto traj = InfallTrajectory::horizon_matched(3.0);
    for (double tau : {-1e-3, -1e-4, -1e-5}) {
        const auto s = traj.at_proper_time(tau);
        const auto p = to_kruskal(s.t, s.r);
        EXPECT_NEAR((p.X - p.T) / -tau, 1.0, 5.0 * std::abs(tau));
    }
}

TEST(IntegrateGeodesic, AgreesWithClosedForms) {
    const double tol = 1e-10;
    const auto samples = integrate_geodesic(10.0, 1.01, {tol});
    ASSERT_GT(samples.size(), 10u);
    EXPECT_DOUBLE_EQ(samples.front().r, 10.0);
    EXPECT_DOUBLE_EQ(samples.back().r, 1.01);
    double max_tau = 0.0, max_t = 0.0;
    for (const auto& s : samples) {
        max_tau = std::max(max_tau, std::abs(s.tau - proper_time_of_radius(s.r)));
        max_t = std::max(max_t, std::abs(s.t - schwarzschild_time_of_radius(s.r, 10.0)));
    }
    EXPECT_LT(max_tau, 1e-8);
    EXPECT_LT(max_t, 1e-8);
    EXPECT_LT(max_tau, 10 * tol);
    EXPECT_LT(max_t, 10 * tol);
}

TEST(IntegrateGeodesic, RejectsBadArguments) {
    EXPECT_THROW(integrate_geodesic(10.0, 1.0, {}), DomainError);
    EXPECT_THROW(integrate_geodesic(10.0, 0.5, {}), DomainError);
    EXPECT_THROW(integrate_geodesic(2.0, 3.0, {}), DomainError);
    EXPECT_THROW(integrate_geodesic(10.0, 2.0, {.tol = 1e-2}), DomainError);
    EXPECT_THROW(integrate_geodesic(10.0, 2.0, {.tol = 1e-15}), DomainError);
}

TEST(IntegrateGeodesic, FailureCarriesLastValidSample) {
    try {
        integrate_geodesic(10.0, 1.0 + 1e-9, {.tol = 1e-12, .max_steps = 30});
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_LT(e.last_valid().r, 10.0);
        EXPECT_GT(e.last_valid().r, 1.0 + 1e-9);
        EXPECT_NEAR(e.last_valid().tau, proper_time_of_radius(e.last_valid().r), 1e-9);
        EXPECT_STREQ(e.kind(), "numeric");
    }
}

TEST(NearHorizon, DomainChecks) {
    const InfallTrajectory traj(3.0);
    EXPECT_THROW(near_horizon_null_coords(0.0, traj), DomainError);
    EXPECT_THROW(near_horizon_null_coords(0.01, traj), DomainError);
    EXPECT_THROW(near_horizon_null_coords(-0.5, traj), DomainError);
    EXPECT_FALSE(near_horizon_null_coords(-0.05, traj).outside_comfort_window);
    EXPECT_TRUE(near_horizon_null_coords(-0.2, traj).outside_comfort_window);
}

TEST(NearHorizon, ExactAtCalibrationPoint) {
    const InfallTrajectory traj(3.0);
    const double tau_cal = proper_time_of_radius(kDefaultCalibrationRadius);
    const auto nc = near_horizon_null_coords(tau_cal, traj);
    EXPECT_NEAR(nc.retarded_approx, nc.retarded_exact, 1e-12);
    EXPECT_NEAR(nc.advanced_approx, nc.advanced_exact, 1e-12);
}

TEST(NearHorizon, RetardedCoordinateTracksLogarithm) {
    const InfallTrajectory traj(3.0);
    const auto nc = near_horizon_null_coords(-1e-3, traj);
    EXPECT_LT(std::abs(nc.retarded_approx - nc.retarded_exact) / std::abs(nc.retarded_exact), 0.01);
}

TEST(NearHorizon, AdvancedCoordinateDeviatesAtSecondOrder) {
    // The deviation from tau/2 + C2, measured from its horizon limit, should
    // shrink by ~4 when tau halves.
    const InfallTrajectory traj(3.0);
    auto dev = [&](double tau) {
        const auto nc = near_horizon_null_coords(tau, traj);
        return nc.advanced_exact - nc.advanced_approx;
    };
    const double limit = dev(-1e-7);
    const double tau = -1e-2;
    const double ratio = (dev(tau) - limit) / (dev(0.5 * tau) - limit);
    EXPECT_NEAR(ratio, 4.0, 0.1);
}
