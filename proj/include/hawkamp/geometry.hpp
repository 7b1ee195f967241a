#pragma once

// Radial free fall into a Schwarzschild black hole, from rest at infinity.
//
// Units: distances in r_g = 2GM/c^2, times in r_g/c, frequencies in c/r_g.
// Every radius, time and frequency crossing this interface is dimensionless
// in that convention. Proper time is zero at horizon crossing (r = 1).

#include <vector>

#include "hawkamp/errors.hpp"

namespace hawkamp::geometry {

/// Radii closer than this to r = 1 are rejected wherever a quantity diverges
/// at the horizon.
inline constexpr double kHorizonGuard = 1e-12;

/// Default radius at which the near-horizon expansion constants are matched.
inline constexpr double kDefaultCalibrationRadius = 1.05;

/// Proper time at radius r, tau = (2/3)(1 - r^{3/2}). Valid down to r = 0.
double proper_time_of_radius(double r);

/// Inverse of proper_time_of_radius: r = (1 - 3 tau / 2)^{2/3}, tau <= 2/3.
double radius_of_proper_time(double tau);

/// Schwarzschild time at r with the integration constant chosen so that
/// t(r_ref) = 0. Both radii must lie outside the horizon.
double schwarzschild_time_of_radius(double r, double r_ref);

/// Tortoise coordinate r_* = r + ln(r - 1).
double regge_wheeler(double r);

struct GeodesicRates {
    double dr_dtau;  // -1/sqrt(r)
    double dt_dtau;  // r/(r-1)
};

/// Instantaneous rates along the infall worldline at radius r > 1.
GeodesicRates geodesic_rates(double r);

enum class Region { Exterior, Interior };

struct KruskalPoint {
    double T = 0.0;
    double X = 0.0;
    Region region = Region::Exterior;
};

/// Maps Schwarzschild (t, r) to Kruskal-Szekeres (T, X). r = 1 is the chart
/// boundary and is rejected.
KruskalPoint to_kruskal(double t, double r);

struct TrajectorySample {
    double tau = 0.0;
    double t = 0.0;
    double r = 0.0;
};

/// Closed-form infall worldline on the radial interval (1, r_start].
///
/// Schwarzschild time is zero at `time_anchor` (defaults to r_start). The
/// anchor only shifts t by a constant; it is exposed because the outgoing
/// Kruskal mode reads the absolute value of t - r_*.
class InfallTrajectory {
public:
    explicit InfallTrajectory(double r_start);
    InfallTrajectory(double r_start, double time_anchor);

    /// Trajectory whose time origin makes X - T = -tau + O(tau^2) at the
    /// horizon, i.e. the constant in t - r_* = -2 ln(-tau) + const is zero.
    static InfallTrajectory horizon_matched(double r_start);

    double r_start() const { return r_start_; }
    double time_anchor() const { return time_anchor_; }

    /// Proper time at the start of the domain (most negative tau).
    double tau_start() const;

    bool contains_radius(double r) const;
    bool contains_proper_time(double tau) const;

    TrajectorySample at_radius(double r) const;
    TrajectorySample at_proper_time(double tau) const;

private:
    double r_start_;
    double time_anchor_;
};

/// The anchor radius used by InfallTrajectory::horizon_matched.
double horizon_matched_anchor();

/// Thrown by integrate_geodesic when the stepper gives up; carries the last
/// sample that was accepted.
class IntegrationError : public NumericError {
public:
    IntegrationError(const std::string& what, TrajectorySample last)
        : NumericError("geometry", what), last_(last) {}
    const TrajectorySample& last_valid() const { return last_; }

private:
    TrajectorySample last_;
};

struct GeodesicOptions {
    double tol = 1e-10;
    std::size_t max_steps = 200'000;
};

/// Adaptive Runge-Kutta solution of the geodesic equations with r as the
/// independent variable, from r_start inward to r_end. Schwarzschild time is
/// anchored to zero at r_start; proper time is obtained by integrating
/// dtau/dr from the horizon, so no closed form enters the result.
std::vector<TrajectorySample> integrate_geodesic(double r_start, double r_end,
                                                 const GeodesicOptions& options = {});

/// Near-horizon null coordinates along the worldline: the approximate forms
///   t - r_* ~ -2 ln(-tau) + C1,   t + r_* ~ tau/2 + C2
/// next to their exact values. C1 and C2 are fitted to the exact trajectory
/// at the calibration radius.
struct NullCoordinates {
    double retarded_approx;   // t - r_*
    double advanced_approx;   // t + r_*
    double retarded_exact;
    double advanced_exact;
    double c1;
    double c2;
    bool outside_comfort_window;  // |tau| > 0.1: expansion is degrading
};

/// Requires tau < 0 and |tau| < 0.5.
NullCoordinates near_horizon_null_coords(double tau, const InfallTrajectory& trajectory,
                                         double calibration_radius = kDefaultCalibrationRadius);

}  // namespace hawkamp::geometry
