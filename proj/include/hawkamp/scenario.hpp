#pragma once

// Scenario runner behind the `hawkamp` CLI: validates a JSON config, drives
// the physics modules and writes deterministic CSV files plus a run report.
// The config schema is documented in docs/config.md.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkamp/errors.hpp"
#include "hawkamp/modes.hpp"
#include "hawkamp/strong_coupling.hpp"
#include "hawkamp/weak_coupling.hpp"

namespace hawkamp::scenario {

using json = nlohmann::json;

/// Config rejected before any physics runs.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("config", what) {}
    const char* kind() const noexcept override { return "validation"; }
};

enum class Scenario { Trajectory, Modes, Strong, Weak, Fig2, Fig3, Sweep };

const char* to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view name);

enum class FloatFormat { Fixed17, Shortest };

/// Fixed17 prints 17 significant digits in scientific notation; Shortest
/// prints the shortest string that round-trips.
std::string format_double(double x, FloatFormat format);

enum class Spacing { Linear, Log };

struct Grid {
    double min = 0.0;
    double max = 1.0;
    int count = 2;
    Spacing spacing = Spacing::Linear;

    /// Monotone grid; both endpoints included exactly.
    std::vector<double> values() const;
};

struct TrajectoryConfig {
    double r_start = 10.0;
    double r_end = 1.01;
    double tol = 1e-10;
};

/// time_anchor: radius where t = 0, or empty for "horizon_matched".
struct ModesConfig {
    modes::ModeSpec spec{modes::ModeKind::SchwarzschildIngoing, 1.0, std::nullopt};
    double r_start = 2.0;
    double r_end = 1.001;
    int samples = 101;
    std::optional<double> time_anchor;
    double frequency_step = 1e-6;
};

struct StrongConfig {
    strong::StrongCouplingParams params;
    std::optional<double> t_max;  // default: one Rabi period pi / (g_h |phi_h|)
    int samples = 101;
    int m_max = 2;
};

struct WeakConfig {
    weak::WeakCouplingParams params;
    double t_max = 5.0;
    int samples = 51;
};

struct Fig2Config {
    Grid alpha0_sq{1.0, 1.0e4, 41, Spacing::Log};
    double t = 0.0;
};

struct Fig3Config {
    Grid gain{0.05, 2.0, 40, Spacing::Linear};
    double t = 1.0;
    std::optional<double> ratio_c;  // default n_h (n_c + 1) / (n_h - n_c) from the weak section
};

struct SweepAxis {
    std::string name;
    Grid grid;
};

struct SweepConfig {
    std::string observable = "v_sq";
    std::vector<SweepAxis> axes;
    double t = 0.0;  // evaluation time when "t" is not swept
};

struct Tolerances {
    double ode_rel_tol = 1e-10;
    double quadrature_rel_tol = 1e-8;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::Strong;
    std::filesystem::path output_dir = "out";
    FloatFormat float_format = FloatFormat::Fixed17;
    Tolerances tolerances;
    TrajectoryConfig trajectory;
    ModesConfig modes;
    StrongConfig strong;
    WeakConfig weak;
    Fig2Config fig2;
    Fig3Config fig3;
    SweepConfig sweep;

    /// Parses and validates. When `scenario` is given it must agree with a
    /// "scenario" key in the document, if present. Throws ValidationError.
    static ScenarioConfig from_json(const json& doc, std::optional<Scenario> scenario = std::nullopt);

    /// Normalized document with every default filled in; from_json(to_json())
    /// reproduces the config.
    json to_json() const;
};

/// Names accepted as sweep axes for an observable.
std::vector<std::string> sweep_parameters(const std::string& observable);
std::vector<std::string> sweep_observables();

struct OutputFile {
    std::string name;
    std::size_t rows = 0;
    std::string checksum;  // "fnv1a64:<16 hex digits>"
};

struct RunReport {
    json input;
    json derived;
    std::vector<OutputFile> files;
    json validation;

    json to_json() const;
};

/// In-memory CSV table; rows hold doubles only.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string render(FloatFormat format) const;
};

/// 64-bit FNV-1a digest of a byte string, hex encoded.
std::string fnv1a64(std::string_view bytes);

/// Runs the configured scenario, writing into config.output_dir.
RunReport run_scenario(const ScenarioConfig& config);

/// fig2: (alpha0_sq, eta, eta_ssd); fig3: (gain, ergotropy, thermal, mean).
Table figure_table(Scenario figure, const ScenarioConfig& config);

/// Cartesian grid of the sweep observable, row-major over the axes (last
/// axis fastest). Grid points are evaluated on `threads` workers.
Table sweep_table(const ScenarioConfig& config, unsigned threads = 0);

/// Worker count from HAWKAMP_THREADS, else the hardware concurrency.
unsigned thread_count_from_env();

}  // namespace hawkamp::scenario
