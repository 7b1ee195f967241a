#include "hawkamp/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "hawkamp/ergotropy.hpp"
#include "hawkamp/geometry.hpp"

namespace hawkamp::scenario {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

// Typed accessor over one JSON object that remembers which keys were read,
// so leftovers can be rejected as unknown.
class Section {
public:
    Section(const json* node, std::string path) : node_(node), path_(std::move(path)) {
        if (node_ && !node_->is_object()) invalid(path_ + " must be a JSON object");
    }

    double number(const std::string& key, double fallback) {
        const json* v = get(key);
        if (!v || v->is_null()) return fallback;
        if (!v->is_number()) invalid(where(key) + " must be a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) invalid(where(key) + " must be finite");
        return x;
    }

    std::optional<double> optional_number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const json* v = get(key);
        if (!v) return fallback;
        if (v->is_null()) return std::nullopt;
        return number(key, 0.0);
    }

    int integer(const std::string& key, int fallback) {
        const json* v = get(key);
        if (!v || v->is_null()) return fallback;
        if (!v->is_number_integer()) invalid(where(key) + " must be an integer");
        return v->get<int>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = get(key);
        if (!v || v->is_null()) return fallback;
        if (!v->is_string()) invalid(where(key) + " must be a string");
        return v->get<std::string>();
    }

    /// A complex value given as [re, im] or as a bare real number.
    std::complex<double> complex_value(const std::string& key, std::complex<double> fallback) {
        const json* v = get(key);
        if (!v || v->is_null()) return fallback;
        if (v->is_number()) return {number(key, 0.0), 0.0};
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
            invalid(where(key) + " must be a number or a [re, im] pair");
        }
        const std::complex<double> z{(*v)[0].get<double>(), (*v)[1].get<double>()};
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) invalid(where(key) + " must be finite");
        return z;
    }

    /// Raw child node (may be null when absent).
    const json* child(const std::string& key) {
        const json* v = get(key);
        return v && !v->is_null() ? v : nullptr;
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        if (!node_) return;
        for (const auto& [key, _] : node_->items()) {
            if (!seen_.count(key)) invalid("unknown key '" + where(key) + "'");
        }
    }

private:
    const json* get(const std::string& key) {
        seen_.insert(key);
        if (!node_) return nullptr;
        auto it = node_->find(key);
        return it == node_->end() ? nullptr : &*it;
    }

    const json* node_;
    std::string path_;
    std::set<std::string> seen_;
};

Grid parse_grid(const json* node, const std::string& path, const Grid& fallback) {
    if (!node) return fallback;
    Section s(node, path);
    Grid g;
    g.min = s.number("min", fallback.min);
    g.max = s.number("max", fallback.max);
    g.count = s.integer("count", fallback.count);
    const std::string spacing = s.string("spacing", fallback.spacing == Spacing::Log ? "log" : "linear");
    s.finish();
    if (spacing == "linear") {
        g.spacing = Spacing::Linear;
    } else if (spacing == "log") {
        g.spacing = Spacing::Log;
    } else {
        invalid(path + ".spacing must be \"linear\" or \"log\"");
    }
    if (g.count < 1) invalid(path + " is an empty grid (count must be >= 1)");
    if (g.count == 1 && g.min != g.max) invalid(path + " with count 1 needs min == max");
    if (g.count > 1 && !(g.min < g.max)) invalid(path + " needs min < max");
    if (g.spacing == Spacing::Log && !(g.min > 0.0)) invalid(path + " log spacing needs min > 0");
    return g;
}

json grid_json(const Grid& g) {
    return {{"min", g.min}, {"max", g.max}, {"count", g.count},
            {"spacing", g.spacing == Spacing::Log ? "log" : "linear"}};
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Runs a physics validate() and rewraps its error as a config error.
template <class F>
void check(const std::string& section, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        invalid(section + ": " + e.what());
    }
}

const std::vector<std::string> kStrongObservables = {"v_sq", "ergotropy_gain", "power"};
const std::vector<std::string> kWeakObservables = {"eta", "gain", "diffusion"};
const std::vector<std::string> kStrongAxes = {"t", "delta", "coupling", "g_h", "omega0", "nu", "n_s", "atoms"};
const std::vector<std::string> kWeakAxes = {"t", "alpha0_sq", "n_h", "n_c", "nu", "Omega_h", "g_h", "overlap_sq"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Trajectory: return "trajectory";
        case Scenario::Modes: return "modes";
        case Scenario::Strong: return "strong";
        case Scenario::Weak: return "weak";
        case Scenario::Fig2: return "fig2";
        case Scenario::Fig3: return "fig3";
        case Scenario::Sweep: return "sweep";
    }
    return "unknown";
}

std::optional<Scenario> scenario_from_string(std::string_view name) {
    for (Scenario s : {Scenario::Trajectory, Scenario::Modes, Scenario::Strong, Scenario::Weak, Scenario::Fig2,
                       Scenario::Fig3, Scenario::Sweep}) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

std::string format_double(double x, FloatFormat format) {
    if (x == 0.0) x = 0.0;  // fold -0
    if (format == FloatFormat::Fixed17) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.16e", x);
        return buf;
    }
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<double> Grid::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = min;
        return v;
    }
    const double n = count - 1;
    for (int k = 0; k < count; ++k) {
        const double f = k / n;
        v[static_cast<std::size_t>(k)] =
            spacing == Spacing::Linear ? min + (max - min) * f : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
    }
    v.front() = min;
    v.back() = max;
    return v;
}

std::vector<std::string> sweep_observables() {
    std::vector<std::string> all = kStrongObservables;
    all.insert(all.end(), kWeakObservables.begin(), kWeakObservables.end());
    return all;
}

std::vector<std::string> sweep_parameters(const std::string& observable) {
    if (contains(kStrongObservables, observable)) return kStrongAxes;
    if (contains(kWeakObservables, observable)) return kWeakAxes;
    return {};
}

// ---------------------------------------------------------------------------
// Config parsing

ScenarioConfig ScenarioConfig::from_json(const json& doc, std::optional<Scenario> scenario) {
    if (!doc.is_object()) invalid("config must be a JSON object");
    ScenarioConfig c;
    Section top(&doc, "");

    const std::string named = top.string("scenario", "");
    if (!named.empty()) {
        const auto s = scenario_from_string(named);
        if (!s) invalid("unknown scenario '" + named + "'");
        if (scenario && *s != *scenario) {
            invalid(std::string("config names scenario '") + named + "' but '" + to_string(*scenario) +
                    "' was requested");
        }
        c.scenario = *s;
    } else if (scenario) {
        c.scenario = *scenario;
    } else {
        invalid("no scenario given");
    }

    c.output_dir = top.string("output_dir", "out");
    const std::string ff = top.string("float_format", "fixed17");
    if (ff == "fixed17") {
        c.float_format = FloatFormat::Fixed17;
    } else if (ff == "shortest") {
        c.float_format = FloatFormat::Shortest;
    } else {
        invalid("float_format must be \"fixed17\" or \"shortest\"");
    }

    {
        Section s(top.child("tolerances"), "tolerances");
        c.tolerances.ode_rel_tol = s.number("ode_rel_tol", c.tolerances.ode_rel_tol);
        c.tolerances.quadrature_rel_tol = s.number("quadrature_rel_tol", c.tolerances.quadrature_rel_tol);
        s.finish();
        if (!(c.tolerances.ode_rel_tol > 1e-14 && c.tolerances.ode_rel_tol < 1e-3)) {
            invalid("tolerances.ode_rel_tol must lie in (1e-14, 1e-3)");
        }
        if (!(c.tolerances.quadrature_rel_tol > 0.0 && c.tolerances.quadrature_rel_tol < 1e-2)) {
            invalid("tolerances.quadrature_rel_tol must lie in (0, 1e-2)");
        }
    }

    {
        Section s(top.child("trajectory"), "trajectory");
        auto& t = c.trajectory;
        t.r_start = s.number("r_start", t.r_start);
        t.r_end = s.number("r_end", t.r_end);
        s.finish();
        t.tol = c.tolerances.ode_rel_tol;
        if (!(t.r_end > 1.0 + geometry::kHorizonGuard && t.r_end < t.r_start)) {
            invalid("trajectory needs 1 < r_end < r_start");
        }
    }

    {
        Section s(top.child("modes"), "modes");
        auto& m = c.modes;
        const std::string kind = s.string("kind", modes::to_string(m.spec.kind));
        const auto k = modes::mode_kind_from_string(kind);
        if (!k) invalid("modes.kind '" + kind + "' is not a known mode kind");
        m.spec.kind = *k;
        m.spec.frequency = s.number("frequency", m.spec.frequency);
        m.spec.mirror_radius = s.optional_number("mirror_radius", *k == modes::ModeKind::MirrorComposite
                                                                      ? std::optional<double>(4.0)
                                                                      : std::nullopt);
        m.r_start = s.number("r_start", m.r_start);
        m.r_end = s.number("r_end", m.r_end);
        m.samples = s.integer("samples", m.samples);
        m.frequency_step = s.number("frequency_step", m.frequency_step);
        const json* anchor = s.child("time_anchor");
        if (!anchor || (anchor->is_string() && anchor->get<std::string>() == "horizon_matched")) {
            m.time_anchor = std::nullopt;
        } else if (anchor->is_string() && anchor->get<std::string>() == "r_start") {
            m.time_anchor = m.r_start;
        } else if (anchor->is_number()) {
            m.time_anchor = anchor->get<double>();
        } else {
            invalid("modes.time_anchor must be a radius, \"r_start\" or \"horizon_matched\"");
        }
        s.finish();
        check("modes", [&] { m.spec.validate(); });
        if (!(m.r_end > 1.0 + geometry::kHorizonGuard && m.r_end < m.r_start)) invalid("modes needs 1 < r_end < r_start");
        if (m.samples < 2) invalid("modes.samples must be >= 2");
        if (m.time_anchor && !(*m.time_anchor > 1.0 + geometry::kHorizonGuard)) {
            invalid("modes.time_anchor must lie outside the horizon");
        }
        if (!(m.frequency_step > 0.0)) invalid("modes.frequency_step must be positive");
    }

    {
        Section s(top.child("strong"), "strong");
        auto& p = c.strong.params;
        p.g_h = s.number("g_h", p.g_h);
        p.phi_h = s.complex_value("phi_h", p.phi_h);
        p.omega0 = s.number("omega0", p.omega0);
        p.nu = s.number("nu", p.nu);
        p.Omega_h = s.number("Omega_h", p.Omega_h);
        p.n_s = s.integer("n_s", p.n_s);
        p.beta_h = s.number("beta_h", p.beta_h);
        p.atoms = s.integer("atoms", p.atoms);
        c.strong.t_max = s.optional_number("t_max");
        c.strong.samples = s.integer("samples", c.strong.samples);
        c.strong.m_max = s.integer("m_max", c.strong.m_max);
        s.finish();
        check("strong", [&] { p.validate(); });
        if (c.strong.samples < 2) invalid("strong.samples must be >= 2");
        if (c.strong.m_max < 0) invalid("strong.m_max must be >= 0");
        if (c.strong.t_max && !(*c.strong.t_max > 0.0)) invalid("strong.t_max must be positive");
        if (!c.strong.t_max && !(p.coupling() > 0.0)) invalid("strong.t_max is required when g_h |phi_h| = 0");
    }

    {
        Section s(top.child("weak"), "weak");
        auto& p = c.weak.params;
        p.g_h = s.number("g_h", p.g_h);
        p.overlap_sq = s.number("overlap_sq", p.overlap_sq);
        p.n_h = s.number("n_h", p.n_h);
        p.n_c = s.number("n_c", p.n_c);
        p.nu = s.number("nu", p.nu);
        p.Omega_h = s.number("Omega_h", p.Omega_h);
        p.alpha0 = s.complex_value("alpha0", p.alpha0);
        p.atoms = s.integer("atoms", p.atoms);
        c.weak.t_max = s.number("t_max", c.weak.t_max);
        c.weak.samples = s.integer("samples", c.weak.samples);
        s.finish();
        check("weak", [&] { p.validate(); });
        if (!(c.weak.t_max > 0.0)) invalid("weak.t_max must be positive");
        if (c.weak.samples < 2) invalid("weak.samples must be >= 2");
    }

    {
        Section s(top.child("fig2"), "fig2");
        c.fig2.alpha0_sq = parse_grid(s.child("alpha0_sq"), "fig2.alpha0_sq", c.fig2.alpha0_sq);
        c.fig2.t = s.number("t", c.fig2.t);
        s.finish();
        if (!(c.fig2.t >= 0.0)) invalid("fig2.t must be >= 0");
        if (!(c.fig2.alpha0_sq.min >= 0.0)) invalid("fig2.alpha0_sq must be >= 0");
    }

    {
        Section s(top.child("fig3"), "fig3");
        c.fig3.gain = parse_grid(s.child("gain"), "fig3.gain", c.fig3.gain);
        c.fig3.t = s.number("t", c.fig3.t);
        c.fig3.ratio_c = s.optional_number("ratio_c");
        s.finish();
        if (!(c.fig3.t >= 0.0)) invalid("fig3.t must be >= 0");
        if (!(c.fig3.gain.min > 0.0)) invalid("fig3.gain values must be positive");
        if (c.fig3.ratio_c && !(*c.fig3.ratio_c > 0.0)) invalid("fig3.ratio_c must be positive");
        if (!(c.fig3.gain.min > 0.0)) invalid("fig3.gain grid must be positive");
    }

    {
        Section s(top.child("sweep"), "sweep");
        c.sweep.observable = s.string("observable", c.sweep.observable);
        c.sweep.t = s.number("t", c.sweep.t);
        const json* axes = s.child("axes");
        s.finish();
        if (!contains(sweep_observables(), c.sweep.observable)) {
            invalid("sweep.observable '" + c.sweep.observable + "' is not one of: " + join(sweep_observables()));
        }
        if (axes) {
            if (!axes->is_array()) invalid("sweep.axes must be an array");
            const auto valid = sweep_parameters(c.sweep.observable);
            for (std::size_t i = 0; i < axes->size(); ++i) {
                const std::string path = "sweep.axes[" + std::to_string(i) + "]";
                const json& a = (*axes)[i];
                if (!a.is_object()) invalid(path + " must be an object");
                SweepAxis axis;
                json grid = a;
                if (!a.contains("name") || !a["name"].is_string()) invalid(path + ".name must be a string");
                axis.name = a["name"].get<std::string>();
                grid.erase("name");
                if (!contains(valid, axis.name)) {
                    invalid(path + ": cannot sweep '" + axis.name + "' for observable '" + c.sweep.observable +
                            "'; valid names: " + join(valid));
                }
                for (const auto& other : c.sweep.axes) {
                    if (other.name == axis.name) invalid(path + ": '" + axis.name + "' is swept twice");
                }
                axis.grid = parse_grid(&grid, path, Grid{});
                c.sweep.axes.push_back(axis);
            }
        }
        if (!(c.sweep.t >= 0.0)) invalid("sweep.t must be >= 0");
    }
    top.finish();

    // Scenario-specific requirements.
    switch (c.scenario) {
        case Scenario::Fig2:
            if (!c.weak.params.amplifying()) invalid("fig2 needs an amplifying weak section (n_h > n_c)");
            break;
        case Scenario::Fig3:
            if (!c.fig3.ratio_c && !c.weak.params.amplifying()) {
                invalid("fig3 needs fig3.ratio_c or an amplifying weak section (n_h > n_c)");
            }
            break;
        case Scenario::Sweep:
            if (c.sweep.axes.empty()) invalid("sweep needs at least one axis (empty sweep grid)");
            if (c.sweep.axes.size() > 2) invalid("sweep supports one or two axes");
            break;
        default: break;
    }
    return c;
}

json ScenarioConfig::to_json() const {
    json doc;
    doc["scenario"] = to_string(scenario);
    doc["output_dir"] = output_dir.string();
    doc["float_format"] = float_format == FloatFormat::Fixed17 ? "fixed17" : "shortest";
    doc["tolerances"] = {{"ode_rel_tol", tolerances.ode_rel_tol},
                         {"quadrature_rel_tol", tolerances.quadrature_rel_tol}};
    doc["trajectory"] = {{"r_start", trajectory.r_start}, {"r_end", trajectory.r_end}};
    doc["modes"] = {{"kind", modes::to_string(modes.spec.kind)},
                    {"frequency", modes.spec.frequency},
                    {"mirror_radius", optional_json(modes.spec.mirror_radius)},
                    {"r_start", modes.r_start},
                    {"r_end", modes.r_end},
                    {"samples", modes.samples},
                    {"frequency_step", modes.frequency_step},
                    {"time_anchor", modes.time_anchor ? json(*modes.time_anchor) : json("horizon_matched")}};
    const auto& sp = strong.params;
    doc["strong"] = {{"g_h", sp.g_h},       {"phi_h", complex_json(sp.phi_h)}, {"omega0", sp.omega0},
                     {"nu", sp.nu},         {"Omega_h", sp.Omega_h},           {"n_s", sp.n_s},
                     {"beta_h", sp.beta_h}, {"atoms", sp.atoms},               {"t_max", optional_json(strong.t_max)},
                     {"samples", strong.samples}, {"m_max", strong.m_max}};
    const auto& wp = weak.params;
    doc["weak"] = {{"g_h", wp.g_h}, {"overlap_sq", wp.overlap_sq}, {"n_h", wp.n_h},
                   {"n_c", wp.n_c}, {"nu", wp.nu},                 {"Omega_h", wp.Omega_h},
                   {"alpha0", complex_json(wp.alpha0)},            {"atoms", wp.atoms},
                   {"t_max", weak.t_max},                          {"samples", weak.samples}};
    doc["fig2"] = {{"alpha0_sq", grid_json(fig2.alpha0_sq)}, {"t", fig2.t}};
    doc["fig3"] = {{"gain", grid_json(fig3.gain)}, {"t", fig3.t}, {"ratio_c", optional_json(fig3.ratio_c)}};
    json axes = json::array();
    for (const auto& a : sweep.axes) {
        json g = grid_json(a.grid);
        g["name"] = a.name;
        axes.push_back(g);
    }
    doc["sweep"] = {{"observable", sweep.observable}, {"t", sweep.t}, {"axes", axes}};
    return doc;
}

// ---------------------------------------------------------------------------
// Output

std::string fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string Table::render(FloatFormat format) const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i], format);
        }
        out += '\n';
    }
    return out;
}

json RunReport::to_json() const {
    json manifest = json::array();
    for (const auto& f : files) manifest.push_back({{"file", f.name}, {"rows", f.rows}, {"checksum", f.checksum}});
    return {{"input", input}, {"derived", derived}, {"files", manifest}, {"validation", validation}};
}

namespace {

void require_finite_table(const Table& table, const std::string& name) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            if (!std::isfinite(table.rows[r][c])) {
                std::ostringstream os;
                os << "non-finite value in " << name << " row " << r << " column '" << table.header[c] << "'";
                throw NumericError("scenario", os.str());
            }
        }
    }
}

OutputFile write_table(const Table& table, const std::string& name, const ScenarioConfig& config) {
    require_finite_table(table, name);
    const std::string body = table.render(config.float_format);
    std::filesystem::create_directories(config.output_dir);
    const auto path = config.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << body;
    if (!out) throw std::runtime_error("failed writing " + path.string());
    return {name, table.rows.size(), fnv1a64(body)};
}

json check_entry(const std::string& name, double value, double limit) {
    return {{"check", name}, {"value", value}, {"limit", limit}, {"pass", value <= limit}};
}

std::vector<double> linspace(double a, double b, int n) { return Grid{a, b, n, Spacing::Linear}.values(); }

// --- trajectory -------------------------------------------------------------

void run_trajectory(const ScenarioConfig& c, RunReport& report) {
    const auto& tc = c.trajectory;
    const auto samples = geometry::integrate_geodesic(tc.r_start, tc.r_end, {tc.tol});
    Table table{{"tau", "t", "r", "r_star", "T", "X", "tau_closed", "t_closed"}, {}};
    double max_tau = 0.0, max_t = 0.0;
    for (const auto& s : samples) {
        const double tau_c = geometry::proper_time_of_radius(s.r);
        const double t_c = geometry::schwarzschild_time_of_radius(s.r, tc.r_start);
        const auto k = geometry::to_kruskal(s.t, s.r);
        table.rows.push_back({s.tau, s.t, s.r, geometry::regge_wheeler(s.r), k.T, k.X, tau_c, t_c});
        max_tau = std::max(max_tau, std::abs(s.tau - tau_c));
        max_t = std::max(max_t, std::abs(s.t - t_c));
    }
    report.files.push_back(write_table(table, "trajectory.csv", c));
    report.derived = {{"samples", samples.size()},
                      {"tau_start", geometry::proper_time_of_radius(tc.r_start)},
                      {"tau_end", geometry::proper_time_of_radius(tc.r_end)},
                      {"time_anchor", tc.r_start}};
    report.validation.push_back(check_entry("max |tau_ode - tau_closed|", max_tau, 10 * tc.tol));
    report.validation.push_back(check_entry("max |t_ode - t_closed|", max_t, 10 * tc.tol));
}

// --- modes ------------------------------------------------------------------

void run_modes(const ScenarioConfig& c, RunReport& report) {
    const auto& mc = c.modes;
    const auto traj = mc.time_anchor ? geometry::InfallTrajectory(mc.r_start, *mc.time_anchor)
                                     : geometry::InfallTrajectory::horizon_matched(mc.r_start);
    const auto taus = linspace(geometry::proper_time_of_radius(mc.r_start),
                               geometry::proper_time_of_radius(mc.r_end), mc.samples);
    const auto samples = modes::sample_along(mc.spec, traj, taus);

    Table table{{"tau", "t", "r", "T", "X", "re", "im", "in_support"}, {}};
    std::vector<modes::complex> values;
    for (const auto& s : samples) {
        table.rows.push_back({s.point.tau, s.point.t, s.point.r, s.kruskal.T, s.kruskal.X, s.value.amplitude.real(),
                              s.value.amplitude.imag(), s.value.in_support ? 1.0 : 0.0});
        values.push_back(s.value.amplitude);
    }
    report.files.push_back(write_table(table, "modes.csv", c));

    report.derived = {{"kind", modes::to_string(mc.spec.kind)},
                      {"frequency", mc.spec.frequency},
                      {"time_anchor", traj.time_anchor()},
                      {"overlap_sq_proper_time",
                       modes::overlap_integral(values, taus.front(), taus.back(), 0.0)}};

    const bool harmonic = mc.spec.kind == modes::ModeKind::SchwarzschildIngoing ||
                          mc.spec.kind == modes::ModeKind::SchwarzschildOutgoing;
    if (harmonic) {
        Table freq{{"tau", "r", "frequency", "relative_deviation"}, {}};
        for (std::size_t i = 1; i + 1 < taus.size(); ++i) {
            const double f = modes::instantaneous_frequency(mc.spec, traj, taus[i], mc.frequency_step);
            freq.rows.push_back({taus[i], samples[i].point.r, f, f / mc.spec.frequency - 1.0});
        }
        if (!freq.rows.empty()) {
            report.derived["frequency_at_innermost_sample"] = freq.rows.back()[2];
        }
        report.files.push_back(write_table(freq, "mode_frequency.csv", c));
    }
}

// --- strong -----------------------------------------------------------------

void run_strong(const ScenarioConfig& c, RunReport& report) {
    const auto& p = c.strong.params;
    const bool resonant = std::abs(p.detuning()) <= strong::kResonanceTolerance;
    const double t_max = c.strong.t_max ? *c.strong.t_max : std::numbers::pi / p.coupling();

    std::vector<double> times = linspace(0.0, t_max, c.strong.samples);
    std::vector<double> pulses;
    if (resonant && p.coupling() > 0.0) {
        pulses = strong::optimal_pulse_times(p, c.strong.m_max);
        for (double t : pulses) {
            if (t <= t_max) times.push_back(t);
        }
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
    }

    Table table{{"t", "u_sq", "v_sq", "ergotropy_gain", "power"}, {}};
    double unitarity = 0.0;
    for (double t : times) {
        const auto [u, v] = strong::rabi_amplitudes(p, t);
        unitarity = std::max(unitarity, std::abs(std::norm(u) + std::norm(v) - 1.0));
        table.rows.push_back(
            {t, std::norm(u), std::norm(v), strong::ergotropy_gain(p, t), strong::average_power(p, t)});
    }
    report.files.push_back(write_table(table, "strong.csv", c));

    json derived = {{"detuning", p.detuning()},
                    {"coupling", p.coupling()},
                    {"rabi_frequency", p.rabi_frequency()},
                    {"eta_ssd", strong::efficiency_strong(p.omega0, p.nu)},
                    {"resonant", resonant},
                    {"max_transfer_probability",
                     p.rabi_frequency() > 0 ? 4.0 * p.coupling() * p.coupling() / std::pow(p.rabi_frequency(), 2)
                                            : 0.0},
                    {"hot_branch_weights", strong::hot_branch_weights(p, 6)}};
    if (!pulses.empty()) {
        derived["pulse_times"] = pulses;
        json powers = json::array();
        for (int m = 0; m <= c.strong.m_max; ++m) powers.push_back(strong::max_power(p, m));
        derived["max_power"] = powers;
    }
    report.derived = derived;
    report.validation.push_back(check_entry("max ||u|^2 + |v|^2 - 1|", unitarity, 1e-12));
}

// --- weak -------------------------------------------------------------------

void run_weak(const ScenarioConfig& c, RunReport& report) {
    const auto& p = c.weak.params;
    const auto gd = weak::gain_diffusion(p);
    const auto gd_pop = weak::gain_diffusion_from_populations(p);
    const auto pops = weak::steady_state_populations(p.n_c);
    const bool amplifying = p.amplifying();

    Table table{{"t", "alpha_re", "alpha_im", "sigma_sq", "mean_photons", "ode_mean_photons", "work", "power"}, {}};
    if (amplifying) table.header.push_back("eta");
    double moment_err = 0.0;
    for (double t : linspace(0.0, c.weak.t_max, c.weak.samples)) {
        const auto state = weak::evolve_p_function(p.alpha0, gd.gain, gd.diffusion, t);
        const double n_ode =
            weak::photon_number_ode(std::norm(p.alpha0), gd.gain, gd.diffusion, t, c.tolerances.ode_rel_tol);
        const auto wp = weak::work_and_power(p.alpha0, gd.gain, p.nu, t, p.atoms);
        std::vector<double> row{t, state.mean.real(), state.mean.imag(), state.variance, state.mean_photons(),
                                n_ode, wp.work, wp.power};
        if (amplifying) row.push_back(weak::efficiency_weak(p.nu, p.Omega_h, p.alpha0, t, gd.gain, p.n_h, p.n_c));
        table.rows.push_back(std::move(row));
        const double scale = std::max(std::abs(n_ode), 1e-300);
        moment_err = std::max(moment_err, std::abs(state.mean_photons() - n_ode) / scale);
    }
    report.files.push_back(write_table(table, "weak.csv", c));

    report.derived = {{"gain", gd.gain},
                      {"diffusion", gd.diffusion},
                      {"rho_gg", pops.ground},
                      {"rho_ee", pops.excited},
                      {"amplifying", amplifying},
                      {"eta_ssd", p.nu / p.Omega_h}};
    if (amplifying) report.derived["noise_ratio"] = weak::noise_ratio(p.n_h, p.n_c);
    if (gd.gain == 0.0) report.derived["warning"] = "zero gain: n_h == n_c";
    if (gd.gain < 0.0) report.derived["warning"] = "attenuation: n_h < n_c";
    report.validation.push_back(check_entry("max relative |<n>_closed - <n>_ode|", moment_err, 1e-6));
    report.validation.push_back(check_entry("|G - G_populations| + |D - D_populations|",
                                            std::abs(gd.gain - gd_pop.gain) + std::abs(gd.diffusion - gd_pop.diffusion),
                                            1e-12 * std::max(1.0, std::abs(gd.diffusion))));
}

// --- figures ----------------------------------------------------------------

void run_figure(const ScenarioConfig& c, RunReport& report) {
    const Table table = figure_table(c.scenario, c);
    if (c.scenario == Scenario::Fig2) {
        report.files.push_back(write_table(table, "fig2.csv", c));
        const auto& p = c.weak.params;
        report.derived = {{"eta_ssd", p.nu / p.Omega_h},
                          {"noise_ratio", weak::noise_ratio(p.n_h, p.n_c)},
                          {"gain", weak::gain_diffusion(p).gain},
                          {"t", c.fig2.t}};
        bool below = true, increasing = true;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            below = below && table.rows[i][1] < table.rows[i][2];
            if (i) increasing = increasing && table.rows[i][1] > table.rows[i - 1][1];
        }
        report.validation.push_back({{"check", "eta < eta_ssd on every row"}, {"pass", below}});
        report.validation.push_back({{"check", "eta strictly increasing"}, {"pass", increasing}});
    } else {
        report.files.push_back(write_table(table, "fig3.csv", c));
        double residual = 0.0;
        for (const auto& r : table.rows) residual = std::max(residual, std::abs(r[3] - r[1] - r[2]));
        report.derived = {{"t", c.fig3.t}, {"ratio_c", c.fig3.ratio_c ? *c.fig3.ratio_c
                                                                       : weak::noise_ratio(c.weak.params.n_h,
                                                                                           c.weak.params.n_c)}};
        report.validation.push_back(check_entry("max |mean - ergotropy - thermal|", residual, 1e-12));
    }
}

// --- sweep ------------------------------------------------------------------

double evaluate_sweep_point(const ScenarioConfig& c, const std::vector<std::pair<std::string, double>>& values) {
    const std::string& obs = c.sweep.observable;
    double t = c.sweep.t;
    if (contains(kStrongObservables, obs)) {
        strong::StrongCouplingParams p = c.strong.params;
        std::optional<double> delta, coupling;
        for (const auto& [name, x] : values) {
            if (name == "t") t = x;
            else if (name == "delta") delta = x;
            else if (name == "coupling") coupling = x;
            else if (name == "g_h") p.g_h = x;
            else if (name == "omega0") p.omega0 = x;
            else if (name == "nu") p.nu = x;
            else if (name == "n_s") p.n_s = static_cast<int>(std::lround(x));
            else if (name == "atoms") p.atoms = static_cast<int>(std::lround(x));
        }
        if (coupling) {
            const double phase = std::abs(p.phi_h) > 0 ? std::arg(p.phi_h) : 0.0;
            p.phi_h = std::polar(*coupling / p.g_h, phase);
        }
        if (delta) p.Omega_h = p.omega0 + p.nu - *delta;
        if (obs == "v_sq") return std::norm(strong::rabi_amplitudes(p, t).v);
        if (obs == "ergotropy_gain") return strong::ergotropy_gain(p, t);
        return strong::average_power(p, t);
    }
    weak::WeakCouplingParams p = c.weak.params;
    for (const auto& [name, x] : values) {
        if (name == "t") t = x;
        else if (name == "alpha0_sq") {
            if (x < 0) throw DomainError("scenario", "alpha0_sq must be >= 0");
            const double phase = std::abs(p.alpha0) > 0 ? std::arg(p.alpha0) : 0.0;
            p.alpha0 = std::polar(std::sqrt(x), phase);
        } else if (name == "n_h") p.n_h = x;
        else if (name == "n_c") p.n_c = x;
        else if (name == "nu") p.nu = x;
        else if (name == "Omega_h") p.Omega_h = x;
        else if (name == "g_h") p.g_h = x;
        else if (name == "overlap_sq") p.overlap_sq = x;
    }
    const auto gd = weak::gain_diffusion(p);
    if (obs == "gain") return gd.gain;
    if (obs == "diffusion") return gd.diffusion;
    return weak::efficiency_weak(p.nu, p.Omega_h, p.alpha0, t, gd.gain, p.n_h, p.n_c);
}

void run_sweep(const ScenarioConfig& c, RunReport& report) {
    const Table table = sweep_table(c);
    report.files.push_back(write_table(table, "sweep.csv", c));
    report.derived = {{"observable", c.sweep.observable}, {"points", table.rows.size()}};
}

}  // namespace

Table figure_table(Scenario figure, const ScenarioConfig& c) {
    const auto& p = c.weak.params;
    Table table;
    if (figure == Scenario::Fig2) {
        table.header = {"alpha0_sq", "eta", "eta_ssd"};
        const double gain = weak::gain_diffusion(p).gain;
        const double eta_ssd = p.nu / p.Omega_h;
        for (double a2 : c.fig2.alpha0_sq.values()) {
            const double eta = weak::efficiency_weak(p.nu, p.Omega_h, std::sqrt(a2), c.fig2.t, gain, p.n_h, p.n_c);
            table.rows.push_back({a2, eta, eta_ssd});
        }
    } else if (figure == Scenario::Fig3) {
        table.header = {"gain", "ergotropy", "thermal", "mean"};
        const double ratio = c.fig3.ratio_c ? *c.fig3.ratio_c : weak::noise_ratio(p.n_h, p.n_c);
        const auto gains = c.fig3.gain.values();
        for (const auto& r : weak::energy_split_vs_gain(p.alpha0, p.nu, ratio, gains, c.fig3.t)) {
            table.rows.push_back({r.gain, r.ergotropy, r.thermal, r.mean});
        }
    } else {
        throw ValidationError("figure_table accepts fig2 or fig3 only");
    }
    return table;
}

unsigned thread_count_from_env() {
    if (const char* env = std::getenv("HAWKAMP_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Table sweep_table(const ScenarioConfig& c, unsigned threads) {
    if (c.sweep.axes.empty()) throw ValidationError("sweep needs at least one axis (empty sweep grid)");
    std::vector<std::vector<double>> grids;
    Table table;
    std::size_t total = 1;
    for (const auto& a : c.sweep.axes) {
        grids.push_back(a.grid.values());
        table.header.push_back(a.name);
        total *= grids.back().size();
    }
    table.header.push_back(c.sweep.observable);
    table.rows.assign(total, {});

    auto point = [&](std::size_t index) {
        std::vector<std::pair<std::string, double>> values(grids.size());
        std::size_t rem = index;
        for (std::size_t d = grids.size(); d-- > 0;) {
            values[d] = {c.sweep.axes[d].name, grids[d][rem % grids[d].size()]};
            rem /= grids[d].size();
        }
        std::vector<double> row;
        for (const auto& v : values) row.push_back(v.second);
        row.push_back(evaluate_sweep_point(c, values));
        return row;
    };

    if (threads == 0) threads = thread_count_from_env();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = total;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                table.rows[i] = point(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                // Keep the lowest failing index so the reported error is deterministic.
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return table;
}

RunReport run_scenario(const ScenarioConfig& config) {
    RunReport report;
    report.input = config.to_json();
    report.validation = json::array();
    switch (config.scenario) {
        case Scenario::Trajectory: run_trajectory(config, report); break;
        case Scenario::Modes: run_modes(config, report); break;
        case Scenario::Strong: run_strong(config, report); break;
        case Scenario::Weak: run_weak(config, report); break;
        case Scenario::Fig2:
        case Scenario::Fig3: run_figure(config, report); break;
        case Scenario::Sweep: run_sweep(config, report); break;
    }
    return report;
}

}  // namespace hawkamp::scenario
