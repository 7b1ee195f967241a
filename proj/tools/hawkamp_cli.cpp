// hawkamp: scenario runner for the Hawking-radiation amplifier models.
//
//   hawkamp <scenario> --config <path> [--out <dir>] [--seedless]
//
// Exit status: 0 success, 2 validation or domain error, 3 numeric failure.
// Errors are written to stderr as one JSON object per line.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hawkamp/scenario.hpp"

namespace {

using hawkamp::scenario::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

int report_error(const std::string& kind, const std::string& module, const std::string& message, int code) {
    json err = {{"error", kind}, {"module", module}, {"message", message}};
    std::cerr << err.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent amplification driven by redirected Hawking radiation"};
    std::string scenario_name;
    std::string config_path;
    std::string out_dir;
    bool seedless = false;
    app.add_option("scenario", scenario_name, "trajectory | modes | strong | weak | fig2 | fig3 | sweep")->required();
    app.add_option("--config", config_path, "JSON scenario config")->required();
    app.add_option("--out", out_dir, "output directory (overrides output_dir in the config)");
    app.add_flag("--seedless", seedless, "accepted for interface compatibility; every run is deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("validation", "cli", e.what(), kExitValidation);
    }

    namespace sc = hawkamp::scenario;
    try {
        const auto scenario = sc::scenario_from_string(scenario_name);
        if (!scenario) {
            return report_error("validation", "cli", "unknown scenario '" + scenario_name + "'", kExitValidation);
        }
        std::ifstream in(config_path);
        if (!in) return report_error("validation", "cli", "cannot read config " + config_path, kExitValidation);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            return report_error("validation", "config", e.what(), kExitValidation);
        }
        auto config = sc::ScenarioConfig::from_json(doc, scenario);
        if (!out_dir.empty()) config.output_dir = out_dir;

        const sc::RunReport report = sc::run_scenario(config);
        json out = report.to_json();
        out["seedless"] = seedless;
        {
            std::ofstream rep(config.output_dir / "report.json", std::ios::binary);
            rep << out.dump(2) << '\n';
        }
        std::cout << out.dump(2) << '\n';
        return 0;
    } catch (const hawkamp::NumericError& e) {
        return report_error(e.kind(), e.module(), e.what(), kExitNumeric);
    } catch (const hawkamp::Error& e) {
        return report_error(e.kind(), e.module(), e.what(), kExitValidation);
    } catch (const std::exception& e) {
        return report_error("io", "cli", e.what(), kExitNumeric);
    }
}
