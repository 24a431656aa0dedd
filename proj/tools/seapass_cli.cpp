// Command-line front end: seapass <check|bounds|bode|compare|tune|reproduce> [options]

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "seapass/commands.hpp"
#include "seapass/config.hpp"

namespace {

struct Options {
    std::string config;
    std::string output;
    std::string scenario;
    seapass::OutputFormat format = seapass::OutputFormat::Table;
    double margin = 0.1;
    bool both = false;
};

void add_format(CLI::App* cmd, Options& o) {
    static const std::map<std::string, seapass::OutputFormat> kFormats{{"table", seapass::OutputFormat::Table},
                                                                      {"json", seapass::OutputFormat::Json}};
    cmd->add_option("--format", o.format, "table or json")->transform(CLI::CheckedTransformer(kFormats));
}

int dispatch(const CLI::App& app, const Options& o) {
    using namespace seapass;
    if (app.got_subcommand("reproduce"))
        return cmd_reproduce(o.scenario, o.output.empty() ? std::string(".") : o.output, o.format, std::cout);

    const AnalysisConfig cfg = load_config(o.config);
    if (app.got_subcommand("check")) return cmd_check(cfg, o.format, std::cout);
    if (app.got_subcommand("bounds")) return cmd_bounds(cfg, o.format, std::cout);
    if (app.got_subcommand("bode")) return cmd_bode(cfg, o.output, std::cout, std::cerr);
    if (app.got_subcommand("compare")) return cmd_compare(cfg, o.format, std::cout);
    return cmd_tune(cfg, o.margin, o.both, o.format, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Passivity analysis of cascaded PI control for series elastic actuators"};
    app.require_subcommand(1);
    Options o;

    auto* check = app.add_subcommand("check", "decide passivity by both routes");
    auto* bounds = app.add_subcommand("bounds", "print damping, inertia and stiffness bounds");
    auto* bode_cmd = app.add_subcommand("bode", "write the frequency response as CSV");
    auto* compare = app.add_subcommand("compare", "evaluate published design guidelines next to the exact test");
    auto* tune_cmd = app.add_subcommand("tune", "recommend gains for the config's plant and target");
    for (auto* cmd : {check, bounds, bode_cmd, compare, tune_cmd})
        cmd->add_option("--config", o.config, "analysis config (JSON)")->required()->check(CLI::ExistingFile);
    for (auto* cmd : {check, bounds, compare, tune_cmd}) add_format(cmd, o);
    bode_cmd->add_option("--output", o.output, "CSV path (stdout when omitted)");
    tune_cmd->add_option("--margin", o.margin, "relative safety margin in (0, 1)")->check(CLI::Range(0.0, 1.0));
    tune_cmd->add_flag("--both", o.both, "for a spring target, also require null-impedance passivity");

    auto* reproduce = app.add_subcommand("reproduce", "regenerate a reference scenario");
    reproduce->add_option("--scenario", o.scenario, "scenario id")->required();
    reproduce->add_option("--output", o.output, "output directory (default .)");
    add_format(reproduce, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return seapass::kExitUsage;
    }

    try {
        return dispatch(app, o);
    } catch (const seapass::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return seapass::kExitUsage;
    }
}
