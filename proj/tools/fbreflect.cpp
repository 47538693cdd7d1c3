// fbreflect: reflect, extend and verify free boundary minimal surfaces.

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>

#include "fbr/config.hpp"
#include "fbr/errors.hpp"
#include "fbr/run.hpp"

namespace {

// Flags are collected as text and applied after the config file, so they win.
struct Flags {
    std::optional<std::string> config;
    std::map<std::string, std::optional<std::string>> values;
    bool wrap = false;
};

void add_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config, "key = value settings file");
    const std::vector<std::pair<std::string, std::string>> opts{
        {"surface", "catalog selector, e.g. critical-catenoid or noncritical-catenoid:0.9, or file:<path>"},
        {"steps", "number of reflection steps n"},
        {"grid", "sampling grid NXxNY"},
        {"tol-steklov", "Steklov residual tolerance"},
        {"tol-match", "seam matching tolerance"},
        {"tol-quad", "total curvature tolerance, relative to 4 pi"},
        {"out", "output directory (default $FBREFLECT_OUT or ./fbreflect-out)"},
        {"threads", "worker threads for grid evaluation"},
        {"seed", "sampling seed"},
        {"export", "mesh format: obj or csv"},
        {"edge", "edge label to reflect across"},
        {"checks", "comma-separated check names to report"},
    };
    for (const auto& [name, help] : opts) cmd->add_option("--" + name, flags.values[name], help);
    cmd->add_flag("--wrap", flags.wrap, "close the periodic direction with seam faces");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical reflection of free boundary minimal surfaces"};
    app.require_subcommand(1);
    Flags flags;
    for (const char* name : {"reflect", "extend", "verify", "report", "export-mesh"}) {
        auto* cmd = app.add_subcommand(name);
        add_flags(cmd, flags);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : fbr::kExitInput;
    }

    fbr::RunConfig config;
    try {
        if (flags.config) config = fbr::load_config(*flags.config);
        config.operation = app.get_subcommands().front()->get_name();
        for (const auto& [key, value] : flags.values)
            if (value) fbr::apply_setting(config, key, *value);
        if (flags.wrap) config.wrap = true;
        if (config.operation == "export-mesh" && config.export_format.empty()) config.export_format = "obj";
    } catch (const fbr::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fbr::kExitInput;
    }
    return fbr::run(config);
}
