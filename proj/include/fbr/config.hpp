#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace fbr {

struct RunConfig {
    std::string operation = "verify";  // reflect | extend | verify | report | export-mesh
    std::string surface = "critical-catenoid";
    int steps = -1;                    // -1: operation default (8 for extend and verify, else 0)
    int nx = 64, ny = 32;
    double steklov_tol = 1e-8;
    double match_tol = 1e-8;
    double quad_tol = 1e-2;            // total curvature, relative to 4 pi
    std::string out_dir;               // empty: $FBREFLECT_OUT, else ./fbreflect-out
    std::uint64_t seed = 1;
    int threads = 1;
    bool wrap = false;
    std::string export_format;         // "", "obj" or "csv"
    std::string edge;                  // reflect: edge label, empty for the first free edge
    std::vector<std::string> checks;   // empty: every applicable check

    int effective_steps() const;
    std::string output_dir() const;
    /// Throws InputError on out-of-range values.
    void validate() const;
};

/// One setting by key, as it appears in a config file ("tol-steklov" and "steklov_tol" both work).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Line-oriented `key = value`; '#' starts a comment. Errors name the line.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// "64x32" -> {64, 32}.
std::pair<int, int> parse_grid(const std::string& text);

}  // namespace fbr
