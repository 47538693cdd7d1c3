#include "fbr/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fbr/errors.hpp"

namespace fbr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string canonical_key(std::string k) {
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "tol_steklov") return "steklov_tol";
    if (k == "tol_match") return "match_tol";
    if (k == "tol_quad") return "quad_tol";
    if (k == "out") return "out_dir";
    if (k == "export") return "export_format";
    return k;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw InputError(key + ": '" + v + "' is not a number");
    return d;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long n = 0;
    try {
        n = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw InputError(key + ": '" + v + "' is not an integer");
    return n;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InputError(key + ": '" + v + "' is not a boolean");
}

}  // namespace

int RunConfig::effective_steps() const {
    if (steps >= 0) return steps;
    return operation == "extend" || operation == "verify" || operation == "report" ? 8 : 0;
}

std::string RunConfig::output_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("FBREFLECT_OUT"); env && *env) return env;
    return "fbreflect-out";
}

void RunConfig::validate() const {
    static const std::vector<std::string> ops{"reflect", "extend", "verify", "report", "export-mesh"};
    if (std::find(ops.begin(), ops.end(), operation) == ops.end())
        throw InputError("unknown operation '" + operation + "'");
    if (nx < 8 || ny < 8) throw InputError("grid resolution must be at least 8x8");
    if (!(steklov_tol > 0.0) || !(match_tol > 0.0) || !(quad_tol > 0.0)) throw InputError("tolerances must be positive");
    if (steps < -1) throw InputError("steps must be >= 0");
    if (threads < 1) throw InputError("threads must be >= 1");
    if (!export_format.empty() && export_format != "obj" && export_format != "csv")
        throw InputError("export format must be obj or csv");
    if (surface.empty()) throw InputError("no surface selected");
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value) {
    const std::string key = canonical_key(raw_key);
    if (key == "operation") c.operation = value;
    else if (key == "surface") c.surface = value;
    else if (key == "steps") c.steps = static_cast<int>(to_int(key, value));
    else if (key == "grid") std::tie(c.nx, c.ny) = parse_grid(value);
    else if (key == "nx") c.nx = static_cast<int>(to_int(key, value));
    else if (key == "ny") c.ny = static_cast<int>(to_int(key, value));
    else if (key == "steklov_tol") c.steklov_tol = to_double(key, value);
    else if (key == "match_tol") c.match_tol = to_double(key, value);
    else if (key == "quad_tol") c.quad_tol = to_double(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "threads") c.threads = static_cast<int>(to_int(key, value));
    else if (key == "wrap") c.wrap = to_bool(key, value);
    else if (key == "export_format") c.export_format = value;
    else if (key == "edge") c.edge = value;
    else if (key == "checks") {
        c.checks.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!trim(item).empty()) c.checks.push_back(trim(item));
    } else
        throw InputError("unknown setting '" + raw_key + "'");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("config line " + std::to_string(number) + ": expected key = value");
        try {
            apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const InputError& e) {
            throw InputError("config line " + std::to_string(number) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) throw InputError("grid must look like NXxNY, got '" + text + "'");
    return {static_cast<int>(to_int("grid", text.substr(0, x))), static_cast<int>(to_int("grid", text.substr(x + 1)))};
}

}  // namespace fbr
