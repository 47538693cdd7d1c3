#include "fbr/report.hpp"

#include <cmath>
#include <sstream>

#include "fbr/errors.hpp"
#include "fbr/format.hpp"

namespace fbr {

namespace {

Json vec(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

void write_value(std::ostream& out, const Json& v, int indent) {
    const std::string pad(indent + 2, ' '), close(indent, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << pad << Json(it.key()).dump() << ": ";
                write_value(out, it.value(), indent + 2);
            }
            out << '\n' << close << '}';
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out << "[]";
                return;
            }
            // Short numeric arrays stay on one line.
            bool flat = v.size() <= 4;
            for (const auto& e : v) flat = flat && e.is_primitive();
            if (flat) {
                out << '[';
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out << ", ";
                    write_value(out, v[i], indent);
                }
                out << ']';
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out << ",\n";
                out << pad;
                write_value(out, v[i], indent + 2);
            }
            out << '\n' << close << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            out << (std::isfinite(d) ? format_double(d) : "null");
            return;
        }
        default:
            out << v.dump();
    }
}

}  // namespace

CheckResult make_check(std::string name, double value, std::string comparison, double tolerance, std::string note) {
    CheckResult c{std::move(name), "fail", value, tolerance, std::move(comparison), std::move(note), std::nullopt};
    bool ok = false;
    if (c.comparison == "<=") ok = value <= tolerance;
    else if (c.comparison == ">=") ok = value >= tolerance;
    else if (c.comparison == "<") ok = value < tolerance;
    else if (c.comparison == ">") ok = value > tolerance;
    else throw InputError("unknown comparison '" + c.comparison + "'");
    c.status = ok ? "pass" : "fail";
    return c;
}

CheckResult reported_check(std::string name, double value, std::string note) {
    return {std::move(name), "skipped", value, 0.0, "", std::move(note), std::nullopt};
}

void VerificationReport::add(CheckResult c) {
    for (auto& existing : checks)
        if (existing.name == c.name) {
            existing = std::move(c);
            return;
        }
    checks.push_back(std::move(c));
}

bool VerificationReport::passed() const {
    for (const auto& c : checks)
        if (c.failed()) return false;
    return true;
}

Json to_json(const CheckResult& c) {
    Json j;
    j["name"] = c.name;
    j["status"] = c.status;
    j["value"] = c.value;
    if (!c.comparison.empty()) {
        j["comparison"] = c.comparison;
        j["tolerance"] = c.tolerance;
    }
    if (!c.note.empty()) j["note"] = c.note;
    if (c.location) j["location"] = Json::array({c.location->first, c.location->second});
    return j;
}

Json to_json(const CurvatureReport& r) {
    Json j;
    j["hopf"] = {{"samples", r.hopf.samples},         {"beta_sup", r.hopf.beta_sup},
                 {"alpha_mean", r.hopf.alpha_mean},   {"alpha_std", r.hopf.alpha_std},
                 {"alpha_spread", r.hopf.alpha_spread}, {"c", r.hopf.c},
                 {"K_max", r.hopf.K_max},             {"K_min", r.hopf.K_min}};
    j["total_curvature"] = {{"quadrature", r.total.value}, {"tail", r.total.tail}, {"total", r.total.total},
                            {"rate_lo", r.total.rate_lo},  {"rate_hi", r.total.rate_hi},
                            {"fit_residual", r.total.fit_residual}};
    Json lines = Json::array();
    for (const auto& l : r.lines)
        lines.push_back({{"label", l.label},
                         {"flux", vec(l.flux)},
                         {"steklov", l.steklov},
                         {"schwarz", l.schwarz},
                         {"convexity", l.convexity}});
    j["lines"] = lines;
    j["flux_sum"] = vec(r.flux_sum);
    return j;
}

Json VerificationReport::to_json() const {
    Json j;
    j["operation"] = operation;
    j["surface"] = surface;
    j["steps"] = steps;
    j["seed"] = seed;
    j["timestamp"] = timestamp;
    j["status"] = passed() ? "pass" : "fail";
    j["lineage"] = lineage;
    Json cs = Json::array();
    for (const auto& c : checks) cs.push_back(fbr::to_json(c));
    j["checks"] = cs;
    if (curvature) j["curvature"] = fbr::to_json(*curvature);
    if (!extra.empty()) j["details"] = extra;
    return j;
}

void write_json(std::ostream& out, const Json& value) {
    write_value(out, value, 0);
    out << '\n';
}

std::string dump_json(const Json& value) {
    std::ostringstream ss;
    write_json(ss, value);
    return ss.str();
}

}  // namespace fbr
