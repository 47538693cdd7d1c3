#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fbr/geometry.hpp"

namespace fbr {

using Json = nlohmann::ordered_json;

/// status: "pass", "fail" or "skipped". Skipped checks still carry the measured value
/// when one was computed (reported, not asserted).
struct CheckResult {
    std::string name;
    std::string status;
    double value = 0.0;
    double tolerance = 0.0;
    std::string comparison;  // "<=", ">=", "<", ">"
    std::string note;
    std::optional<std::pair<double, double>> location;  // chart point of the sup-norm

    bool failed() const { return status == "fail"; }
};

/// Evaluates value `comparison` tolerance and fills the status.
CheckResult make_check(std::string name, double value, std::string comparison, double tolerance, std::string note = {});
/// Measured but not asserted.
CheckResult reported_check(std::string name, double value, std::string note = "reported only");

struct VerificationReport {
    std::string operation;
    std::string surface;
    int steps = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> lineage;
    std::vector<CheckResult> checks;
    std::optional<CurvatureReport> curvature;
    Json extra = Json::object();  // operation-specific payload
    std::string timestamp;

    void add(CheckResult c);
    bool passed() const;
    Json to_json() const;
};

Json to_json(const CheckResult& c);
Json to_json(const CurvatureReport& r);

/// Floats with 17 significant digits, non-finite values as null, two-space indent.
void write_json(std::ostream& out, const Json& value);
std::string dump_json(const Json& value);

}  // namespace fbr
