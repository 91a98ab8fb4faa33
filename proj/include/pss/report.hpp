#pragma once

#include <string>
#include <vector>

namespace pss {

/// One verified claim: what was checked, which identity it pins, the measured
/// residual, and the tolerance it was held to (0 for exact-symbolic checks).
struct Check {
    std::string name;
    std::string anchor;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
};

struct Report {
    std::vector<Check> checks;

    void add(const std::string& name, const std::string& anchor, double residual,
             double tolerance);
    void add_exact(const std::string& name, const std::string& anchor, bool pass);
    bool all_pass() const;

    /// Stable machine-readable schema:
    /// { "schema": "pss-report-v1", "pass": bool, "checks": [ {name, anchor,
    ///   pass, residual, tolerance}, ... ] }
    std::string to_json() const;
    void write(const std::string& path) const;
};

}  // namespace pss
