#include "pss/report.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pss {

void Report::add(const std::string& name, const std::string& anchor, double residual,
                 double tolerance) {
    checks.push_back({name, anchor, std::abs(residual) <= tolerance, residual, tolerance});
}

void Report::add_exact(const std::string& name, const std::string& anchor, bool pass) {
    checks.push_back({name, anchor, pass, 0.0, 0.0});
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string Report::to_json() const {
    nlohmann::json j;
    j["schema"] = "pss-report-v1";
    j["pass"] = all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"anchor", c.anchor},
                               {"pass", c.pass},
                               {"residual", c.residual},
                               {"tolerance", c.tolerance}});
    return j.dump(2) + "\n";
}

void Report::write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("report: cannot open " + path);
    os << to_json();
}

}  // namespace pss
