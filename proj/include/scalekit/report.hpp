#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace scalekit {

// One verified identity: the analytic route, the independent oracle (Monte
// Carlo, closed form, or transform), and the error budget the comparison
// must meet. `anchor` spells out the identity being exercised.
struct ReportRow {
    std::string identity;
    std::string anchor;
    double analytic = 0.0;
    double oracle = 0.0;
    double budget = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<ReportRow> rows;

    bool all_pass() const;
    nlohmann::ordered_json to_json() const;
    static VerificationReport from_json(const nlohmann::ordered_json& j);
};

// serialization is fully deterministic (fixed key order, shortest-round-trip
// doubles, no timestamps), so identical runs produce identical bytes
void write_report(const VerificationReport& report, const std::string& path);

ReportRow make_row(std::string identity, std::string anchor, double analytic, double oracle,
                   double budget);

}  // namespace scalekit
