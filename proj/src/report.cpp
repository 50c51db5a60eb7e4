#include "scalekit/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace scalekit {

bool VerificationReport::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json out;
    out["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["identity"] = r.identity;
        row["anchor"] = r.anchor;
        row["analytic"] = r.analytic;
        row["oracle"] = r.oracle;
        row["budget"] = r.budget;
        row["verdict"] = r.pass ? "pass" : "fail";
        out["rows"].push_back(std::move(row));
    }
    out["all_pass"] = all_pass();
    return out;
}

VerificationReport VerificationReport::from_json(const nlohmann::ordered_json& j) {
    VerificationReport rep;
    for (const auto& row : j.at("rows")) {
        ReportRow r;
        r.identity = row.at("identity").get<std::string>();
        r.anchor = row.at("anchor").get<std::string>();
        r.analytic = row.at("analytic").get<double>();
        r.oracle = row.at("oracle").get<double>();
        r.budget = row.at("budget").get<double>();
        r.pass = row.at("verdict").get<std::string>() == "pass";
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

void write_report(const VerificationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << report.to_json().dump(2) << '\n';
}

ReportRow make_row(std::string identity, std::string anchor, double analytic, double oracle,
                   double budget) {
    ReportRow r;
    r.identity = std::move(identity);
    r.anchor = std::move(anchor);
    r.analytic = analytic;
    r.oracle = oracle;
    r.budget = budget;
    r.pass = std::isfinite(analytic) && std::isfinite(oracle) &&
             std::abs(analytic - oracle) <= budget;
    return r;
}

}  // namespace scalekit
