#include "degstein/report_io.hpp"

#include <cstdio>

namespace degstein {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json to_json(const RunManifest& manifest) {
    return json{{"command", manifest.command},
                {"config", manifest.config},
                {"seed", manifest.seed},
                {"version", manifest.version},
                {"duration_seconds", manifest.duration_seconds},
                {"started_at_unix", manifest.started_at_unix}};
}

json to_json(const ExactDist& dist) {
    json pmf = json::object();
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        pmf[std::to_string(dist.support[i])] = dist.probs[i];
    return json{{"support", dist.support}, {"probs", dist.probs}, {"pmf", pmf}};
}

json to_json(const RationalDist& dist) {
    json num = json::object();
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        num[std::to_string(dist.support[i])] = u128_to_string(dist.num[i]);
    return json{{"support", dist.support},
                {"numerators", num},
                {"denominator", u128_to_string(dist.den)}};
}

json to_json(const RateReport& report) {
    json cells = json::array();
    for (const auto& c : report.cells)
        cells.push_back(json{{"n", c.n},
                             {"theta", c.theta},
                             {"d", c.d},
                             {"samples", c.samples},
                             {"kolmogorov", c.kolmogorov},
                             {"dkw_halfwidth", c.dkw_halfwidth},
                             {"r", c.r},
                             {"kolmogorov_times_r", c.product}});
    json fits = json::array();
    for (const auto& f : report.fits)
        fits.push_back(json{{"theta", f.theta},
                            {"d", f.d},
                            {"slope", f.slope},
                            {"intercept", f.intercept},
                            {"c_hat", f.c_hat}});
    return json{{"schema", "degstein.rate_report.v1"},
                {"dkw_alpha", report.dkw_alpha},
                {"cells", cells},
                {"fits", fits},
                {"skipped", report.skipped}};
}

json to_json(const AuditReport& report) {
    json cells = json::array();
    for (const auto& c : report.cells)
        cells.push_back(json{{"n", c.n},
                             {"theta", c.theta},
                             {"d", c.d},
                             {"samples", c.samples},
                             {"psi_hat", c.psi_hat},
                             {"psi_se", c.psi_se},
                             {"k2_hat", c.k2_hat},
                             {"k4_hat", c.k4_hat},
                             {"k2w_hat", c.k2w_hat},
                             {"k2b_hat", c.k2b_hat},
                             {"b2_hat", c.b2_hat},
                             {"q1", c.q1},
                             {"q2", c.q2},
                             {"q3", c.q3},
                             {"q4", c.q4},
                             {"suff_k4", c.suff_k4},
                             {"suff_k4b2", c.suff_k4b2},
                             {"wasserstein_bound", c.wasserstein_bound},
                             {"wasserstein_hat", c.wasserstein_hat},
                             {"wasserstein_se", c.wasserstein_se},
                             {"t_mass_l1", c.t_mass_l1},
                             {"sigma2_ratio", c.sigma2_ratio},
                             {"r_ratio", c.r_ratio},
                             {"coupling_violations", c.coupling_violations}});
    json verdicts = json::array();
    for (const auto& v : report.verdicts)
        verdicts.push_back(json{{"theta", v.theta},
                                {"d", v.d},
                                {"q1_bounded", v.q1_bounded},
                                {"q2_bounded", v.q2_bounded},
                                {"q4_bounded", v.q4_bounded}});
    return json{{"schema", "degstein.audit_report.v1"},
                {"cells", cells},
                {"verdicts", verdicts},
                {"skipped", report.skipped}};
}

json to_json(const std::vector<RatioRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back(json{{"n", r.n},
                           {"tau_dev", r.tau_dev},
                           {"delta_dev", r.delta_dev},
                           {"r_dev", r.r_dev},
                           {"sigma2_dev", r.sigma2_dev}});
    return json{{"schema", "degstein.ratio_table.v1"}, {"rows", out}};
}

std::string rate_report_csv(const RateReport& report) {
    std::string out = "n,theta,d,samples,kolmogorov,dkw_halfwidth,r,kolmogorov_times_r\n";
    for (const auto& c : report.cells) {
        out += std::to_string(c.n) + ',' + format_double(c.theta) + ',' + std::to_string(c.d) +
               ',' + std::to_string(c.samples) + ',' + format_double(c.kolmogorov) + ',' +
               format_double(c.dkw_halfwidth) + ',' + format_double(c.r) + ',' +
               format_double(c.product) + '\n';
    }
    return out;
}

std::string audit_report_csv(const AuditReport& report) {
    std::string out =
        "n,theta,d,samples,psi_hat,psi_se,k2_hat,k4_hat,k2w_hat,k2b_hat,b2_hat,q1,q2,q3,q4,"
        "suff_k4,suff_k4b2,wasserstein_bound,wasserstein_hat,wasserstein_se,t_mass_l1,"
        "sigma2_ratio,r_ratio,coupling_violations\n";
    for (const auto& c : report.cells) {
        out += std::to_string(c.n) + ',' + format_double(c.theta) + ',' + std::to_string(c.d) +
               ',' + std::to_string(c.samples) + ',' + format_double(c.psi_hat) + ',' +
               format_double(c.psi_se) + ',' + format_double(c.k2_hat) + ',' +
               format_double(c.k4_hat) + ',' + format_double(c.k2w_hat) + ',' +
               format_double(c.k2b_hat) + ',' + format_double(c.b2_hat) + ',' +
               format_double(c.q1) + ',' + format_double(c.q2) + ',' + format_double(c.q3) +
               ',' + format_double(c.q4) + ',' + format_double(c.suff_k4) + ',' +
               format_double(c.suff_k4b2) + ',' + format_double(c.wasserstein_bound) + ',' +
               format_double(c.wasserstein_hat) + ',' + format_double(c.wasserstein_se) + ',' +
               format_double(c.t_mass_l1) + ',' + format_double(c.sigma2_ratio) + ',' +
               format_double(c.r_ratio) + ',' + std::to_string(c.coupling_violations) + '\n';
    }
    return out;
}

std::string ratio_table_csv(const std::vector<RatioRow>& rows) {
    std::string out = "n,tau_dev,delta_dev,r_dev,sigma2_dev\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + ',' + format_double(r.tau_dev) + ',' +
               format_double(r.delta_dev) + ',' + format_double(r.r_dev) + ',' +
               format_double(r.sigma2_dev) + '\n';
    return out;
}

}  // namespace degstein
