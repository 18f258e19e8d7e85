// degstein: enumeration, simulation, audits, rate sweeps, Stein checks and
// the recursion demo behind one reproducible command-line tool.
//
// Exit codes: 0 success, 1 a check failed, 2 usage/domain error, 3 I/O error.
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "degstein/harness.hpp"
#include "degstein/moments.hpp"
#include "degstein/oracle.hpp"
#include "degstein/report_io.hpp"
#include "degstein/stein.hpp"

using namespace degstein;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
    std::uint64_t seed = 1;
    int threads = 1;
    double b = kDefaultCap;
    std::string out;
    std::string format = "both";  // csv, json or both
    std::string config;  // handled by inject_config before parsing
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "config file (key=value or flat JSON)");
    cmd->add_option("--seed", flags.seed, "master seed")->envname("DEGSTEIN_SEED");
    cmd->add_option("--threads", flags.threads, "worker threads")
        ->envname("DEGSTEIN_THREADS");
    cmd->add_option("--b", flags.b, "parameter cap b")->envname("DEGSTEIN_B");
    cmd->add_option("--out", flags.out, "output path prefix")->envname("DEGSTEIN_OUT");
    cmd->add_option("--format", flags.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->envname("DEGSTEIN_FORMAT");
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunManifest make_manifest(const std::string& command, const json& config,
                          std::uint64_t seed, const Stopwatch& watch) {
    RunManifest manifest;
    manifest.command = command;
    manifest.config = config;
    manifest.seed = seed;
    manifest.duration_seconds = watch.seconds();
    manifest.started_at_unix =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    return manifest;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::ios_base::failure("write to " + path + " failed");
}

// Emits the JSON payload (to stdout or <out>.json) and, when requested, the
// CSV next to it with the manifest in the JSON companion or a sidecar.
void emit(const json& payload, const std::string& csv, const CommonFlags& flags) {
    const bool want_json = flags.format != "csv";
    const bool want_csv = flags.format != "json" && !csv.empty();
    if (flags.out.empty()) {
        std::cout << payload.dump(2) << "\n";
        return;
    }
    if (want_json) write_file(flags.out + ".json", payload.dump(2) + "\n");
    if (want_csv) {
        write_file(flags.out + ".csv", csv);
        if (!want_json)
            write_file(flags.out + ".csv.manifest.json",
                       payload.at("manifest").dump(2) + "\n");
    }
}

// --config support: key=value lines or a flat JSON object. Values are
// injected as trailing flags for the active subcommand unless the flag is
// already present on the command line or the DEGSTEIN_ environment variable
// is set, which keeps the precedence flags > env > config > defaults.
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) {
        if (const char* env = std::getenv("DEGSTEIN_CONFIG")) config_path = env;
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw std::ios_base::failure("cannot read config file " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::pair<std::string, std::string>> pairs;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const json parsed = json::parse(text);
        for (const auto& [key, value] : parsed.items())
            pairs.emplace_back(key, value.is_string() ? value.get<std::string>()
                                                      : value.dump());
    } else {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!key.empty()) pairs.emplace_back(key, value);
        }
    }

    std::vector<std::string> out = args;
    for (const auto& [key, value] : pairs) {
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& arg : args)
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) given = true;
        std::string env_name = "DEGSTEIN_";
        for (char c : key) env_name += static_cast<char>(std::toupper(c));
        if (!given && std::getenv(env_name.c_str()) == nullptr) {
            out.push_back(flag);
            out.push_back(value);
        }
    }
    return out;
}

int cmd_enumerate(int n, double theta, int d, const CommonFlags& flags, bool rational) {
    const Stopwatch watch;
    const ModelParams params = ModelParams::checked(n, d, theta, flags.b);
    const ExactDist law = enumerate_count_law(params);
    const MomentSet ms = moment_set(params);
    json payload = to_json(law);
    payload["schema"] = "degstein.enumerate.v1";
    payload["n"] = n;
    payload["theta"] = theta;
    payload["d"] = d;
    payload["p"] = params.p();
    payload["mu_oracle"] = law.mean();
    payload["sigma2_oracle"] = law.variance();
    payload["mu_formula"] = ms.mu;
    payload["sigma2_formula"] = ms.sigma2;
    payload["mu_residual"] = law.mean() - ms.mu;
    payload["sigma2_residual"] = law.variance() - ms.sigma2;
    if (rational) payload["rational"] = to_json(enumerate_count_law_rational(params));
    const json config{{"n", n}, {"theta", theta}, {"d", d}, {"b", flags.b},
                      {"rational", rational}};
    payload["manifest"] = to_json(make_manifest("enumerate", config, 0, watch));
    emit(payload, "", flags);
    return kExitOk;
}

SweepConfig sweep_from(const std::vector<int>& n, const std::vector<double>& theta,
                       const std::vector<int>& d, std::int64_t samples,
                       const CommonFlags& flags) {
    SweepConfig cfg;
    cfg.n_grid = n;
    cfg.theta_grid = theta;
    cfg.d_list = d;
    cfg.samples = samples;
    cfg.seed = flags.seed;
    cfg.b = flags.b;
    cfg.threads = flags.threads;
    cfg.validate();
    return cfg;
}

json sweep_config_json(const SweepConfig& cfg, std::int64_t samples) {
    return json{{"n", cfg.n_grid},     {"theta", cfg.theta_grid}, {"d", cfg.d_list},
                {"samples", samples},  {"seed", cfg.seed},        {"b", cfg.b},
                {"threads", cfg.threads}};
}

int cmd_rate(const SweepConfig& cfg, const CommonFlags& flags) {
    const Stopwatch watch;
    const RateReport report = rate_sweep(cfg);
    json payload = to_json(report);
    payload["manifest"] = to_json(
        make_manifest("rate", sweep_config_json(cfg, cfg.samples), cfg.seed, watch));
    emit(payload, rate_report_csv(report), flags);
    return kExitOk;
}

int cmd_audit(const SweepConfig& cfg, const CommonFlags& flags) {
    const Stopwatch watch;
    const AuditReport report = condition_audit(cfg);
    json payload = to_json(report);
    payload["manifest"] = to_json(
        make_manifest("audit", sweep_config_json(cfg, cfg.samples), cfg.seed, watch));
    emit(payload, audit_report_csv(report), flags);
    return kExitOk;
}

int cmd_ratios(const std::vector<int>& n_list, int d, int grid, const CommonFlags& flags) {
    const Stopwatch watch;
    const auto rows = ratio_convergence(flags.b, d, n_list, grid);
    json payload = to_json(rows);
    const json config{{"n", n_list}, {"d", d}, {"grid", grid}, {"b", flags.b}};
    payload["manifest"] = to_json(make_manifest("ratios", config, 0, watch));
    emit(payload, ratio_table_csv(rows), flags);
    return kExitOk;
}

int cmd_stein_check(const std::vector<double>& zs, const std::vector<double>& lambdas,
                    double grid_step, const CommonFlags& flags) {
    const Stopwatch watch;
    double max_f = 0.0;
    double max_xf = 0.0;
    double max_fp = 0.0;
    for (double z : zs)
        for (double lambda : lambdas) {
            const SteinSolution sol = SteinSolution::make(SmoothedIndicator{z, lambda});
            for (double x = -10.0; x <= 10.0 + 1e-12; x += grid_step) {
                const SteinValue v = stein_solve(sol, x);
                max_f = std::max(max_f, std::fabs(v.f));
                max_xf = std::max(max_xf, std::fabs(x * v.f));
                max_fp = std::max(max_fp, std::fabs(v.fprime));
            }
        }
    const bool pass = max_f <= 1.0 + 1e-6 && max_xf <= 1.0 + 1e-6 && max_fp <= 1.0 + 1e-4;
    json payload{{"schema", "degstein.stein_check.v1"},
                 {"z", zs},
                 {"lambda", lambdas},
                 {"grid_step", grid_step},
                 {"max_abs_f", max_f},
                 {"max_abs_xf", max_xf},
                 {"max_abs_fprime", max_fp},
                 {"pass", pass}};
    const json config{{"z", zs}, {"lambda", lambdas}, {"grid_step", grid_step}};
    payload["manifest"] = to_json(make_manifest("stein-check", config, 0, watch));
    emit(payload, "", flags);
    std::cerr << "max |f| = " << max_f << ", max |xf| = " << max_xf
              << ", max |f'| = " << max_fp << " -> " << (pass ? "pass" : "fail") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_recursion(double forcing, double tau, const std::vector<double>& row,
                  const std::vector<double>& a_init, int horizon, const CommonFlags& flags) {
    const Stopwatch watch;
    RecursionProblem problem;
    problem.forcing = forcing;
    problem.tau = tau;
    problem.rows = {row.empty() ? std::vector<double>{tau} : row};
    problem.a_init = a_init.empty() ? std::vector<double>{0.0} : a_init;
    const RecursionResult result = recursion_bound(problem, horizon);
    json payload{{"schema", "degstein.recursion.v1"},
                 {"supremum", result.supremum},
                 {"bound_head", std::vector<double>(
                                    result.bound.begin(),
                                    result.bound.begin() +
                                        std::min<std::size_t>(result.bound.size(), 20))},
                 {"a_head", std::vector<double>(
                                result.a.begin(),
                                result.a.begin() +
                                    std::min<std::size_t>(result.a.size(), 20))}};
    const json config{{"f", forcing}, {"tau", tau}, {"row", problem.rows[0]},
                      {"a_init", problem.a_init}, {"horizon", horizon}};
    payload["manifest"] = to_json(make_manifest("recursion", config, 0, watch));
    emit(payload, "", flags);
    std::cerr << "supremum = " << result.supremum << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degree-count experiments for sparse random graphs"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "config file (key=value or flat JSON)")
        ->envname("DEGSTEIN_CONFIG");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "exact pmf of the degree count");
    int en_n = 3;
    double en_theta = 1.0;
    int en_d = 1;
    bool en_rational = false;
    CommonFlags en_flags;
    enumerate->add_option("--n", en_n, "vertex count")->required();
    enumerate->add_option("--theta", en_theta, "connectivity parameter")->required();
    enumerate->add_option("--d", en_d, "target degree")->required();
    enumerate->add_flag("--rational", en_rational, "include the exact rational pmf");
    add_common(enumerate, en_flags);

    // rate
    auto* rate = app.add_subcommand("rate", "Kolmogorov distance sweep over n");
    std::vector<int> rate_n{50, 100, 200, 400, 800};
    std::vector<double> rate_theta{1.0};
    std::vector<int> rate_d{1};
    std::int64_t rate_samples = 20000;
    CommonFlags rate_flags;
    rate->add_option("--n", rate_n, "n grid")->delimiter(',');
    rate->add_option("--theta", rate_theta, "theta grid")->delimiter(',');
    rate->add_option("--d", rate_d, "degree list")->delimiter(',');
    rate->add_option("--samples", rate_samples, "draws per cell")
        ->envname("DEGSTEIN_SAMPLES");
    add_common(rate, rate_flags);

    // audit
    auto* audit = app.add_subcommand("audit", "coupling condition audit");
    std::vector<int> audit_n{50, 100};
    std::vector<double> audit_theta{1.0};
    std::vector<int> audit_d{1};
    std::int64_t audit_samples = 20000;
    CommonFlags audit_flags;
    audit->add_option("--n", audit_n, "n grid")->delimiter(',');
    audit->add_option("--theta", audit_theta, "theta grid")->delimiter(',');
    audit->add_option("--d", audit_d, "degree list")->delimiter(',');
    audit->add_option("--samples", audit_samples, "draws per cell")
        ->envname("DEGSTEIN_SAMPLES");
    add_common(audit, audit_flags);

    // ratios
    auto* ratios = app.add_subcommand("ratios", "ratio convergence table");
    std::vector<int> ratio_n{100, 1000, 10000};
    int ratio_d = 1;
    int ratio_grid = 100;
    CommonFlags ratio_flags;
    ratios->add_option("--n", ratio_n, "n list")->delimiter(',');
    ratios->add_option("--d", ratio_d, "target degree");
    ratios->add_option("--grid", ratio_grid, "theta grid points");
    add_common(ratios, ratio_flags);

    // stein-check
    auto* stein = app.add_subcommand("stein-check", "solution bound check");
    std::vector<double> stein_z{-2.0, 0.0, 2.0};
    std::vector<double> stein_lambda{0.1, 1.0};
    double stein_step = 1e-3;
    CommonFlags stein_flags;
    stein->add_option("--z", stein_z, "thresholds")->delimiter(',');
    stein->add_option("--lambda", stein_lambda, "smoothing widths")->delimiter(',');
    stein->add_option("--grid-step", stein_step, "grid step over [-10, 10]");
    add_common(stein, stein_flags);

    // recursion
    auto* recursion = app.add_subcommand("recursion", "recursion bound demo");
    double rec_f = 1.0;
    double rec_tau = 0.5;
    std::vector<double> rec_row;
    std::vector<double> rec_init;
    int rec_horizon = 100;
    CommonFlags rec_flags;
    recursion->add_option("--f", rec_f, "forcing term");
    recursion->add_option("--tau", rec_tau, "contraction factor");
    recursion->add_option("--row", rec_row, "weight row (broadcast over n)")->delimiter(',');
    recursion->add_option("--a-init", rec_init, "initial values")->delimiter(',');
    recursion->add_option("--horizon", rec_horizon, "final index");
    add_common(recursion, rec_flags);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = inject_config(args);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*enumerate) return cmd_enumerate(en_n, en_theta, en_d, en_flags, en_rational);
        if (*rate)
            return cmd_rate(sweep_from(rate_n, rate_theta, rate_d, rate_samples, rate_flags),
                            rate_flags);
        if (*audit)
            return cmd_audit(
                sweep_from(audit_n, audit_theta, audit_d, audit_samples, audit_flags),
                audit_flags);
        if (*ratios) return cmd_ratios(ratio_n, ratio_d, ratio_grid, ratio_flags);
        if (*stein) return cmd_stein_check(stein_z, stein_lambda, stein_step, stein_flags);
        if (*recursion)
            return cmd_recursion(rec_f, rec_tau, rec_row, rec_init, rec_horizon, rec_flags);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
