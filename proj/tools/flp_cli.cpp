#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flp/experiments.hpp"
#include "flp/kfacility.hpp"
#include "flp/projection.hpp"
#include "flp/serialize.hpp"
#include "flp/transport.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;

flp::DistPtr load_distribution(const std::string& arg) {
    std::string text = arg;
    std::string base_dir = ".";
    if (!arg.empty() && arg.front() != '{') {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open distribution file: " + arg);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        auto slash = arg.find_last_of('/');
        if (slash != std::string::npos) base_dir = arg.substr(0, slash);
    }
    json spec;
    try {
        spec = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid distribution JSON: ") + e.what());
    }
    return flp::parse_distribution(spec, base_dir);
}

std::vector<double> parse_v_list(const std::string& arg) {
    std::vector<double> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid percentile entry: " + tok);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty percentile vector");
    return out;
}

// Percentile vector from --v: either an explicit comma list or "optimal",
// which solves for v_mu. Entries equal to 0 or 1 are nudged inside (0,1)
// with a warning; the limit theory does not cover boundary percentiles.
std::vector<double> resolve_v(const std::string& arg, const flp::Distribution& mu,
                              int k, const flp::SolverConfig& cfg) {
    if (arg == "optimal") return flp::optimal_vector(mu, k, cfg);
    auto v = parse_v_list(arg);
    if (k > 0 && static_cast<int>(v.size()) != k) {
        throw std::invalid_argument("|v| does not match k");
    }
    for (double& q : v) {
        if (q == 0.0 || q == 1.0) {
            std::cerr << "warning: percentile entry " << q
                      << " lies on the boundary; clamping into (0,1)\n";
            q = q == 0.0 ? 1e-9 : 1.0 - 1e-9;
        }
    }
    return v;
}

void emit(const json& report, bool as_json, const std::string& out_path,
          const std::function<void(std::ostream&)>& human) {
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write: " + out_path);
        out << report.dump(2) << '\n';
    }
    if (as_json) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout.precision(6);
        human(std::cout);
    }
}

void print_vector(std::ostream& os, const std::vector<double>& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ')';
}

json merged_config(const std::string& config_path) {
    if (config_path.empty()) return json::object();
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config: " + config_path);
    try {
        json cfg = json::parse(in);
        if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
        return cfg;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percentile mechanisms for k-facility location on the line"};
    app.require_subcommand(1);

    std::string dist_arg, dist2_arg, v_arg = "optimal", out_path, csv_path,
                config_path;
    int k = 1, n = 0, trials = 0;
    std::uint64_t seed = 0;
    bool as_json = false;
    std::string schedule_arg;

    auto add_common = [&](CLI::App* cmd, bool needs_dist) {
        auto* d = cmd->add_option("--dist", dist_arg, "distribution JSON or file path");
        if (needs_dist) d->required();
        cmd->add_flag("--json", as_json, "full-precision JSON output");
        cmd->add_option("--out", out_path, "write JSON report to file");
        cmd->add_option("--seed", seed, "RNG seed (default 0)");
        cmd->add_option("--config", config_path, "JSON experiment config file");
    };

    auto* c_vec = app.add_subcommand("optimal-vector", "optimal percentile vector v_mu");
    add_common(c_vec, true);
    c_vec->add_option("-k", k, "number of facilities")->required();

    auto* c_proj = app.add_subcommand("project", "Wasserstein projection nu^(k)");
    add_common(c_proj, true);
    c_proj->add_option("-k", k, "number of facilities")->required();

    auto* c_mech = app.add_subcommand("mechanism", "run PM_v on one sampled profile");
    add_common(c_mech, true);
    c_mech->add_option("--v", v_arg, "comma list or 'optimal'")->required();
    c_mech->add_option("-k", k, "number of facilities");
    c_mech->add_option("-n", n, "number of agents")->required();

    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo Bayesian ratio estimate");
    add_common(c_sim, false);
    c_sim->add_option("--v", v_arg, "comma list or 'optimal'");
    c_sim->add_option("-k", k, "number of facilities");
    c_sim->add_option("-n", n, "number of agents");
    c_sim->add_option("--trials", trials, "Monte Carlo trials");

    auto* c_conv = app.add_subcommand("converge", "ratio convergence study over an n-schedule");
    add_common(c_conv, false);
    c_conv->add_option("--v", v_arg, "comma list or 'optimal'");
    c_conv->add_option("-k", k, "number of facilities");
    c_conv->add_option("--n-schedule", schedule_arg, "comma list of n values");
    c_conv->add_option("--trials", trials, "Monte Carlo trials");
    c_conv->add_option("--csv", csv_path, "write per-n CSV table to file");

    auto* c_rob = app.add_subcommand("robustness", "optimality loss from an approximated distribution");
    add_common(c_rob, false);
    c_rob->add_option("--dist-approx", dist2_arg, "approximation of the distribution");
    c_rob->add_option("-k", k, "number of facilities");
    c_rob->add_option("-n", n, "number of agents for the Monte Carlo check");
    c_rob->add_option("--trials", trials, "Monte Carlo trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        flp::SolverConfig solver;
        solver.seed = seed;

        // Config files carry the experiment parameters; explicit flags win.
        json cfg = merged_config(config_path);
        auto fill_int = [&](const CLI::App* cmd, const char* flag, const char* key, int& slot) {
            if (cmd->count(flag) == 0 && cfg.contains(key)) slot = cfg[key].get<int>();
        };
        for (CLI::App* cmd : {c_sim, c_conv, c_rob}) {
            if (!cmd->parsed()) continue;
            if (cmd->count("--dist") == 0 && cfg.contains("distribution")) {
                dist_arg = cfg["distribution"].dump();
            }
            if (cmd->count("--seed") == 0 && cfg.contains("seed")) {
                seed = cfg["seed"].get<std::uint64_t>();
                solver.seed = seed;
            }
            fill_int(cmd, "-k", "k", k);
            fill_int(cmd, "--trials", "trials", trials);
            if (cmd != c_conv) fill_int(cmd, "-n", "n", n);
            if (cmd->get_option("--v") && cmd->count("--v") == 0 && cfg.contains("v")) {
                v_arg = cfg["v"].is_string() ? cfg["v"].get<std::string>()
                                             : [&] {
                                                   std::string s;
                                                   for (const auto& x : cfg["v"]) {
                                                       if (!s.empty()) s += ',';
                                                       s += std::to_string(x.get<double>());
                                                   }
                                                   return s;
                                               }();
            }
        }
        if (c_conv->parsed() && c_conv->count("--n-schedule") == 0 &&
            cfg.contains("n_schedule")) {
            std::string s;
            for (const auto& x : cfg["n_schedule"]) {
                if (!s.empty()) s += ',';
                s += std::to_string(x.get<int>());
            }
            schedule_arg = s;
        }
        if (c_rob->parsed() && c_rob->count("--dist-approx") == 0 &&
            cfg.contains("distribution_approx")) {
            dist2_arg = cfg["distribution_approx"].dump();
        }

        if (dist_arg.empty()) throw std::invalid_argument("--dist is required");
        flp::DistPtr mu = load_distribution(dist_arg);

        if (c_vec->parsed() || c_proj->parsed()) {
            flp::ProjectionResult res = flp::solve_projection(*mu, k, solver);
            emit(flp::to_json(res), as_json, out_path, [&](std::ostream& os) {
                if (c_vec->parsed()) {
                    os << "v_mu = ";
                    print_vector(os, res.v);
                    os << "\n";
                }
                os << "y = ";
                print_vector(os, res.y);
                os << "\nweights = ";
                print_vector(os, res.weights);
                os << "\ncost = " << res.cost << "  residual = " << res.residual
                   << "  iterations = " << res.iterations << "\n";
            });
            return 0;
        }

        if (c_mech->parsed()) {
            if (n < 1) throw std::invalid_argument("-n must be >= 1");
            std::vector<double> v = resolve_v(v_arg, *mu, c_mech->count("-k") ? k : 0, solver);
            flp::SampleProfile x(mu->sample(static_cast<std::size_t>(n), seed));
            flp::Placement placement =
                flp::percentile_mechanism(x, flp::PercentileVector(v));
            double mech_cost = flp::social_cost(x, placement);
            auto [opt, opt_cost] = flp::optimal_facilities(
                x, static_cast<int>(placement.facilities.size()));
            json report{{"seed", seed},
                        {"n", n},
                        {"v", v},
                        {"facilities", placement.facilities},
                        {"mechanism_cost", mech_cost},
                        {"optimal_facilities", opt.facilities},
                        {"optimal_cost", opt_cost}};
            emit(report, as_json, out_path, [&](std::ostream& os) {
                os << "seed = " << seed << "\nfacilities = ";
                print_vector(os, placement.facilities);
                os << "\nmechanism cost = " << mech_cost
                   << "\noptimal cost   = " << opt_cost << "\n";
            });
            return 0;
        }

        if (c_sim->parsed()) {
            if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
            std::vector<double> v = resolve_v(v_arg, *mu, k, solver);
            k = static_cast<int>(v.size());
            flp::RatioEstimate est = flp::estimate_bar(*mu, v, k, n, trials, seed);
            emit(flp::to_json(est), as_json, out_path, [&](std::ostream& os) {
                os << "seed = " << seed << "  n = " << n << "  trials = " << trials
                   << "\nE[SC_v]   = " << est.mean_mech_cost << " +- " << est.se_mech
                   << "\nE[SC_opt] = " << est.mean_opt_cost << " +- " << est.se_opt
                   << "\nratio     = " << est.ratio << " +- " << est.se_ratio << "\n";
            });
            return 0;
        }

        if (c_conv->parsed()) {
            if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
            if (schedule_arg.empty()) throw std::invalid_argument("--n-schedule is required");
            std::vector<int> schedule;
            for (double x : parse_v_list(schedule_arg)) {
                schedule.push_back(static_cast<int>(x));
            }
            std::vector<double> v = resolve_v(v_arg, *mu, k, solver);
            k = static_cast<int>(v.size());
            flp::ConvergenceReport report =
                flp::convergence_study(*mu, v, k, schedule, trials, seed, solver);
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                if (!out) throw std::invalid_argument("cannot write: " + csv_path);
                out << flp::to_csv(report);
            }
            json j = flp::to_json(report);
            j["seed"] = seed;
            emit(j, as_json, out_path, [&](std::ostream& os) {
                os << "seed = " << seed << "  limit = " << report.limit << "\n";
                for (const auto& p : report.points) {
                    os << "n = " << p.n << "  ratio = " << p.ratio
                       << "  |ratio - limit| = " << p.deviation << "\n";
                }
                if (report.slope_defined) {
                    os << "log-log slope = " << report.slope << "\n";
                } else {
                    os << "log-log slope undefined (degenerate schedule)\n";
                }
            });
            return 0;
        }

        if (c_rob->parsed()) {
            if (dist2_arg.empty()) throw std::invalid_argument("--dist-approx is required");
            if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
            flp::DistPtr approx = load_distribution(dist2_arg);
            flp::RobustnessReport report =
                flp::robustness_study(mu, approx, k, n, trials, seed, solver);
            json j = flp::to_json(report);
            j["seed"] = seed;
            emit(j, as_json, out_path, [&](std::ostream& os) {
                os << "seed = " << seed << "\nv_tilde = ";
                print_vector(os, report.v_tilde);
                os << "\nW_inf = " << report.w_inf << "  W1 = " << report.w1
                   << "  W1(mu, nu^(k)) = " << report.projection_cost
                   << "\n|limit ratio - 1| = " << report.measured
                   << "  bound = " << report.bound
                   << "\nMonte Carlo ratio at n = " << report.mc_ratio;
                if (report.truncated) os << "\nnote: unbounded supports truncated at 1e-6 tails";
                os << "\n";
            });
            return 0;
        }
    } catch (const flp::ConvergenceFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
