// pqbbh command-line front end: verification suites, moment tables,
// convergence runs and rate-bound reports, all emitted as CSV (verify
// writes JSON).  A run is fully determined by its config; flags override
// values loaded from --config.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqbbh/run.hpp"

namespace {

void load_config_file(const std::string& path, pqbbh::RunConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;

    auto get = [&j](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("command", config.command);
    get("n", config.n);
    if (j.contains("n1")) config.n1 = j.at("n1").get<int>();
    if (j.contains("n2")) config.n2 = j.at("n2").get<int>();
    get("n_list", config.n_list);
    get("schedule", config.schedule);
    if (j.contains("p1")) config.p1 = j.at("p1").get<double>();
    if (j.contains("q1")) config.q1 = j.at("q1").get<double>();
    if (j.contains("p2")) config.p2 = j.at("p2").get<double>();
    if (j.contains("q2")) config.q2 = j.at("q2").get<double>();
    get("grid", config.grid_points);
    get("t_max", config.t_max);
    get("funcs", config.funcs);
    get("lipschitz", config.lipschitz);
    get("alpha1", config.alpha1);
    get("alpha2", config.alpha2);
    get("M", config.M);
    get("E", config.E);
    get("gamma1", config.gamma1);
    get("gamma2", config.gamma2);
    get("beta1", config.beta1);
    get("beta2", config.beta2);
    get("out", config.out);
    get("seed", config.seed);
    get("surfaces", config.surfaces);
    get("threads", config.threads);
    get("exact_trials", config.exact_trials);
    get("float_draws", config.float_draws);
}

}  // namespace

int main(int argc, char** argv) {
    pqbbh::RunConfig config;
    std::string config_path;
    double p_flag = 0.0, q_flag = 0.0;

    CLI::App app{"(p,q)-Bleimann-Butzer-Hahn operator toolkit"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its values")
            ->check(CLI::ExistingFile);
        cmd->add_option("--n", config.n, "degree (n1 = n2 = n)");
        cmd->add_option("--n-list", config.n_list, "increasing list of degrees")->delimiter(',');
        cmd->add_option("--schedule", config.schedule, "parameter schedule: default | invsq");
        cmd->add_option("--p", p_flag, "p for both axes (overrides the schedule)");
        cmd->add_option("--q", q_flag, "q for both axes (overrides the schedule)");
        cmd->add_option("--grid", config.grid_points, "grid points per axis");
        cmd->add_option("--t-max", config.t_max, "grid upper edge in t = x/(1+x), in (0,1)");
        cmd->add_option("--func", config.funcs, "function name(s); repeatable");
        cmd->add_option("--out", config.out, "output file path");
        cmd->add_option("--seed", config.seed, "64-bit seed for random input sampling");
        cmd->add_option("--threads", config.threads, "worker threads (output is unaffected)");
        return cmd;
    };

    CLI::App* verify = add_common(app.add_subcommand(
        "verify", "run the exact-rational and floating-point identity suites"));
    verify->add_option("--exact-trials", config.exact_trials, "random inputs per exact identity");
    verify->add_option("--float-draws", config.float_draws, "random draws per float identity");
    verify
        ->add_flag("--inject-split-sign-flip", config.inject_split_sign_flip,
                   "evaluate the splitting identity with a wrong sign (test hook)")
        ->group("");  // hidden

    add_common(app.add_subcommand("moments",
                                  "closed-form vs brute-force moment table on the grid"));

    CLI::App* converge = add_common(app.add_subcommand(
        "converge", "sup-norm errors of the Korovkin set down a degree list"));
    converge->add_flag("--surfaces", config.surfaces,
                       "also write per-n (x, y, error) surfaces");

    CLI::App* rate = add_common(app.add_subcommand(
        "rate", "rate-of-convergence bound reports (modulus, Lipschitz or generalized)"));
    rate->add_option("--alpha1", config.alpha1, "Lipschitz exponent, axis 1");
    rate->add_option("--alpha2", config.alpha2, "Lipschitz exponent, axis 2");
    rate->add_option("--M", config.M, "Lipschitz constant");
    rate->add_option("--E", config.E, "interval union, e.g. 'all' or '1:2,4:5'");
    rate->add_option("--gamma1", config.gamma1, "node shift, axis 1");
    rate->add_option("--gamma2", config.gamma2, "node shift, axis 2");
    rate->add_option("--beta1", config.beta1, "b-rule offset, axis 1");
    rate->add_option("--beta2", config.beta2, "b-rule offset, axis 2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? pqbbh::kExitOk : pqbbh::kExitInvalidConfig;
    }

    CLI::App* chosen = app.get_subcommands().front();
    config.command = chosen->get_name();

    if (!config_path.empty()) {
        pqbbh::RunConfig from_file;
        try {
            load_config_file(config_path, from_file);
        } catch (const std::exception& e) {
            std::cerr << "invalid config: " << e.what() << "\n";
            return pqbbh::kExitInvalidConfig;
        }
        // Start from the file's values, then re-apply every flag that was
        // actually given on the command line.
        from_file.command = config.command;
        auto keep = [&](auto member, const char* flag) {
            if (chosen->count(flag) > 0) from_file.*member = config.*member;
        };
        keep(&pqbbh::RunConfig::n, "--n");
        keep(&pqbbh::RunConfig::n_list, "--n-list");
        keep(&pqbbh::RunConfig::schedule, "--schedule");
        keep(&pqbbh::RunConfig::grid_points, "--grid");
        keep(&pqbbh::RunConfig::t_max, "--t-max");
        keep(&pqbbh::RunConfig::funcs, "--func");
        keep(&pqbbh::RunConfig::out, "--out");
        keep(&pqbbh::RunConfig::seed, "--seed");
        keep(&pqbbh::RunConfig::threads, "--threads");
        if (chosen == rate) {
            keep(&pqbbh::RunConfig::alpha1, "--alpha1");
            keep(&pqbbh::RunConfig::alpha2, "--alpha2");
            keep(&pqbbh::RunConfig::M, "--M");
            keep(&pqbbh::RunConfig::E, "--E");
            keep(&pqbbh::RunConfig::gamma1, "--gamma1");
            keep(&pqbbh::RunConfig::gamma2, "--gamma2");
            keep(&pqbbh::RunConfig::beta1, "--beta1");
            keep(&pqbbh::RunConfig::beta2, "--beta2");
        }
        if (chosen == verify) {
            keep(&pqbbh::RunConfig::exact_trials, "--exact-trials");
            keep(&pqbbh::RunConfig::float_draws, "--float-draws");
            keep(&pqbbh::RunConfig::inject_split_sign_flip, "--inject-split-sign-flip");
        }
        if (chosen == converge) keep(&pqbbh::RunConfig::surfaces, "--surfaces");
        config = from_file;
    }

    if (chosen->count("--p") > 0) config.p1 = config.p2 = p_flag;
    if (chosen->count("--q") > 0) config.q1 = config.q2 = q_flag;
    if (chosen == rate)
        config.lipschitz = config.lipschitz || chosen->count("--alpha1") ||
                           chosen->count("--alpha2") || chosen->count("--M") ||
                           chosen->count("--E");

    return pqbbh::run_command(config);
}
