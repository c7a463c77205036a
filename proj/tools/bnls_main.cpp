// bnls: experiment runner for the biharmonic NLS laboratory.
// Subcommands mirror the experiment set; flags override the JSON config.

#include "bnls/cli.hpp"
#include "bnls/errors.hpp"
#include "bnls/report.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"numerical laboratory for the fourth-order (biharmonic) NLS"};
    app.require_subcommand(1);

    auto* schema_cmd = app.add_subcommand("schema", "print the versioned report JSON schema");

    const std::vector<std::string> experiments = {
        "admissible", "exponents",    "dispersive", "localized-dispersive", "fundsol",
        "kernel-decay", "ground-state", "evolve",     "decompose",            "concentrate"};

    struct Shared {
        std::string config_path;
        std::vector<std::string> sets; // key=value overrides
        std::string out;
        int workers = -1;
        std::map<std::string, double> nums; // only keys whose flags were given
        std::string sign;
    };
    std::map<std::string, Shared> shared;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : experiments) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        auto& sh = shared[name];
        sub->add_option("--config", sh.config_path, "JSON config file (flags win)");
        sub->add_option("--set", sh.sets, "extra key=value overrides")->take_all();
        sub->add_option("--out", sh.out, "output directory");
        sub->add_option("--workers", sh.workers, "worker pool size (0 = hardware)");
        auto num_flag = [sub, &sh](const std::string& flag, const std::string& key,
                                   const std::string& help) {
            sub->add_option_function<double>(
                flag, [&sh, key](double v) { sh.nums[key] = v; }, help);
        };
        num_flag("--n", "n", "spatial dimension");
        num_flag("--p", "p", "nonlinearity exponent");
        sub->add_option("--sign", sh.sign, "focusing|defocusing");
        num_flag("--dt", "dt", "time step");
        num_flag("--T", "T", "final time");
        num_flag("--rmax", "rmax", "radial domain size");
        num_flag("--m", "m", "spectral mode count");
        num_flag("--mu3", "mu3", "concentration scale");
        num_flag("--epsilon-r0", "epsilon_r0", "deficit in the r0 exponent");
        subs[name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    if (schema_cmd->parsed()) {
        std::cout << bnls::report_schema() << std::endl;
        return 0;
    }

    for (const auto& name : experiments) {
        if (!subs[name]->parsed()) continue;
        const Shared& sh = shared.at(name);
        std::map<std::string, std::string> overrides;
        for (const auto& [key, val] : sh.nums) {
            std::ostringstream os;
            os << std::setprecision(17) << val;
            overrides[key] = os.str();
        }
        if (!sh.sign.empty()) overrides["sign"] = sh.sign;
        if (!sh.out.empty()) overrides["out"] = sh.out;
        if (sh.workers >= 0) overrides["workers"] = std::to_string(sh.workers);
        for (const auto& kv : sh.sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
                return 2;
            }
            overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        try {
            bnls::RunConfig cfg = bnls::load_config(name, sh.config_path, overrides);
            return bnls::run_experiment(cfg);
        } catch (const std::exception& e) {
            std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
            return 2;
        }
    }
    return 2;
}
