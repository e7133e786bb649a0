// pslab command line: reproducible lattice random-field experiments.
//
// Subcommands map one-to-one onto the experiment kinds; every run is driven by
// a JSON config file, with --seed / --replicates / --out overriding the scalar
// fields. Thread count is controlled by OMP_NUM_THREADS only; results do not
// depend on it.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pslab/config.hpp"
#include "pslab/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replicates;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "override master_seed");
    cmd->add_option("--replicates", opts.replicates, "override replicates");
    cmd->add_option("--out", opts.out_dir, "override out_dir");
}

int error_record(const char* kind, const std::string& message, const std::string& parameter,
                 int code) {
    nlohmann::json err;
    err["error"] = kind;
    err["message"] = message;
    if (!parameter.empty()) err["parameter"] = parameter;
    std::cerr << err.dump() << "\n";
    return code;
}

int run_command(const CommonOpts& opts, pslab::ExperimentKind expected) {
    try {
        pslab::ExperimentConfig cfg = pslab::load_config(opts.config_path);
        if (cfg.experiment != expected)
            throw pslab::config_error(std::string("config is for '") +
                                          pslab::to_string(cfg.experiment) + "', expected '" +
                                          pslab::to_string(expected) + "'",
                                      "experiment");
        if (opts.seed) cfg.master_seed = *opts.seed;
        if (opts.replicates) {
            if (*opts.replicates < 1)
                throw pslab::config_error("replicates must be positive", "replicates");
            cfg.replicates = *opts.replicates;
        }
        if (opts.out_dir) cfg.out_dir = *opts.out_dir;
        for (const std::string& path : pslab::run_experiment(cfg))
            std::cout << "wrote " << path << "\n";
        return 0;
    } catch (const pslab::config_error& e) {
        return error_record("invalid-config", e.what(), e.parameter, 2);
    } catch (const pslab::invalid_spec_error& e) {
        return error_record("invalid-spec", e.what(), "spec", 2);
    } catch (const pslab::precondition_error& e) {
        return error_record("precondition", e.what(), "", 2);
    } catch (const pslab::feasibility_error& e) {
        return error_record("infeasible", e.what(), "", 3);
    } catch (const pslab::resource_error& e) {
        return error_record("resource", e.what(), "", 3);
    } catch (const pslab::accuracy_error& e) {
        return error_record("accuracy", e.what(), "", 4);
    } catch (const std::exception& e) {
        return error_record("internal", e.what(), "", 1);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pslab: Poisson scaling laboratory for lattice random fields"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        pslab::ExperimentKind kind;
        CommonOpts opts;
        CLI::App* cmd = nullptr;
    };
    Sub subs[] = {
        {"sigma-sweep", "exact covariance-sum decay table over scales",
         pslab::ExperimentKind::sigma_sweep, {}, nullptr},
        {"charfn", "characteristic-function report grid over (t, n)",
         pslab::ExperimentKind::charfn, {}, nullptr},
        {"count-fit", "box-count histogram with Poisson/compound fits",
         pslab::ExperimentKind::count_fit, {}, nullptr},
        {"fkg-check", "association (FKG) covariance checks on a site window",
         pslab::ExperimentKind::fkg_check, {}, nullptr},
    };
    for (Sub& s : subs) {
        s.cmd = app.add_subcommand(s.name, s.help);
        add_common(s.cmd, s.opts);
    }

    CLI11_PARSE(app, argc, argv);

    for (const Sub& s : subs)
        if (s.cmd->parsed()) return run_command(s.opts, s.kind);
    return 1;
}
