// Command-line front end: index | cavity | expansion | dynamics.
//
// Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.

#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lhmdecay/lhmdecay.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config;
    std::string out;
    double omega_min = 0.0;
    double omega_max = 0.0;
    int steps = 200;
    std::optional<double> gamma;
};

void add_common(CLI::App* cmd, Common& c, bool sweep) {
    cmd->add_option("--config", c.config, "material config file")->required();
    cmd->add_option("--out", c.out, "output CSV path")->required();
    if (sweep) {
        cmd->add_option("--omega-min", c.omega_min, "sweep start (units of omega_ref)")->required();
        cmd->add_option("--omega-max", c.omega_max, "sweep end (units of omega_ref)")->required();
    }
    cmd->add_option("--steps", c.steps, "number of sweep intervals (rows = steps + 1)");
    cmd->add_option("--gamma", c.gamma, "override both damping constants");
}

lhm::MaterialParams load(const Common& c) {
    lhm::MaterialParams p = lhm::load_material_config(c.config);
    if (c.gamma) {
        p.gamma_e = *c.gamma;
        p.gamma_m = *c.gamma;
    }
    return p;
}

const std::map<std::string, lhm::Orientation> kOrientations{
    {"radial", lhm::Orientation::radial}, {"tangential", lhm::Orientation::tangential}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spontaneous decay in a vacuum cavity inside a magnetodielectric host"};
    app.require_subcommand(1);

    Common index_opts;
    auto* index = app.add_subcommand("index", "eps, mu and refractive index versus frequency");
    add_common(index, index_opts, true);

    Common cavity_opts;
    lhm::CavityRun cavity_run;
    auto* cavity = app.add_subcommand("cavity", "decay rate Gamma/Gamma0 versus frequency");
    add_common(cavity, cavity_opts, true);
    cavity->add_option("--radius", cavity_run.radius, "cavity radius (units of lambda_ref)")
        ->required();
    cavity->add_option("--position", cavity_run.position, "radial atom position");
    cavity->add_option("--orientation", cavity_run.orientation, "radial | tangential")
        ->transform(CLI::CheckedTransformer(kOrientations, CLI::ignore_case));
    cavity->add_option("--tol", cavity_run.tol, "series truncation tolerance");

    Common expansion_opts;
    double expansion_radius = 0.0;
    auto* expansion =
        app.add_subcommand("expansion", "centre rate versus its small-cavity expansion");
    add_common(expansion, expansion_opts, true);
    expansion->add_option("--radius", expansion_radius, "cavity radius (units of lambda_ref)")
        ->required();

    Common dynamics_opts;
    dynamics_opts.steps = 2000;
    lhm::DynamicsRun dyn;
    auto* dynamics = app.add_subcommand("dynamics", "non-Markovian upper-state amplitude");
    add_common(dynamics, dynamics_opts, false);
    dynamics->add_option("--radius", dyn.radius, "cavity radius (units of lambda_ref)")
        ->required();
    dynamics->add_option("--position", dyn.position, "radial atom position");
    dynamics->add_option("--orientation", dyn.orientation, "radial | tangential")
        ->transform(CLI::CheckedTransformer(kOrientations, CLI::ignore_case));
    dynamics->add_option("--omega-a", dyn.omega_a, "bare transition frequency")->required();
    dynamics->add_option("--band-lo", dyn.band_lo, "lower edge of the spectral band");
    dynamics->add_option("--band-hi", dyn.band_hi, "upper edge of the spectral band");
    dynamics->add_option("--tmax", dyn.t_max, "final time (units of 1/Gamma0)");
    dynamics->add_option("--dt", dyn.dt, "time step (units of 1/Gamma0)");
    dynamics->add_option("--coupling", dyn.coupling, "Gamma0(omega_ref) / omega_ref");
    dynamics->add_option("--tol", dyn.tol, "series truncation tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (index->parsed()) {
            const auto& c = index_opts;
            const auto t = lhm::run_index(load(c), {c.omega_min, c.omega_max, c.steps});
            lhm::write_csv_file(c.out, t);
        } else if (cavity->parsed()) {
            const auto& c = cavity_opts;
            const auto t = lhm::run_cavity(load(c), cavity_run, {c.omega_min, c.omega_max, c.steps});
            lhm::write_csv_file(c.out, t);
        } else if (expansion->parsed()) {
            const auto& c = expansion_opts;
            const auto t =
                lhm::run_expansion(load(c), expansion_radius, {c.omega_min, c.omega_max, c.steps});
            lhm::write_csv_file(c.out, t);
        } else if (dynamics->parsed()) {
            const auto& c = dynamics_opts;
            dyn.band_steps = c.steps;
            const auto t = lhm::run_dynamics(load(c), dyn);
            lhm::write_csv_file(c.out, t);
        }
    } catch (const lhm::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
