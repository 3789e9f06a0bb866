// Experiment driver: reproducible sampling, solving and reporting for random
// sparse Laurent polynomial systems.  Subcommands mirror the library drivers;
// all runs are seeded and write into hash-named directories with manifests.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "bklab/harness.hpp"

using namespace bklab;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--out", flags.out_dir, "output directory (default: out)");
    cmd->add_option("--seed", flags.seed, "master seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "trial-level worker threads");
}

// file config plus flag overrides; flags win
ExperimentConfig load_config(const CommonFlags& flags, const std::string& experiment) {
    Json j = Json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw ConfigError("cannot open config file: " + flags.config_path);
        try {
            in >> j;
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    if (flags.seed_set) j["seed"] = flags.seed;
    if (!flags.out_dir.empty()) j["out"] = flags.out_dir;
    if (flags.threads > 0) j["threads"] = flags.threads;
    if (!j.contains("experiment")) j["experiment"] = experiment;
    return config_from_json(j);
}

std::vector<IntegralPolytope> parse_polytope_list(const std::string& arg) {
    std::vector<IntegralPolytope> out;
    std::stringstream ss(arg);
    std::string name;
    while (std::getline(ss, name, ',')) out.push_back(named_polytope(name));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bklab: zero distributions of random sparse Laurent polynomial systems"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string polytopes_arg;
    long long dilate_n = 1;

    auto* mv = app.add_subcommand("mixed-volume", "mixed volume of named polytopes");
    mv->add_option("--polytopes", polytopes_arg, "comma-separated polytope names")->required();

    auto* lp = app.add_subcommand("lattice-points", "lattice points of a dilated polytope");
    lp->add_option("--polytopes", polytopes_arg, "polytope name")->required();
    lp->add_option("--dilate", dilate_n, "dilation factor");

    auto* sample = app.add_subcommand("sample", "draw coefficient vectors");
    auto* bk = app.add_subcommand("bk-verify", "Bernstein-Kouchnirenko count verification");
    auto* figures = app.add_subcommand("figures", "point clouds for the trapezoid example");
    auto* bergman = app.add_subcommand("bergman", "Bergman-kernel convergence report");
    auto* amoeba = app.add_subcommand("amoeba", "amoeba samples of a random curve");
    auto* kac = app.add_subcommand("kac", "unit-circle concentration of univariate zeros");
    auto* uniformity = app.add_subcommand("uniformity", "angular uniformity of torus zeros");
    for (CLI::App* cmd : {sample, bk, figures, bergman, amoeba, kac, uniformity})
        add_common(cmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        Json result;
        if (mv->parsed()) {
            result = cmd_mixed_volume(parse_polytope_list(polytopes_arg));
        } else if (lp->parsed()) {
            const auto Ps = parse_polytope_list(polytopes_arg);
            if (Ps.size() != 1) throw ConfigError("lattice-points: exactly one polytope");
            result = cmd_lattice_points(Ps.front(), dilate_n);
        } else {
            const std::string name = app.get_subcommands().front()->get_name();
            const ExperimentConfig cfg = load_config(flags, name);
            const auto run_dir = make_run_dir(cfg);
            if (sample->parsed()) result = cmd_sample(cfg, run_dir);
            else if (bk->parsed()) result = cmd_bk_verify(cfg, run_dir);
            else if (figures->parsed()) result = cmd_figures(cfg, run_dir);
            else if (bergman->parsed()) result = cmd_bergman(cfg, run_dir);
            else if (amoeba->parsed()) result = cmd_amoeba(cfg, run_dir);
            else if (kac->parsed()) result = cmd_kac(cfg, run_dir);
            else if (uniformity->parsed()) result = cmd_uniformity(cfg, run_dir);
        }
        std::cout << result.dump(2) << std::endl;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const RunError& e) {
        std::cerr << "numeric failure: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << std::endl;
        return 3;
    }
}
