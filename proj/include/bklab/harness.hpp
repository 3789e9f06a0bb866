#ifndef BKLAB_HARNESS_HPP
#define BKLAB_HARNESS_HPP

#include <filesystem>
#include <optional>

#include "bklab/json_io.hpp"

namespace bklab {

/// Invalid configuration: the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric failure (e.g. the solver resample cap): exit code 3.
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One validated experiment: polytopes, weighted set, law, dilations,
/// trial count, seed, regions, output directory.  Flags override file
/// values before validation.
struct ExperimentConfig {
    std::string experiment = "run";
    std::vector<IntegralPolytope> polytopes;
    WeightedSetKind weighted_kind = WeightedSetKind::TorusK;
    int p = 0;  // FubiniStudy weight exponent
    CoefficientLaw law = CoefficientLaw::gaussian();
    std::vector<long long> Ns{1};
    int trials = 1;
    uint64_t seed = 0;
    bool seed_set = false;
    std::vector<RegionSpec> regions;
    std::string out_dir = "out";
    int threads = 1;
    // command-specific knobs
    double kac_band = 0.1;
    std::vector<double> amoeba_moduli;
    int amoeba_angles = 64;
    int resample_cap = 5;
    std::vector<std::vector<double>> grid;  // flattened re/im per point

    Json canonical() const;  // deterministic JSON echo of the config
};

ExperimentConfig config_from_json(const Json& j);

/// Hash-named run directory below cfg.out_dir; never reuses an existing
/// directory (append-never provenance).
std::filesystem::path make_run_dir(const ExperimentConfig& cfg);

/// Accumulates the run manifest: config hash, artifact version, per-trial
/// stream ids, output files with content hashes, wall clock per phase.
class RunManifest {
public:
    explicit RunManifest(const ExperimentConfig& cfg);
    void note_stream(uint64_t trial, uint64_t stream);
    void note_phase(const std::string& phase, double seconds);
    void write_file(const std::filesystem::path& dir, const std::string& name,
                    const std::string& bytes);
    void finalize(const std::filesystem::path& dir);
    const Json& json() const { return j_; }

private:
    Json j_;
};

/// Builds the basis named by the config for one polytope and dilation.
OrthoBasis build_basis(const ExperimentConfig& cfg, const IntegralPolytope& P, long long N);

// ---- subcommand drivers (the CLI wraps these) ----

Json cmd_mixed_volume(const std::vector<IntegralPolytope>& Ps);
Json cmd_lattice_points(const IntegralPolytope& P, long long N);

/// Writes per-trial coefficient dumps; returns the summary.
Json cmd_sample(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);

/// m = 2 Bernstein-Kouchnirenko verification over trials and dilations.
Json cmd_bk_verify(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);

/// Gaussian and Pareto point clouds for the T = 5 trapezoid on S^3 at N = 10.
Json cmd_figures(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);

Json cmd_bergman(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);
Json cmd_amoeba(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);
Json cmd_kac(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);
Json cmd_uniformity(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);

/// Samples and solves one m = 2 system, resampling on resultant degeneracy
/// up to cfg.resample_cap; returns the zero set and the number of resamples.
std::pair<ZeroSet, int> solve_system_with_resample(const ExperimentConfig& cfg,
                                                   const OrthoBasis& b1, const OrthoBasis& b2,
                                                   uint64_t trial);

/// Deterministic trial-parallel map: results land in trial order regardless
/// of scheduling.
void parallel_trials(int trials, int threads, const std::function<void(int)>& body);

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace bklab

#endif
