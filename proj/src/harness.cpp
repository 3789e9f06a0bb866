#include "bklab/harness.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace bklab {

namespace fs = std::filesystem;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

IntegralPolytope polytope_from_config_entry(const Json& entry) {
    if (entry.is_string()) return named_polytope(entry.get<std::string>());
    if (entry.is_array()) return hull(entry.get<std::vector<LatticePoint>>());
    throw ConfigError("polytope entries must be names or vertex lists");
}

}  // namespace

Json ExperimentConfig::canonical() const {
    Json j;
    j["experiment"] = experiment;
    Json polys = Json::array();
    for (const auto& P : polytopes) polys.push_back(polytope_to_json(P));
    j["polytopes"] = polys;
    switch (weighted_kind) {
        case WeightedSetKind::TorusK: j["weighted_set"] = {{"kind", "torus"}}; break;
        case WeightedSetKind::Sphere3: j["weighted_set"] = {{"kind", "sphere3"}}; break;
        case WeightedSetKind::FubiniStudy:
            j["weighted_set"] = {{"kind", "fs"}, {"p", p}};
            break;
        case WeightedSetKind::CustomQuadrature:
            j["weighted_set"] = {{"kind", "custom"}};
            break;
    }
    j["law"] = {{"kind", law_name(law)}};
    if (law.kind == LawKind::ParetoModulus) j["law"]["alpha"] = law.alpha;
    j["Ns"] = Ns;
    j["trials"] = trials;
    j["seed"] = seed;
    j["kac_band"] = kac_band;
    if (!amoeba_moduli.empty()) {
        j["amoeba_moduli"] = amoeba_moduli;
        j["amoeba_angles"] = amoeba_angles;
    }
    if (!grid.empty()) j["grid"] = grid;
    j["resample_cap"] = resample_cap;
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig cfg;
    try {
        if (j.contains("experiment")) cfg.experiment = j.at("experiment").get<std::string>();
        if (j.contains("polytopes"))
            for (const auto& e : j.at("polytopes")) cfg.polytopes.push_back(polytope_from_config_entry(e));
        if (j.contains("weighted_set")) {
            const auto& w = j.at("weighted_set");
            const std::string kind = w.at("kind").get<std::string>();
            if (kind == "torus") cfg.weighted_kind = WeightedSetKind::TorusK;
            else if (kind == "sphere3") cfg.weighted_kind = WeightedSetKind::Sphere3;
            else if (kind == "fs") {
                cfg.weighted_kind = WeightedSetKind::FubiniStudy;
                cfg.p = w.at("p").get<int>();
                if (cfg.p < 1) throw ConfigError("weighted_set.p must be a positive integer");
            } else {
                throw ConfigError("unknown weighted_set kind: " + kind);
            }
        }
        if (j.contains("law")) {
            const auto& l = j.at("law");
            cfg.law = law_from_name(l.at("kind").get<std::string>(),
                                    l.value("alpha", 3.0));
            if (cfg.law.kind == LawKind::ParetoModulus && cfg.law.alpha <= 0)
                throw ConfigError("pareto law needs alpha > 0");
        }
        if (j.contains("Ns")) cfg.Ns = j.at("Ns").get<std::vector<long long>>();
        if (j.contains("N")) cfg.Ns = {j.at("N").get<long long>()};
        if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
        if (j.contains("seed")) {
            cfg.seed = j.at("seed").get<uint64_t>();
            cfg.seed_set = true;
        }
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
        if (j.contains("kac_band")) cfg.kac_band = j.at("kac_band").get<double>();
        if (j.contains("amoeba_moduli"))
            cfg.amoeba_moduli = j.at("amoeba_moduli").get<std::vector<double>>();
        if (j.contains("amoeba_angles")) cfg.amoeba_angles = j.at("amoeba_angles").get<int>();
        if (j.contains("resample_cap")) cfg.resample_cap = j.at("resample_cap").get<int>();
        if (j.contains("grid")) cfg.grid = j.at("grid").get<std::vector<std::vector<double>>>();
        if (j.contains("regions")) {
            for (const auto& r : j.at("regions")) {
                const std::string kind = r.at("kind").get<std::string>();
                if (kind == "annulus")
                    cfg.regions.push_back(RegionSpec::annulus(r.at("rho").get<double>(),
                                                              r.at("R").get<double>()));
                else if (kind == "modulus-band")
                    cfg.regions.push_back(RegionSpec::modulus_band(r.at("coord").get<int>(),
                                                                   r.at("rho").get<double>(),
                                                                   r.at("R").get<double>()));
                else if (kind == "log-half-space")
                    cfg.regions.push_back(RegionSpec::log_half_space(
                        r.at("normal").get<std::vector<double>>(), r.at("offset").get<double>()));
                else if (kind == "all")
                    cfg.regions.push_back(RegionSpec::all());
                else
                    throw ConfigError("unknown region kind: " + kind);
            }
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config validation error: ") + e.what());
    }
    if (!cfg.seed_set) throw ConfigError("config requires a seed (field \"seed\" or --seed)");
    if (cfg.trials < 0) throw ConfigError("trials must be nonnegative");
    for (long long N : cfg.Ns)
        if (N < 1) throw ConfigError("dilations must be positive");
    if (cfg.threads < 1) cfg.threads = 1;
    return cfg;
}

fs::path make_run_dir(const ExperimentConfig& cfg) {
    const uint64_t h = fnv1a(cfg.canonical().dump());
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", (unsigned long long)h);
    fs::path base = fs::path(cfg.out_dir) / (cfg.experiment + "-" + hex);
    fs::path dir = base;
    for (int k = 2; fs::exists(dir); ++k) dir = base.concat("-run" + std::to_string(k));
    fs::create_directories(dir);
    return dir;
}

RunManifest::RunManifest(const ExperimentConfig& cfg) {
    j_["artifact_version"] = kArtifactVersion;
    j_["config"] = cfg.canonical();
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", (unsigned long long)fnv1a(j_["config"].dump()));
    j_["config_hash"] = hex;
    j_["streams"] = Json::object();
    j_["files"] = Json::object();
    j_["wall_clock"] = Json::object();
}

void RunManifest::note_stream(uint64_t trial, uint64_t stream) {
    j_["streams"][std::to_string(trial)] = stream;
}

void RunManifest::note_phase(const std::string& phase, double seconds) {
    j_["wall_clock"][phase] = seconds;
}

void RunManifest::write_file(const fs::path& dir, const std::string& name,
                             const std::string& bytes) {
    std::ofstream out(dir / name, std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.close();
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", (unsigned long long)fnv1a(bytes));
    j_["files"][name] = {{"bytes", bytes.size()}, {"fnv64", hex}};
}

void RunManifest::finalize(const fs::path& dir) {
    std::ofstream out(dir / "manifest.json");
    out << j_.dump(2) << '\n';
}

OrthoBasis build_basis(const ExperimentConfig& cfg, const IntegralPolytope& P, long long N) {
    switch (cfg.weighted_kind) {
        case WeightedSetKind::TorusK: return torus_basis(P, N);
        case WeightedSetKind::Sphere3: return sphere3_basis(P, N);
        case WeightedSetKind::FubiniStudy: return fs_basis(P, N, cfg.p);
        case WeightedSetKind::CustomQuadrature:
            throw ConfigError("custom-quadrature bases are not configurable from files");
    }
    throw ConfigError("unknown weighted set kind");
}

void parallel_trials(int trials, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || trials <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(threads, trials); ++w)
        pool.emplace_back([&] {
            for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) body(t);
        });
    for (auto& th : pool) th.join();
}

Json cmd_mixed_volume(const std::vector<IntegralPolytope>& Ps) {
    return mixed_volume_to_json(mixed_volume(Ps));
}

Json cmd_lattice_points(const IntegralPolytope& P, long long N) {
    Json j;
    j["polytope"] = polytope_to_json(P);
    j["N"] = N;
    const auto pts = lattice_points(dilate(P, N));
    j["count"] = pts.size();
    j["points"] = pts;
    return j;
}

Json cmd_sample(const ExperimentConfig& cfg, const fs::path& run_dir) {
    if (cfg.polytopes.empty()) throw ConfigError("sample: config needs one polytope");
    RunManifest manifest(cfg);
    const double t0 = now_seconds();
    const long long N = cfg.Ns.front();
    auto basis = std::make_shared<OrthoBasis>(build_basis(cfg, cfg.polytopes.front(), N));
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const uint64_t stream = stream_id(fnv1a(cfg.experiment), trial);
        manifest.note_stream(trial, stream);
        const RandomPolynomial f = sample_polynomial(basis, cfg.law, cfg.seed, stream);
        manifest.write_file(run_dir, "coeffs-" + std::to_string(trial) + ".csv",
                            coefficients_csv(f));
    }
    manifest.note_phase("sample", now_seconds() - t0);
    manifest.finalize(run_dir);
    Json j;
    j["trials"] = cfg.trials;
    j["d_N"] = basis->d();
    j["run_dir"] = run_dir.string();
    return j;
}

std::pair<ZeroSet, int> solve_system_with_resample(const ExperimentConfig& cfg,
                                                   const OrthoBasis& b1, const OrthoBasis& b2,
                                                   uint64_t trial) {
    auto p1 = std::make_shared<const OrthoBasis>(b1);
    auto p2 = std::make_shared<const OrthoBasis>(b2);
    const uint64_t exp_hash = fnv1a(cfg.experiment);
    for (int attempt = 0;; ++attempt) {
        if (attempt > cfg.resample_cap)
            throw RunError("solver resample cap exceeded at trial " + std::to_string(trial));
        const uint64_t draw = uint64_t(attempt);
        const RandomPolynomial f =
            sample_polynomial(p1, cfg.law, cfg.seed, stream_id(exp_hash, trial, 1), draw);
        const RandomPolynomial g =
            sample_polynomial(p2, cfg.law, cfg.seed, stream_id(exp_hash, trial, 2), draw);
        try {
            return {solve_bivariate(f, g), attempt};
        } catch (const ResultantDegenerate&) {
            continue;  // positive-codimension event: redraw
        }
    }
}

Json cmd_bk_verify(const ExperimentConfig& cfg, const fs::path& run_dir) {
    if (cfg.polytopes.size() != 2) throw ConfigError("bk-verify: config needs two polytopes");
    if (cfg.polytopes[0].m != 2) throw ConfigError("bk-verify: requires m = 2");
    RunManifest manifest(cfg);
    Json summary;
    summary["per_N"] = Json::array();
    const double t0 = now_seconds();
    for (long long N : cfg.Ns) {
        const OrthoBasis b1 = build_basis(cfg, cfg.polytopes[0], N);
        const OrthoBasis b2 = build_basis(cfg, cfg.polytopes[1], N);
        std::vector<CountReport> reports(cfg.trials);
        std::vector<int> resamples(cfg.trials, 0);
        parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
            auto [zeros, redraws] =
                solve_system_with_resample(cfg, b1, b2, uint64_t(N * 1000 + trial));
            reports[trial] = verify_count(zeros, {cfg.polytopes[0], cfg.polytopes[1]}, N);
            resamples[trial] = redraws;
        });
        std::ostringstream lines;
        int matches = 0, resampled = 0;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            Json row = count_report_to_json(reports[trial]);
            row["trial"] = trial;
            row["N"] = N;
            row["resamples"] = resamples[trial];
            lines << row.dump() << '\n';
            matches += reports[trial].match;
            resampled += resamples[trial] > 0;
        }
        manifest.write_file(run_dir, "counts-N" + std::to_string(N) + ".jsonl", lines.str());
        Json agg;
        agg["N"] = N;
        agg["trials"] = cfg.trials;
        agg["match_rate"] = cfg.trials ? double(matches) / cfg.trials : 0.0;
        agg["expected"] = cfg.trials ? reports[0].expected : 0;
        agg["resampled_trials"] = resampled;
        summary["per_N"].push_back(agg);
    }
    manifest.note_phase("solve", now_seconds() - t0);
    manifest.write_file(run_dir, "summary.json", summary.dump(2) + "\n");
    manifest.finalize(run_dir);
    summary["run_dir"] = run_dir.string();
    return summary;
}

Json cmd_figures(const ExperimentConfig& cfg, const fs::path& run_dir) {
    ExperimentConfig fig = cfg;
    fig.polytopes = {named_polytope("trapezoid5")};
    fig.weighted_kind = WeightedSetKind::Sphere3;
    const long long N = fig.Ns.empty() ? 10 : fig.Ns.front();
    RunManifest manifest(cfg);
    const OrthoBasis basis = sphere3_basis(fig.polytopes[0], N);
    Json summary;
    const double t0 = now_seconds();
    for (const auto& [label, law] :
         std::vector<std::pair<std::string, CoefficientLaw>>{
             {"gaussian", CoefficientLaw::gaussian()},
             {"pareto", CoefficientLaw::pareto(3.0)}}) {
        ExperimentConfig sub = fig;
        sub.experiment = cfg.experiment + "-" + label;
        sub.law = law;
        ZeroSet pooled;
        Json counts = Json::array();
        for (int trial = 0; trial < cfg.trials; ++trial) {
            auto [zeros, redraws] = solve_system_with_resample(sub, basis, basis, trial);
            const CountReport rep = verify_count(zeros, {fig.polytopes[0], fig.polytopes[0]}, N);
            Json row = count_report_to_json(rep);
            row["trial"] = trial;
            row["resamples"] = redraws;
            counts.push_back(row);
            for (size_t i = 0; i < zeros.points.size(); ++i) {
                pooled.points.push_back(zeros.points[i]);
                pooled.residuals.push_back(zeros.residuals[i]);
                pooled.multiplicity_suspect.push_back(
                    zeros.multiplicity_suspect.empty() ? 0 : zeros.multiplicity_suspect[i]);
            }
            pooled.discarded += zeros.discarded;
        }
        manifest.write_file(run_dir, label + ".csv", zeroset_csv(pooled, 2));
        summary[label] = {{"points", pooled.points.size()}, {"counts", counts}};
    }
    manifest.note_phase("solve", now_seconds() - t0);
    manifest.write_file(run_dir, "summary.json", summary.dump(2) + "\n");
    manifest.finalize(run_dir);
    summary["run_dir"] = run_dir.string();
    return summary;
}

Json cmd_bergman(const ExperimentConfig& cfg, const fs::path& run_dir) {
    if (cfg.polytopes.empty()) throw ConfigError("bergman: config needs one polytope");
    if (cfg.grid.empty()) throw ConfigError("bergman: config needs a grid of points");
    const IntegralPolytope P = cfg.polytopes.front();
    const int m = P.m;
    std::vector<CVec> grid;
    for (const auto& row : cfg.grid) {
        if (int(row.size()) != 2 * m) throw ConfigError("bergman: grid rows need 2m entries");
        CVec z(m);
        for (int i = 0; i < m; ++i) z[i] = {row[2 * i], row[2 * i + 1]};
        grid.push_back(z);
    }
    std::function<double(const CVec&)> V;
    if (cfg.weighted_kind == WeightedSetKind::TorusK) {
        V = [P](const CVec& z) { return h_p(P, z); };
    } else if (cfg.weighted_kind == WeightedSetKind::FubiniStudy) {
        const auto evm = ExtremalEvaluator::fs_moment(P, cfg.p);
        const auto evd = ExtremalEvaluator::fs_dual(P, cfg.p);
        for (const CVec& z : grid)
            if (std::abs(v_extremal(evm, z) - v_extremal(evd, z)) > 1e-6)
                throw RunError("bergman: moment-map and Legendre-dual routes disagree");
        V = [evm](const CVec& z) { return v_extremal(evm, z); };
    } else {
        throw ConfigError("bergman: weighted set must be torus or fs");
    }
    const ExperimentConfig basis_cfg = cfg;
    const auto rep = bergman_convergence(
        [&](long long N) { return build_basis(basis_cfg, P, N); }, V, grid, cfg.Ns,
        "config grid with " + std::to_string(grid.size()) + " points");
    RunManifest manifest(cfg);
    manifest.write_file(run_dir, "convergence.json", convergence_to_json(rep).dump(2) + "\n");
    manifest.finalize(run_dir);
    Json j = convergence_to_json(rep);
    j["run_dir"] = run_dir.string();
    return j;
}

Json cmd_amoeba(const ExperimentConfig& cfg, const fs::path& run_dir) {
    if (cfg.polytopes.empty()) throw ConfigError("amoeba: config needs one polytope");
    if (cfg.polytopes.front().m != 2) throw ConfigError("amoeba: requires m = 2");
    std::vector<double> moduli = cfg.amoeba_moduli;
    if (moduli.empty())
        for (int k = -20; k <= 20; ++k) moduli.push_back(std::exp(0.15 * k));
    const long long N = cfg.Ns.front();
    auto basis = std::make_shared<OrthoBasis>(build_basis(cfg, cfg.polytopes.front(), N));
    RunManifest manifest(cfg);
    const uint64_t stream = stream_id(fnv1a(cfg.experiment), 0);
    manifest.note_stream(0, stream);
    const RandomPolynomial f = sample_polynomial(basis, cfg.law, cfg.seed, stream);
    const auto pts = amoeba_sample(f, moduli, cfg.amoeba_angles);
    manifest.write_file(run_dir, "amoeba.csv", amoeba_csv(pts));
    manifest.finalize(run_dir);
    Json j;
    j["points"] = pts.size();
    j["run_dir"] = run_dir.string();
    return j;
}

Json cmd_kac(const ExperimentConfig& cfg, const fs::path& run_dir) {
    IntegralPolytope P = cfg.polytopes.empty() ? named_polytope("interval") : cfg.polytopes.front();
    if (P.m != 1) throw ConfigError("kac: requires m = 1");
    const long long N = cfg.Ns.front();
    auto basis = std::make_shared<OrthoBasis>(build_basis(cfg, P, N));
    RunManifest manifest(cfg);
    const double t0 = now_seconds();
    std::vector<double> fractions(cfg.trials, 0.0);
    std::vector<long long> found(cfg.trials, 0);
    parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
        const uint64_t stream = stream_id(fnv1a(cfg.experiment), trial);
        const RandomPolynomial f = sample_polynomial(basis, cfg.law, cfg.seed, stream);
        const ZeroSet zeros = roots_univariate(f);
        fractions[trial] = kac_concentration(EmpiricalMeasure::from_zeros(zeros, 1, N), cfg.kac_band);
        found[trial] = (long long)zeros.points.size();
    });
    std::ostringstream csv;
    csv << "trial,found,fraction\n";
    KahanSum mean;
    for (int t = 0; t < cfg.trials; ++t) {
        csv << t << ',' << found[t] << ',' << fractions[t] << '\n';
        mean.add(fractions[t] / cfg.trials);
    }
    manifest.note_phase("solve", now_seconds() - t0);
    manifest.write_file(run_dir, "fractions.csv", csv.str());
    Json j;
    j["mean_fraction"] = mean.sum;
    j["band"] = cfg.kac_band;
    j["N"] = N;
    j["trials"] = cfg.trials;
    manifest.write_file(run_dir, "summary.json", j.dump(2) + "\n");
    manifest.finalize(run_dir);
    j["run_dir"] = run_dir.string();
    return j;
}

Json cmd_uniformity(const ExperimentConfig& cfg, const fs::path& run_dir) {
    if (cfg.polytopes.size() != 2) throw ConfigError("uniformity: config needs two polytopes");
    const long long N = cfg.Ns.front();
    const OrthoBasis b1 = build_basis(cfg, cfg.polytopes[0], N);
    const OrthoBasis b2 = build_basis(cfg, cfg.polytopes[1], N);
    std::vector<ZeroSet> per_trial(cfg.trials);
    parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
        per_trial[trial] = solve_system_with_resample(cfg, b1, b2, trial).first;
    });
    EmpiricalMeasure pooled;
    pooled.k = 2;
    pooled.N = N;
    for (const auto& zeros : per_trial)
        pooled.points.insert(pooled.points.end(), zeros.points.begin(), zeros.points.end());
    const UniformityReport rep = angular_uniformity(pooled);
    RunManifest manifest(cfg);
    manifest.write_file(run_dir, "uniformity.json", uniformity_to_json(rep).dump(2) + "\n");
    manifest.finalize(run_dir);
    Json j = uniformity_to_json(rep);
    j["run_dir"] = run_dir.string();
    return j;
}

}  // namespace bklab
