#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bklab/harness.hpp"

using namespace bklab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("bklab-test-" + std::to_string(std::chrono::steady_clock::now()
                                                   .time_since_epoch()
                                                   .count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Json base_config() {
    return Json{{"experiment", "t"},
                {"polytopes", {"square", "square"}},
                {"weighted_set", {{"kind", "torus"}}},
                {"law", {{"kind", "gaussian"}}},
                {"Ns", {1}},
                {"trials", 2},
                {"seed", 42}};
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(config_from_json(Json{{"experiment", "x"}}), ConfigError);  // no seed
    Json bad = base_config();
    bad["law"]["kind"] = "cauchy";
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    Json badN = base_config();
    badN["Ns"] = {0};
    CHECK_THROWS_AS(config_from_json(badN), ConfigError);
    Json badP = base_config();
    badP["polytopes"] = {"heptagon"};
    CHECK_THROWS(config_from_json(badP));
    Json fs_nop = base_config();
    fs_nop["weighted_set"] = {{"kind", "fs"}};
    CHECK_THROWS_AS(config_from_json(fs_nop), ConfigError);
}

TEST_CASE("mixed-volume driver output") {
    const auto j = cmd_mixed_volume({named_polytope("simplex2"), named_polytope("simplex2")});
    CHECK(j["value"] == "1");
    const auto j2 = cmd_mixed_volume({named_polytope("square"), named_polytope("square")});
    CHECK(j2["value"] == "2");
    const auto j3 = cmd_mixed_volume({named_polytope("square"), named_polytope("simplex2")});
    CHECK(j3["value"] == "2");
}

TEST_CASE("lattice-points driver output") {
    const auto j = cmd_lattice_points(named_polytope("square"), 3);
    CHECK(j["count"] == 16);
}

TEST_CASE("bk-verify end to end with byte-identical rerun") {
    TempDir tmp;
    Json cj = base_config();
    cj["out"] = (tmp.path / "a").string();
    const auto cfg = config_from_json(cj);
    const auto dir1 = make_run_dir(cfg);
    const auto sum1 = cmd_bk_verify(cfg, dir1);
    CHECK(sum1["per_N"][0]["match_rate"] == 1.0);
    CHECK(sum1["per_N"][0]["expected"] == 2);

    const auto dir2 = make_run_dir(cfg);  // append-never: distinct directory
    CHECK(dir1 != dir2);
    const auto sum2 = cmd_bk_verify(cfg, dir2);
    CHECK(slurp(dir1 / "counts-N1.jsonl") == slurp(dir2 / "counts-N1.jsonl"));
    CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
    CHECK(!slurp(dir1 / "manifest.json").empty());
}

TEST_CASE("kac driver") {
    TempDir tmp;
    Json cj = base_config();
    cj["polytopes"] = {"interval"};
    cj["Ns"] = {40};
    cj["trials"] = 3;
    cj["out"] = tmp.path.string();
    const auto cfg = config_from_json(cj);
    const auto j = cmd_kac(cfg, make_run_dir(cfg));
    CHECK(j["mean_fraction"].get<double>() > 0.5);
    CHECK(j["trials"] == 3);
}

TEST_CASE("sample driver writes coefficient dumps") {
    TempDir tmp;
    Json cj = base_config();
    cj["polytopes"] = {"interval"};
    cj["Ns"] = {5};
    cj["out"] = tmp.path.string();
    const auto cfg = config_from_json(cj);
    const auto dir = make_run_dir(cfg);
    const auto j = cmd_sample(cfg, dir);
    CHECK(j["d_N"] == 6);
    const std::string csv = slurp(dir / "coeffs-0.csv");
    CHECK(csv.substr(0, 12) == "index,re,im\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
}

TEST_CASE("threaded trials merge deterministically") {
    TempDir tmp;
    Json cj = base_config();
    cj["trials"] = 6;
    cj["out"] = (tmp.path / "s").string();
    const auto serial_cfg = config_from_json(cj);
    cj["threads"] = 4;
    cj["out"] = (tmp.path / "p").string();
    const auto parallel_cfg = config_from_json(cj);
    const auto d1 = make_run_dir(serial_cfg);
    const auto d2 = make_run_dir(parallel_cfg);
    cmd_bk_verify(serial_cfg, d1);
    cmd_bk_verify(parallel_cfg, d2);
    CHECK(slurp(d1 / "counts-N1.jsonl") == slurp(d2 / "counts-N1.jsonl"));
}

TEST_CASE("uniformity driver") {
    TempDir tmp;
    Json cj = base_config();
    cj["Ns"] = {3};
    cj["trials"] = 4;
    cj["out"] = tmp.path.string();
    const auto cfg = config_from_json(cj);
    const auto j = cmd_uniformity(cfg, make_run_dir(cfg));
    CHECK(j["points"] == 4 * 18);  // all generic trials found
    CHECK(j["ks_p_value"].size() == 2);
}

TEST_CASE("amoeba driver") {
    TempDir tmp;
    Json cj = base_config();
    cj["polytopes"] = {"square"};
    cj["Ns"] = {2};
    cj["amoeba_moduli"] = {0.5, 1.0, 2.0};
    cj["amoeba_angles"] = 16;
    cj["out"] = tmp.path.string();
    const auto cfg = config_from_json(cj);
    const auto j = cmd_amoeba(cfg, make_run_dir(cfg));
    CHECK(j["points"].get<int>() > 20);
}

TEST_CASE("figures driver emits the expected generic counts at desk scale") {
    // N = 2 keeps the unit test fast; the acceptance suite runs N = 10
    TempDir tmp;
    Json cj = base_config();
    cj["experiment"] = "figtest";
    cj["Ns"] = {2};
    cj["trials"] = 1;
    cj["out"] = tmp.path.string();
    const auto cfg = config_from_json(cj);
    const auto dir = make_run_dir(cfg);
    const auto j = cmd_figures(cfg, dir);
    // MV(T5,T5) = 6 -> 24 zeros at N = 2
    CHECK(j["gaussian"]["points"] == 24);
    CHECK(j["pareto"]["points"] == 24);
    const std::string csv = slurp(dir / "gaussian.csv");
    CHECK(csv.substr(0, 30) == "re1,im1,re2,im2,residual,flags");
}
