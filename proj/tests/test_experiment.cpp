#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraclab/csv.hpp"
#include "fraclab/experiment.hpp"

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

struct TmpDir {
    fs::path path;
    explicit TmpDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TmpDir() { fs::remove_all(path); }
};

int run_to(const ExperimentConfig& cfg, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int rc = run_experiment(cfg, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("csv primitives") {
    CHECK(csv_num(0.5) == "0.5");
    CHECK(csv_num(42) == "42");
    // %.17g round-trips doubles exactly
    double v = 0.1 + 0.2;
    CHECK(std::stod(csv_num(v)) == v);
    TmpDir tmp("fraclab_test_csv");
    fs::create_directories(tmp.path);
    CsvWriter w((tmp.path / "t.csv").string(), {"a", "b"});
    w.row({"1", "2"});
    CHECK_THROWS_AS(w.row({"1"}), std::invalid_argument);
}

TEST_CASE("config parsing") {
    std::istringstream in(
        "# experiment sweep\n"
        "[run]\n"
        "manifold = sphere\n"
        "s = 0.25, 0.5\n"
        "resolutions = 16, 24\n"
        "epsilon_rule = 4\n"
        "methods = spectral, heat\n"
        "band_limit = 6\n"
        "seed = 99\n"
        "output = /tmp/somewhere  # trailing comment\n");
    ExperimentConfig cfg = parse_config(in);
    CHECK(cfg.manifold == "sphere");
    REQUIRE(cfg.s_values.size() == 2);
    CHECK(cfg.s_values[1] == 0.5);
    REQUIRE(cfg.resolutions.size() == 2);
    CHECK(cfg.resolutions[0] == 16);
    CHECK(cfg.methods == std::vector<std::string>{"spectral", "heat"});
    CHECK(cfg.band_limit == 6);
    CHECK(cfg.seed == 99);
    CHECK(cfg.output == "/tmp/somewhere");

    std::istringstream bad1("unknown_key = 3\n");
    CHECK_THROWS_AS(parse_config(bad1), std::invalid_argument);
    std::istringstream bad2("[broken\n");
    CHECK_THROWS_AS(parse_config(bad2), std::invalid_argument);
    std::istringstream bad3("just a line\n");
    CHECK_THROWS_AS(parse_config(bad3), std::invalid_argument);
    CHECK_THROWS_AS(manifold_from_name("klein_bottle"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), std::invalid_argument);
}

TEST_CASE("validation failures exit with code 1 and a machine-readable error") {
    TmpDir tmp("fraclab_test_validate");
    ExperimentConfig base;
    base.manifold = "torus1";
    base.s_values = {0.5};
    base.resolutions = {32};
    base.methods = {"pv"};
    base.band_limit = 4;
    base.output = (tmp.path / "o").string();

    std::string err;
    ExperimentConfig c1 = base;
    c1.epsilon_rule = 1.5;
    CHECK(run_to(c1, &err) == 1);
    CHECK(err.rfind("error:", 0) == 0);

    ExperimentConfig c2 = base;
    c2.methods = {"riesz"};
    c2.manifold = "torus2";
    c2.s_values = {-0.25};
    CHECK(run_to(c2) == 1);

    ExperimentConfig c3 = base;
    c3.band_limit = 20;  // beyond Nyquist at resolution 32
    CHECK(run_to(c3) == 1);

    ExperimentConfig c4 = base;
    c4.methods = {"warp"};
    CHECK(run_to(c4) == 1);

    ExperimentConfig c5 = base;
    c5.methods = {"heat"};
    c5.s_values = {-0.5};
    CHECK(run_to(c5) == 1);

    CHECK_FALSE(fs::exists(tmp.path / "o"));  // nothing written on validation failure
}

TEST_CASE("vacuous run produces an empty summary and succeeds") {
    TmpDir tmp("fraclab_test_vacuous");
    ExperimentConfig cfg;
    cfg.methods = {};
    cfg.output = (tmp.path / "o").string();
    CHECK(run_to(cfg) == 0);
    auto rows = read_csv(fs::path(cfg.output) / "summary.csv");
    REQUIRE(rows.size() == 1);  // header only
    CHECK(rows[0][0] == "criterion");
}

TEST_CASE("spectral sweep is reproducible modulo the runtime column") {
    TmpDir tmp("fraclab_test_spectral");
    ExperimentConfig cfg;
    cfg.manifold = "torus1";
    cfg.s_values = {0.25, -0.5};
    cfg.resolutions = {32};
    cfg.methods = {"spectral"};
    cfg.band_limit = 4;
    cfg.seed = 3;

    std::vector<std::vector<std::string>> runs[2];
    for (int r = 0; r < 2; ++r) {
        cfg.output = (tmp.path / ("o" + std::to_string(r))).string();
        REQUIRE(run_to(cfg) == 0);
        runs[r] = read_csv(fs::path(cfg.output) / "heat_vs_spectral.csv");
    }
    REQUIRE(runs[0].size() == runs[1].size());
    REQUIRE(runs[0].size() >= 2);
    auto& header = runs[0][0];
    std::size_t runtime_col = 0;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == "runtime_seconds") runtime_col = c;
    REQUIRE(runtime_col > 0);
    for (std::size_t i = 0; i < runs[0].size(); ++i)
        for (std::size_t c = 0; c < runs[0][i].size(); ++c)
            if (c != runtime_col) CHECK(runs[0][i][c] == runs[1][i][c]);
    // summary covers the spectral criterion
    auto summary = read_csv(fs::path(cfg.output) / "summary.csv");
    REQUIRE(summary.size() == 2);
    CHECK(summary[1][0] == "contour_scalar");
    CHECK(summary[1][2] == "pass");
}

TEST_CASE("heat sweep reports near-zero errors for band-limited fields") {
    TmpDir tmp("fraclab_test_heat");
    ExperimentConfig cfg;
    cfg.manifold = "torus1";
    cfg.s_values = {0.5};
    cfg.resolutions = {32};
    cfg.methods = {"heat"};
    cfg.band_limit = 4;
    cfg.output = (tmp.path / "o").string();
    REQUIRE(run_to(cfg) == 0);
    auto rows = read_csv(fs::path(cfg.output) / "heat_vs_spectral.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][2] == "heat");
    CHECK(std::stod(rows[1][3]) < 1e-7);  // L2_error
    CHECK(rows[1].back() == "ok");
}

TEST_CASE("pv sweep fills the kernel diagnostics columns") {
    TmpDir tmp("fraclab_test_pv");
    ExperimentConfig cfg;
    cfg.manifold = "torus1";
    cfg.s_values = {0.5};
    cfg.resolutions = {48};
    cfg.methods = {"pv"};
    cfg.band_limit = 4;
    cfg.output = (tmp.path / "o").string();
    REQUIRE(run_to(cfg) == 0);
    auto rows = read_csv(fs::path(cfg.output) / "pv_riesz.csv");
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].size() == 12);
    CHECK(rows[1][0] == "torus1");
    CHECK(rows[1].back() == "ok");
    double l2 = std::stod(rows[1][6]);
    CHECK(l2 < 0.2);  // coarse grid, loose sanity bound
    double limit = std::stod(rows[1][8]);
    double target = std::stod(rows[1][9]);
    CHECK(std::abs(limit - target) < 0.05 * target);
    // summary covers the pvkernel criteria
    auto summary = read_csv(fs::path(cfg.output) / "summary.csv");
    REQUIRE(summary.size() == 4);
    for (std::size_t i = 1; i < summary.size(); ++i) CHECK(summary[i][2] == "pass");
}

TEST_CASE("parametrix sweep writes ray and remainder artifacts") {
    TmpDir tmp("fraclab_test_parametrix");
    ExperimentConfig cfg;
    cfg.manifold = "torus1";
    cfg.s_values = {0.5};
    cfg.resolutions = {32};
    cfg.methods = {"parametrix"};
    cfg.band_limit = 4;
    cfg.output = (tmp.path / "o").string();
    // the parametrix module carries a criterion that is red by construction
    // (the flat second amplitude vanishes), so the run reports code 2
    CHECK(run_to(cfg) == 2);
    auto ray = read_csv(fs::path(cfg.output) / "parametrix_ray.csv");
    REQUIRE(ray.size() == 92);  // header + 91 samples
    for (std::size_t i = 1; i < ray.size(); ++i)
        CHECK(std::stod(ray[i][3]) < 1e-6);  // |u0 - Theta^{-1/2}|
    auto rem = read_csv(fs::path(cfg.output) / "parametrix_remainder.csv");
    REQUIRE(rem.size() == 3);
    CHECK(rem[1][0] == "0");
    CHECK(rem[2][0] == "1");
    CHECK(rem[1].back() == "ok");
    CHECK(std::stod(rem[1][3]) >= 0.0);
}
