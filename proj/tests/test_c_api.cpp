#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "cml_econo.h"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

cml_config* small_config() {
    cml_config* cfg = nullptr;
    REQUIRE(cml_config_create(&cfg) == CML_OK);
    REQUIRE(cml_config_set_uint(cfg, "n", 300) == CML_OK);
    REQUIRE(cml_config_set_uint(cfg, "transient", 100) == CML_OK);
    REQUIRE(cml_config_set_uint(cfg, "window", 5) == CML_OK);
    REQUIRE(cml_config_set_uint(cfg, "master_seed", 17) == CML_OK);
    return cfg;
}

}  // namespace

TEST_CASE("version and identity strings") {
    CHECK(std::strlen(cml_version()) > 0);
    CHECK(std::string(cml_rng_identity()).rfind("mt19937_64", 0) == 0);
    CHECK(std::string(cml_status_string(CML_ERR_CONFIG)).size() > 0);
    CHECK(std::string(cml_classification_string(CML_CLASS_PARETO)) == "pareto");
}

TEST_CASE("config get and set") {
    cml_config* cfg = nullptr;
    REQUIRE(cml_config_create(&cfg) == CML_OK);
    uint64_t n = 0;
    CHECK(cml_config_get_uint(cfg, "n", &n) == CML_OK);
    CHECK(n == 100000);
    CHECK(cml_config_apply_profile(cfg, "desk") == CML_OK);
    CHECK(cml_config_get_uint(cfg, "n", &n) == CML_OK);
    CHECK(n == 10000);
    double step = 0.0;
    CHECK(cml_config_get_double(cfg, "grid_step", &step) == CML_OK);
    CHECK(step == 0.1);
    CHECK(cml_config_apply_profile(cfg, "huge") == CML_ERR_CONFIG);
    CHECK(std::string(cml_last_error()).find("huge") != std::string::npos);
    CHECK(cml_config_apply_preset(cfg, "fig4") == CML_OK);
    uint64_t reals = 0;
    CHECK(cml_config_get_uint(cfg, "realizations", &reals) == CML_OK);
    CHECK(reals == 100);

    CHECK(cml_config_set_range(cfg, "a_range", 0.5, 1.5) == CML_OK);
    double lo = 0.0, hi = 0.0;
    CHECK(cml_config_get_range(cfg, "a_range", &lo, &hi) == CML_OK);
    CHECK(lo == 0.5);
    CHECK(hi == 1.5);
    CHECK(cml_config_set_range(cfg, "pareto_fit_range", 2.0, 80.0) == CML_OK);
    CHECK(cml_config_set_string(cfg, "sample_mode", "snapshot") == CML_OK);
    CHECK(cml_config_set_string(cfg, "sample_mode", "sometimes") == CML_ERR_CONFIG);
    CHECK(cml_config_set_double(cfg, "init_const", 3.0) == CML_OK);
    CHECK(cml_config_set_double(cfg, "init_const", NAN) == CML_OK);
    CHECK(cml_config_set_double(cfg, "no_such_key", 1.0) == CML_ERR_CONFIG);
    CHECK(cml_config_set_uint(cfg, "no_such_key", 1) == CML_ERR_CONFIG);

    cml_config* copy = nullptr;
    REQUIRE(cml_config_clone(cfg, &copy) == CML_OK);
    CHECK(cml_config_set_uint(copy, "n", 77) == CML_OK);
    CHECK(cml_config_get_uint(cfg, "n", &n) == CML_OK);
    CHECK(n == 10000);

    size_t len = 0;
    CHECK(cml_config_to_json(cfg, nullptr, 0, &len) == CML_OK);
    CHECK(len > 0);
    char tiny[8];
    CHECK(cml_config_to_json(cfg, tiny, sizeof tiny, nullptr) == CML_ERR_OUT_OF_RANGE);
    std::string buf(len + 1, '\0');
    CHECK(cml_config_to_json(cfg, buf.data(), buf.size(), &len) == CML_OK);
    CHECK(buf.find("\"sample_mode\": \"snapshot\"") != std::string::npos);

    CHECK(cml_config_set_double(cfg, "grid_step", -1.0) == CML_OK);
    CHECK(cml_config_validate(cfg) == CML_ERR_CONFIG);
    cml_config_free(copy);
    cml_config_free(cfg);
}

TEST_CASE("null arguments") {
    cml_config* cfg = small_config();
    cml_table* table = nullptr;
    cml_cell cell;
    double v = 0.0;
    CHECK(cml_config_create(nullptr) == CML_ERR_NULL_ARG);
    CHECK(cml_config_set_uint(nullptr, "n", 5) == CML_ERR_NULL_ARG);
    CHECK(cml_config_set_uint(cfg, nullptr, 5) == CML_ERR_NULL_ARG);
    CHECK(cml_config_get_uint(cfg, "n", nullptr) == CML_ERR_NULL_ARG);
    CHECK(cml_sweep(nullptr, 1, &table) == CML_ERR_NULL_ARG);
    CHECK(cml_sweep(cfg, 1, nullptr) == CML_ERR_NULL_ARG);
    CHECK(cml_table_cell(nullptr, 0, &cell) == CML_ERR_NULL_ARG);
    CHECK(cml_table_size(nullptr) == 0);
    CHECK(cml_mean_field(nullptr, 3, &v) == CML_ERR_NULL_ARG);
    CHECK(cml_simulate(cfg, 0.6, 4.0, nullptr) == CML_ERR_NULL_ARG);
    cml_config_free(nullptr);
    cml_table_free(nullptr);
    cml_simulation_free(nullptr);
    cml_config_free(cfg);
}

TEST_CASE("observable helpers") {
    const double x[4] = {1, 2, 3, 4};
    double v = 0.0;
    CHECK(cml_mean_field(x, 4, &v) == CML_OK);
    CHECK(v == 2.5);
    CHECK(cml_sigma(x, 4, &v) == CML_OK);
    CHECK(v == doctest::Approx(std::sqrt(1.25)));
    CHECK(cml_gini(x, 4, &v) == CML_OK);
    CHECK(v == doctest::Approx(0.25));
    const double z[3] = {0, 0, 0};
    CHECK(cml_gini(z, 3, &v) == CML_ERR_UNDEFINED);
    CHECK(cml_mean_field(x, 0, &v) == CML_ERR_CONFIG);
}

TEST_CASE("sweep table through the C interface") {
    cml_config* cfg = small_config();
    REQUIRE(cml_config_set_range(cfg, "a_range", 0.5, 1.0) == CML_OK);
    REQUIRE(cml_config_set_range(cfg, "r_range", 4.0, 8.0) == CML_OK);
    REQUIRE(cml_config_set_double(cfg, "grid_step", 0.5) == CML_OK);
    cml_table* t1 = nullptr;
    cml_table* t2 = nullptr;
    REQUIRE(cml_sweep(cfg, 1, &t1) == CML_OK);
    REQUIRE(cml_sweep(cfg, 3, &t2) == CML_OK);
    REQUIRE(cml_table_size(t1) == 18);
    cml_cell c{};
    CHECK(cml_table_cell(t1, 18, &c) == CML_ERR_OUT_OF_RANGE);
    REQUIRE(cml_table_cell(t1, 1, &c) == CML_OK);
    CHECK(c.a == 1.0);
    CHECK(c.r == 4.0);

    const auto dir = fs::temp_directory_path() / "cml_capi";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string p1 = (dir / "t1.csv").string();
    const std::string p2 = (dir / "t2.csv").string();
    REQUIRE(cml_table_write_csv(t1, p1.c_str()) == CML_OK);
    REQUIRE(cml_table_write_csv(t2, p2.c_str()) == CML_OK);

    const char* files[2] = {p1.c_str(), p2.c_str()};
    const std::string man = (dir / "manifest.json").string();
    CHECK(cml_write_manifest(cfg, "sweep", "flag", 3, 0, files, 2, man.c_str()) == CML_OK);
    CHECK(fs::exists(man));
    CHECK(cml_write_manifest(cfg, "sweep", "flag", 3, 0, nullptr, 2, man.c_str()) == CML_ERR_NULL_ARG);

    cml_table* back = nullptr;
    REQUIRE(cml_table_read_csv(p1.c_str(), &back) == CML_OK);
    CHECK(cml_table_size(back) == 18);
    CHECK(cml_table_read_csv((dir / "none.csv").string().c_str(), &back) == CML_ERR_IO);
    CHECK(cml_table_write_csv(t1, "/nonexistent/dir/t.csv") == CML_ERR_IO);

    cml_table* line = nullptr;
    REQUIRE(cml_scan(cfg, 'r', 8.0, 1, &line) == CML_OK);
    CHECK(cml_table_size(line) == 2);
    cml_cell lc{};
    REQUIRE(cml_table_cell(line, 1, &lc) == CML_OK);
    CHECK(lc.a == 1.0);
    CHECK(lc.r == 8.0);
    CHECK(cml_scan(cfg, 'x', 8.0, 1, &line) == CML_ERR_CONFIG);
    cml_table_free(line);

    cml_table_free(back);
    cml_table_free(t1);
    cml_table_free(t2);
    cml_config_free(cfg);
}

TEST_CASE("simulation handle and divergent cells") {
    cml_config* cfg = small_config();
    cml_simulation* sim = nullptr;
    REQUIRE(cml_simulate(cfg, 0.6, 4.0, &sim) == CML_OK);
    cml_cell c{};
    REQUIRE(cml_simulation_cell(sim, &c) == CML_OK);
    CHECK(c.divergent == 0);
    CHECK(std::isfinite(c.h_snapshot));
    CHECK(c.bg.present == 1);
    CHECK(cml_simulation_seed(sim) != 0);

    const auto dir = fs::temp_directory_path() / "cml_capi_sim";
    fs::remove_all(dir);
    REQUIRE(cml_simulation_write_outputs(sim, dir.string().c_str()) == CML_OK);
    CHECK(cml_simulation_output_count(sim) == 5);
    for (size_t i = 0; i < cml_simulation_output_count(sim); ++i) CHECK(fs::exists(cml_simulation_output_path(sim, i)));
    CHECK(cml_simulation_output_path(sim, 5) == nullptr);
    cml_simulation_free(sim);

    REQUIRE(cml_config_set_uint(cfg, "n", 100) == CML_OK);
    REQUIRE(cml_config_set_double(cfg, "init_const", 2.0) == CML_OK);
    REQUIRE(cml_simulate(cfg, 1.0, 4.0, &sim) == CML_OK);
    REQUIRE(cml_simulation_cell(sim, &c) == CML_OK);
    CHECK(c.divergent == 1);
    CHECK(c.bg.present == 0);
    CHECK(std::isnan(c.h_snapshot));
    CHECK(std::isnan(c.temperature));
    CHECK(c.classification == CML_CLASS_NEITHER);
    cml_simulation_free(sim);

    cml_cell e{};
    REQUIRE(cml_config_set_double(cfg, "init_const", NAN) == CML_OK);
    REQUIRE(cml_config_set_uint(cfg, "realizations", 2) == CML_OK);
    CHECK(cml_ensemble_cell(cfg, 0.6, 4.0, &e) == CML_OK);
    CHECK(e.divergent == 0);
    CHECK(cml_config_set_uint(cfg, "n", 2) == CML_OK);
    CHECK(cml_simulate(cfg, 0.6, 4.0, &sim) == CML_ERR_CONFIG);
    cml_config_free(cfg);
}
