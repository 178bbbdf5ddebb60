#include "cml_econo.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <filesystem>
#include <limits>
#include <new>
#include <string>
#include <string_view>
#include <vector>

#include "cml/errors.hpp"
#include "cml/io.hpp"
#include "cml/measures.hpp"
#include "cml/rng.hpp"
#include "cml/sweep.hpp"

struct cml_config {
    cml::SweepConfig cfg;
};

struct cml_table {
    std::vector<cml::CellSummary> cells;
};

struct cml_simulation {
    cml::CellRun run;
    std::vector<std::string> outputs;
};

namespace {

thread_local std::string g_last_error;

cml_status fail(cml_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class F>
cml_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const cml::ConfigError& e) {
        return fail(CML_ERR_CONFIG, e.what());
    } catch (const cml::DivergentStateError& e) {
        return fail(CML_ERR_DIVERGENT, e.what());
    } catch (const cml::InsufficientDataError& e) {
        return fail(CML_ERR_INSUFFICIENT_DATA, e.what());
    } catch (const cml::UndefinedError& e) {
        return fail(CML_ERR_UNDEFINED, e.what());
    } catch (const cml::IoError& e) {
        return fail(CML_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(CML_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CML_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CML_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CML_ERR_INTERNAL, "unknown error");
    }
}

#define CML_REQUIRE(ptr)                                                   \
    do {                                                                   \
        if ((ptr) == nullptr) return fail(CML_ERR_NULL_ARG, #ptr " is NULL"); \
    } while (0)

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

cml_fit to_c(const std::optional<cml::FitResult>& f) {
    cml_fit out{};
    if (!f) {
        out.exponent = out.intercept = out.beta = kNaN;
        return out;
    }
    out.present = 1;
    out.exponent = f->exponent;
    out.intercept = f->intercept;
    out.beta = f->beta;
    out.accepted = f->accepted ? 1 : 0;
    out.points_used = f->points_used;
    return out;
}

cml_classification to_c(cml::Classification c) {
    switch (c) {
        case cml::Classification::boltzmann_gibbs: return CML_CLASS_BOLTZMANN_GIBBS;
        case cml::Classification::pareto: return CML_CLASS_PARETO;
        case cml::Classification::both: return CML_CLASS_BOTH;
        case cml::Classification::neither: return CML_CLASS_NEITHER;
    }
    return CML_CLASS_NEITHER;
}

cml_cell to_c(const cml::CellSummary& c) {
    cml_cell out{};
    out.a = c.a;
    out.r = c.r;
    out.divergent = c.divergent ? 1 : 0;
    out.h_snapshot = or_nan(c.h_snapshot);
    out.h_mean = or_nan(c.h_mean);
    out.sigma_mean = or_nan(c.sigma_mean);
    out.gini_snapshot = or_nan(c.gini_snapshot);
    out.gini_mean = or_nan(c.gini_mean);
    out.bg = to_c(c.bg);
    out.pareto = to_c(c.pareto);
    out.classification = to_c(c.classification);
    out.temperature = or_nan(c.temperature);
    return out;
}

std::optional<cml::Range>* range_slot(cml::SweepConfig& c, std::string_view key) {
    if (key == "bg_fit_range") return &c.bg_fit_range;
    if (key == "pareto_fit_range") return &c.pareto_fit_range;
    return nullptr;
}

double* double_slot(cml::SweepConfig& c, std::string_view key) {
    if (key == "grid_step") return &c.grid_step;
    if (key == "init_lo") return &c.init_lo;
    if (key == "init_hi") return &c.init_hi;
    if (key == "beta_threshold") return &c.beta_threshold;
    if (key == "min_count_fraction") return &c.min_count_fraction;
    return nullptr;
}

template <class F>
bool uint_slot(cml::SweepConfig& c, std::string_view key, F&& f) {
    if (key == "n") return f(c.n), true;
    if (key == "transient") return f(c.transient), true;
    if (key == "window") return f(c.window), true;
    if (key == "realizations") return f(c.realizations), true;
    if (key == "master_seed") return f(c.master_seed), true;
    if (key == "bg_bins") return f(c.bg_bins), true;
    if (key == "pareto_bins") return f(c.pareto_bins), true;
    if (key == "min_points") return f(c.min_points), true;
    if (key == "min_count") return f(c.min_count), true;
    return false;
}

}  // namespace

extern "C" {

const char* cml_version(void) { return cml::code_version().data(); }
const char* cml_rng_identity(void) { return cml::kRngIdentity.data(); }
const char* cml_last_error(void) { return g_last_error.c_str(); }

const char* cml_status_string(cml_status status) {
    switch (status) {
        case CML_OK: return "ok";
        case CML_ERR_CONFIG: return "configuration error";
        case CML_ERR_DIVERGENT: return "divergent state";
        case CML_ERR_INSUFFICIENT_DATA: return "insufficient data";
        case CML_ERR_UNDEFINED: return "undefined quantity";
        case CML_ERR_IO: return "i/o error";
        case CML_ERR_NULL_ARG: return "null argument";
        case CML_ERR_OUT_OF_RANGE: return "index out of range";
        case CML_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cml_classification_string(cml_classification c) {
    switch (c) {
        case CML_CLASS_BOLTZMANN_GIBBS: return "boltzmann_gibbs";
        case CML_CLASS_PARETO: return "pareto";
        case CML_CLASS_BOTH: return "both";
        case CML_CLASS_NEITHER: return "neither";
    }
    return "neither";
}

cml_status cml_config_create(cml_config** out) {
    CML_REQUIRE(out);
    return guarded([&] {
        *out = new cml_config{};
        return CML_OK;
    });
}

cml_status cml_config_clone(const cml_config* cfg, cml_config** out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = new cml_config{*cfg};
        return CML_OK;
    });
}

void cml_config_free(cml_config* cfg) { delete cfg; }

cml_status cml_config_apply_profile(cml_config* cfg, const char* profile) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(profile);
    const auto p = cml::parse_profile(profile);
    if (!p) return fail(CML_ERR_CONFIG, std::string("unknown profile '") + profile + "' (expected full|desk)");
    cml::apply_profile(cfg->cfg, *p);
    return CML_OK;
}

cml_status cml_config_apply_preset(cml_config* cfg, const char* preset) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(preset);
    const auto p = cml::parse_preset(preset);
    if (!p) return fail(CML_ERR_CONFIG, std::string("unknown preset '") + preset + "' (expected fig2|fig3|fig4|fig5)");
    cml::apply_preset(cfg->cfg, *p);
    return CML_OK;
}

cml_status cml_config_set_double(cml_config* cfg, const char* key, double value) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    if (std::string_view(key) == "init_const") {
        if (std::isnan(value)) {
            cfg->cfg.init_const.reset();
        } else {
            cfg->cfg.init_const = value;
        }
        return CML_OK;
    }
    double* slot = double_slot(cfg->cfg, key);
    if (!slot) return fail(CML_ERR_CONFIG, std::string("unknown real-valued key '") + key + "'");
    *slot = value;
    return CML_OK;
}

cml_status cml_config_set_uint(cml_config* cfg, const char* key, uint64_t value) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    const bool found = uint_slot(cfg->cfg, key, [value](auto& slot) {
        slot = static_cast<std::remove_reference_t<decltype(slot)>>(value);
    });
    if (!found) return fail(CML_ERR_CONFIG, std::string("unknown integer key '") + key + "'");
    return CML_OK;
}

cml_status cml_config_set_string(cml_config* cfg, const char* key, const char* value) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    CML_REQUIRE(value);
    const std::string_view k(key);
    const std::string_view v(value);
    if (k == "sample_mode") {
        if (v == "pooled") {
            cfg->cfg.sample_mode = cml::SampleMode::pooled;
        } else if (v == "snapshot") {
            cfg->cfg.sample_mode = cml::SampleMode::snapshot;
        } else {
            return fail(CML_ERR_CONFIG, "sample_mode must be pooled or snapshot");
        }
        return CML_OK;
    }
    if (k == "pareto_scheme") {
        if (v == "linear") {
            cfg->cfg.pareto_scheme = cml::BinScheme::linear;
        } else if (v == "logarithmic" || v == "log") {
            cfg->cfg.pareto_scheme = cml::BinScheme::logarithmic;
        } else {
            return fail(CML_ERR_CONFIG, "pareto_scheme must be linear or logarithmic");
        }
        return CML_OK;
    }
    return fail(CML_ERR_CONFIG, std::string("unknown string key '") + key + "'");
}

cml_status cml_config_set_range(cml_config* cfg, const char* key, double lo, double hi) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    const std::string_view k(key);
    if (k == "a_range") {
        cfg->cfg.a_range = {lo, hi};
    } else if (k == "r_range") {
        cfg->cfg.r_range = {lo, hi};
    } else if (auto* slot = range_slot(cfg->cfg, k)) {
        if (std::isnan(lo) && std::isnan(hi)) {
            slot->reset();
        } else {
            *slot = cml::Range{lo, hi};
        }
    } else {
        return fail(CML_ERR_CONFIG, std::string("unknown range key '") + key + "'");
    }
    return CML_OK;
}

cml_status cml_config_get_double(const cml_config* cfg, const char* key, double* out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    CML_REQUIRE(out);
    if (std::string_view(key) == "init_const") {
        *out = cfg->cfg.init_const ? *cfg->cfg.init_const : kNaN;
        return CML_OK;
    }
    auto copy = cfg->cfg;
    double* slot = double_slot(copy, key);
    if (!slot) return fail(CML_ERR_CONFIG, std::string("unknown real-valued key '") + key + "'");
    *out = *slot;
    return CML_OK;
}

cml_status cml_config_get_uint(const cml_config* cfg, const char* key, uint64_t* out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    CML_REQUIRE(out);
    auto copy = cfg->cfg;
    const bool found = uint_slot(copy, key, [out](auto& slot) { *out = static_cast<uint64_t>(slot); });
    if (!found) return fail(CML_ERR_CONFIG, std::string("unknown integer key '") + key + "'");
    return CML_OK;
}

cml_status cml_config_get_range(const cml_config* cfg, const char* key, double* lo, double* hi) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(key);
    CML_REQUIRE(lo);
    CML_REQUIRE(hi);
    const std::string_view k(key);
    std::optional<cml::Range> r;
    if (k == "a_range") {
        r = cfg->cfg.a_range;
    } else if (k == "r_range") {
        r = cfg->cfg.r_range;
    } else if (k == "bg_fit_range") {
        r = cfg->cfg.bg_fit_range;
    } else if (k == "pareto_fit_range") {
        r = cfg->cfg.pareto_fit_range;
    } else {
        return fail(CML_ERR_CONFIG, std::string("unknown range key '") + key + "'");
    }
    *lo = r ? r->lo : kNaN;
    *hi = r ? r->hi : kNaN;
    return CML_OK;
}

cml_status cml_config_validate(const cml_config* cfg) {
    CML_REQUIRE(cfg);
    return guarded([&] {
        cfg->cfg.validate();
        return CML_OK;
    });
}

cml_status cml_config_to_json(const cml_config* cfg, char* buf, size_t cap, size_t* len) {
    CML_REQUIRE(cfg);
    return guarded([&] {
        const std::string s = cml::config_json(cfg->cfg);
        if (len) *len = s.size();
        if (buf == nullptr || cap == 0) return CML_OK;
        if (cap <= s.size()) return fail(CML_ERR_OUT_OF_RANGE, "buffer too small for config JSON");
        std::memcpy(buf, s.c_str(), s.size() + 1);
        return CML_OK;
    });
}

cml_status cml_sweep(const cml_config* cfg, unsigned threads, cml_table** out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = new cml_table{cml::sweep(cfg->cfg, threads)};
        return CML_OK;
    });
}

cml_status cml_scan(const cml_config* cfg, char fixed_axis, double value, unsigned threads, cml_table** out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(out);
    if (fixed_axis != 'a' && fixed_axis != 'r') return fail(CML_ERR_CONFIG, "fixed axis must be 'a' or 'r'");
    return guarded([&] {
        const auto axis = fixed_axis == 'a' ? cml::Axis::a : cml::Axis::r;
        *out = new cml_table{cml::scan_line(axis, value, cfg->cfg, threads)};
        return CML_OK;
    });
}

cml_status cml_ensemble_cell(const cml_config* cfg, double a, double r, cml_cell* out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = to_c(cml::ensemble_cell(a, r, cfg->cfg));
        return CML_OK;
    });
}

size_t cml_table_size(const cml_table* table) { return table ? table->cells.size() : 0; }

cml_status cml_table_cell(const cml_table* table, size_t index, cml_cell* out) {
    CML_REQUIRE(table);
    CML_REQUIRE(out);
    if (index >= table->cells.size()) return fail(CML_ERR_OUT_OF_RANGE, "table index out of range");
    *out = to_c(table->cells[index]);
    return CML_OK;
}

cml_status cml_table_write_csv(const cml_table* table, const char* path) {
    CML_REQUIRE(table);
    CML_REQUIRE(path);
    return guarded([&] {
        cml::write_phase_map_csv(std::filesystem::path(path), table->cells);
        return CML_OK;
    });
}

cml_status cml_table_read_csv(const char* path, cml_table** out) {
    CML_REQUIRE(path);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = new cml_table{cml::read_phase_map_csv(std::filesystem::path(path))};
        return CML_OK;
    });
}

void cml_table_free(cml_table* table) { delete table; }

cml_status cml_simulate(const cml_config* cfg, double a, double r, cml_simulation** out) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = new cml_simulation{cml::run_cell_detailed(a, r, cfg->cfg, 0), {}};
        return CML_OK;
    });
}

cml_status cml_simulation_cell(const cml_simulation* sim, cml_cell* out) {
    CML_REQUIRE(sim);
    CML_REQUIRE(out);
    *out = to_c(sim->run.summary);
    return CML_OK;
}

uint64_t cml_simulation_seed(const cml_simulation* sim) { return sim ? sim->run.seed : 0; }

cml_status cml_simulation_write_outputs(cml_simulation* sim, const char* out_dir) {
    CML_REQUIRE(sim);
    CML_REQUIRE(out_dir);
    return guarded([&] {
        namespace fs = std::filesystem;
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        std::vector<std::string> written;
        const auto& run = sim->run;
        if (run.bg_histogram) {
            cml::write_histogram_csv(dir / "histogram_bg.csv", *run.bg_histogram);
            written.push_back((dir / "histogram_bg.csv").string());
        }
        if (run.pareto_histogram) {
            cml::write_histogram_csv(dir / "histogram_pareto.csv", *run.pareto_histogram);
            written.push_back((dir / "histogram_pareto.csv").string());
        }
        cml::write_fits_csv(dir / "fits.csv", run.summary.bg, run.summary.pareto);
        written.push_back((dir / "fits.csv").string());
        cml::write_series_csv(dir / "series.csv", run);
        written.push_back((dir / "series.csv").string());
        cml::write_phase_map_csv(dir / "cell.csv", std::vector{run.summary});
        written.push_back((dir / "cell.csv").string());
        sim->outputs = std::move(written);
        return CML_OK;
    });
}

size_t cml_simulation_output_count(const cml_simulation* sim) { return sim ? sim->outputs.size() : 0; }

const char* cml_simulation_output_path(const cml_simulation* sim, size_t index) {
    if (!sim || index >= sim->outputs.size()) return nullptr;
    return sim->outputs[index].c_str();
}

void cml_simulation_free(cml_simulation* sim) { delete sim; }

cml_status cml_write_manifest(const cml_config* cfg, const char* command, const char* seed_source, unsigned threads,
                              int64_t started_unix_ms, const char* const* files, size_t nfiles, const char* path) {
    CML_REQUIRE(cfg);
    CML_REQUIRE(command);
    CML_REQUIRE(path);
    if (nfiles > 0 && files == nullptr) return fail(CML_ERR_NULL_ARG, "files is NULL");
    return guarded([&] {
        namespace fs = std::filesystem;
        cml::RunManifest m;
        m.command = command;
        m.config = cfg->cfg;
        m.seed_source = seed_source ? seed_source : "flag";
        m.threads = threads;
        m.started = cml::iso8601_utc_ms(started_unix_ms);
        m.finished = cml::iso8601_utc_ms(cml::now_unix_ms());
        std::vector<fs::path> paths(files, files + nfiles);
        const fs::path base = fs::absolute(fs::path(path)).parent_path();
        for (auto& p : paths) p = fs::absolute(p);
        m.output_files = cml::describe_outputs(paths, base);
        cml::write_manifest(fs::path(path), m);
        return CML_OK;
    });
}

cml_status cml_mean_field(const double* x, size_t n, double* out) {
    CML_REQUIRE(x);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = cml::mean_field(std::span<const double>(x, n));
        return CML_OK;
    });
}

cml_status cml_sigma(const double* x, size_t n, double* out) {
    CML_REQUIRE(x);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = cml::sigma(std::span<const double>(x, n));
        return CML_OK;
    });
}

cml_status cml_gini(const double* x, size_t n, double* out) {
    CML_REQUIRE(x);
    CML_REQUIRE(out);
    return guarded([&] {
        *out = cml::gini(std::span<const double>(x, n));
        return CML_OK;
    });
}

}  // extern "C"
