// cml-econo: command-line front end over the C API.
//
//   cml-econo simulate --a 0.6 --r 4 --out-dir out/
//   cml-econo sweep --preset fig3 --profile desk --threads 4 --out-dir maps/
//   cml-econo scan --fix r=8 --out-dir scan/

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cml_econo.h"

namespace {

struct Failure {
    int code;
};

void check(cml_status s, const char* what) {
    if (s != CML_OK) {
        std::cerr << "error: " << what << ": " << cml_status_string(s);
        const char* msg = cml_last_error();
        if (msg && *msg) std::cerr << ": " << msg;
        std::cerr << '\n';
        throw Failure{s == CML_ERR_CONFIG ? 2 : 1};
    }
}

using ConfigPtr = std::unique_ptr<cml_config, decltype(&cml_config_free)>;
using TablePtr = std::unique_ptr<cml_table, decltype(&cml_table_free)>;
using SimPtr = std::unique_ptr<cml_simulation, decltype(&cml_simulation_free)>;

// Flags shared by every subcommand. Unset optionals leave the profile value.
struct CommonOpts {
    std::string profile = "full";
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> transient;
    std::optional<std::uint64_t> window;
    std::optional<std::uint64_t> realizations;
    std::optional<std::uint64_t> bins;
    std::optional<std::uint64_t> pareto_bins;
    std::optional<std::uint64_t> min_count;
    std::optional<double> beta_threshold;
    std::optional<double> min_count_fraction;
    std::optional<std::string> pareto_scheme;
    std::vector<double> init_range;
    std::vector<double> bg_fit_range;
    std::vector<double> pareto_fit_range;
    std::string out_dir = ".";
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--profile", o.profile, "Protocol scale: full (N=1e5) or desk (N=1e4)")
        ->check(CLI::IsMember({"full", "desk"}));
    app->add_option("--preset", o.preset, "Averaging protocol: fig2|fig3|fig4|fig5")
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
    app->add_option("--seed", o.seed, "Master seed (random and recorded when omitted)");
    app->add_option("--n", o.n, "Lattice size")->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1} << 40));
    app->add_option("--transient", o.transient, "Discarded iterations");
    app->add_option("--window", o.window, "Measurement iterations")->check(CLI::PositiveNumber);
    app->add_option("--realizations", o.realizations, "Initial-condition realizations per cell")
        ->check(CLI::PositiveNumber);
    app->add_option("--bins", o.bins, "Linear bins for the Boltzmann-Gibbs histogram");
    app->add_option("--pareto-bins", o.pareto_bins, "Bins for the Pareto histogram");
    app->add_option("--pareto-scheme", o.pareto_scheme, "Pareto histogram binning: linear|logarithmic")
        ->check(CLI::IsMember({"linear", "logarithmic"}));
    app->add_option("--min-count", o.min_count, "Minimum bin count used in fits");
    app->add_option("--min-count-fraction", o.min_count_fraction, "Count floor as a fraction of the sample size");
    app->add_option("--beta-threshold", o.beta_threshold, "Acceptance threshold on |beta|");
    app->add_option("--init-range", o.init_range, "Initial wealth range lo hi")->expected(2);
    app->add_option("--bg-fit-range", o.bg_fit_range, "Restrict the semilog fit to bin centers in lo hi")
        ->expected(2);
    app->add_option("--pareto-fit-range", o.pareto_fit_range, "Restrict the log-log fit to bin centers in lo hi")
        ->expected(2);
    app->add_option("--out-dir", o.out_dir, "Output directory");
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Applies profile, then preset, then explicit flags.
ConfigPtr build_config(const CommonOpts& o, std::string& seed_source) {
    cml_config* raw = nullptr;
    check(cml_config_create(&raw), "config");
    ConfigPtr cfg(raw, &cml_config_free);
    check(cml_config_apply_profile(cfg.get(), o.profile.c_str()), "profile");
    if (o.preset) check(cml_config_apply_preset(cfg.get(), o.preset->c_str()), "preset");

    std::uint64_t seed = 0;
    if (o.seed) {
        seed = *o.seed;
        seed_source = "flag";
    } else {
        seed = random_seed();
        seed_source = "random";
        std::cerr << "seed: " << seed << '\n';
    }
    check(cml_config_set_uint(cfg.get(), "master_seed", seed), "seed");

    auto set_u = [&](const char* key, const std::optional<std::uint64_t>& v) {
        if (v) check(cml_config_set_uint(cfg.get(), key, *v), key);
    };
    set_u("n", o.n);
    set_u("transient", o.transient);
    set_u("window", o.window);
    set_u("realizations", o.realizations);
    set_u("bg_bins", o.bins);
    set_u("pareto_bins", o.pareto_bins);
    set_u("min_count", o.min_count);
    if (o.min_count_fraction) {
        check(cml_config_set_double(cfg.get(), "min_count_fraction", *o.min_count_fraction), "min-count-fraction");
    }
    if (o.beta_threshold) check(cml_config_set_double(cfg.get(), "beta_threshold", *o.beta_threshold), "beta");
    if (o.pareto_scheme) check(cml_config_set_string(cfg.get(), "pareto_scheme", o.pareto_scheme->c_str()), "scheme");
    if (o.init_range.size() == 2) {
        check(cml_config_set_double(cfg.get(), "init_lo", o.init_range[0]), "init range");
        check(cml_config_set_double(cfg.get(), "init_hi", o.init_range[1]), "init range");
    }
    if (o.bg_fit_range.size() == 2) {
        check(cml_config_set_range(cfg.get(), "bg_fit_range", o.bg_fit_range[0], o.bg_fit_range[1]), "fit range");
    }
    if (o.pareto_fit_range.size() == 2) {
        check(cml_config_set_range(cfg.get(), "pareto_fit_range", o.pareto_fit_range[0], o.pareto_fit_range[1]),
              "fit range");
    }
    return cfg;
}

unsigned default_threads() {
    if (const char* env = std::getenv("CML_ECONO_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
        std::cerr << "warning: ignoring invalid CML_ECONO_THREADS='" << env << "'\n";
    }
    return 1;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void print_summary(const cml_cell& c) {
    std::cout << "a=" << fmt(c.a) << " r=" << fmt(c.r) << " classification=" << cml_classification_string(c.classification)
              << " divergent=" << (c.divergent ? "true" : "false") << " mu=" << fmt(c.bg.exponent)
              << " beta_bg=" << fmt(c.bg.beta) << " alpha=" << fmt(c.pareto.exponent)
              << " beta_pareto=" << fmt(c.pareto.beta) << " H=" << fmt(c.h_snapshot) << " sigma=" << fmt(c.sigma_mean)
              << " gini=" << fmt(c.gini_snapshot) << '\n';
}

void write_manifest(const cml_config* cfg, const char* command, const std::string& seed_source, unsigned threads,
                    std::int64_t started, const std::vector<std::string>& files, const std::filesystem::path& dir) {
    std::vector<const char*> ptrs;
    for (const auto& f : files) ptrs.push_back(f.c_str());
    const auto path = (dir / "manifest.json").string();
    check(cml_write_manifest(cfg, command, seed_source.c_str(), threads, started, ptrs.data(), ptrs.size(),
                             path.c_str()),
          "manifest");
}

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic coupled-map-lattice wealth model: simulate cells, sweep (a, r) phase maps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cml_version()));

    CommonOpts sim_opts;
    double sim_a = 0.0;
    double sim_r = 0.0;
    bool snapshot_only = false;
    std::optional<double> init_const;
    auto* sim = app.add_subcommand("simulate", "Run one (a, r) cell and write histograms, fits and series");
    sim->add_option("--a", sim_a, "Environmental pressure a")->required()->check(CLI::NonNegativeNumber);
    sim->add_option("--r", sim_r, "Growth capacity r")->required()->check(CLI::PositiveNumber);
    sim->add_flag("--snapshot-only", snapshot_only, "Fit the state at t=transient instead of the pooled window");
    sim->add_option("--init-const", init_const, "Constant initial wealth instead of the uniform draw");
    add_common(sim, sim_opts);

    CommonOpts sweep_opts;
    std::vector<double> sweep_a;
    std::vector<double> sweep_r;
    std::optional<double> sweep_step;
    unsigned sweep_threads = default_threads();
    auto* swp = app.add_subcommand("sweep", "Phase map over the (a, r) grid");
    swp->add_option("--a", sweep_a, "a range lo hi")->expected(2);
    swp->add_option("--r", sweep_r, "r range lo hi")->expected(2);
    swp->add_option("--step", sweep_step, "Grid step")->check(CLI::PositiveNumber);
    swp->add_option("--threads", sweep_threads, "Worker threads (default $CML_ECONO_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    add_common(swp, sweep_opts);

    CommonOpts scan_opts;
    std::string scan_fix;
    std::vector<double> scan_range;
    std::optional<double> scan_step;
    unsigned scan_threads = default_threads();
    auto* scn = app.add_subcommand("scan", "1D line through the (a, r) plane");
    scn->add_option("--fix", scan_fix, "Pinned parameter, e.g. r=8 or a=0.6")->required();
    scn->add_option("--range", scan_range, "Free parameter range lo hi")->expected(2);
    scn->add_option("--step", scan_step, "Step of the free parameter")->check(CLI::PositiveNumber);
    scn->add_option("--threads", scan_threads, "Worker threads (default $CML_ECONO_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    add_common(scn, scan_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; every other parse failure is a usage error
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        namespace fs = std::filesystem;
        const std::int64_t started = now_ms();
        std::string seed_source;

        if (*sim) {
            auto cfg = build_config(sim_opts, seed_source);
            if (snapshot_only) check(cml_config_set_string(cfg.get(), "sample_mode", "snapshot"), "snapshot");
            if (init_const) check(cml_config_set_double(cfg.get(), "init_const", *init_const), "init const");
            check(cml_config_set_range(cfg.get(), "a_range", sim_a, sim_a), "a");
            check(cml_config_set_range(cfg.get(), "r_range", sim_r, sim_r), "r");
            check(cml_config_validate(cfg.get()), "config");
            cml_simulation* raw = nullptr;
            check(cml_simulate(cfg.get(), sim_a, sim_r, &raw), "simulate");
            SimPtr run(raw, &cml_simulation_free);
            const fs::path dir(sim_opts.out_dir);
            check(cml_simulation_write_outputs(run.get(), dir.string().c_str()), "write outputs");
            std::vector<std::string> files;
            for (std::size_t i = 0; i < cml_simulation_output_count(run.get()); ++i) {
                files.emplace_back(cml_simulation_output_path(run.get(), i));
            }
            write_manifest(cfg.get(), "simulate", seed_source, 1, started, files, dir);
            cml_cell cell{};
            check(cml_simulation_cell(run.get(), &cell), "summary");
            print_summary(cell);
            return 0;
        }

        if (*swp) {
            auto cfg = build_config(sweep_opts, seed_source);
            if (sweep_a.size() == 2) check(cml_config_set_range(cfg.get(), "a_range", sweep_a[0], sweep_a[1]), "a");
            if (sweep_r.size() == 2) check(cml_config_set_range(cfg.get(), "r_range", sweep_r[0], sweep_r[1]), "r");
            if (sweep_step) check(cml_config_set_double(cfg.get(), "grid_step", *sweep_step), "step");
            check(cml_config_validate(cfg.get()), "config");
            cml_table* raw = nullptr;
            check(cml_sweep(cfg.get(), sweep_threads, &raw), "sweep");
            TablePtr table(raw, &cml_table_free);
            const fs::path dir(sweep_opts.out_dir);
            fs::create_directories(dir);
            const std::string csv = (dir / "phase_map.csv").string();
            check(cml_table_write_csv(table.get(), csv.c_str()), "write csv");
            write_manifest(cfg.get(), "sweep", seed_source, sweep_threads, started, {csv}, dir);
            std::cout << "wrote " << cml_table_size(table.get()) << " cells to " << csv << '\n';
            return 0;
        }

        if (*scn) {
            const auto eq = scan_fix.find('=');
            const std::string axis = scan_fix.substr(0, eq);
            if (eq == std::string::npos || (axis != "a" && axis != "r")) {
                std::cerr << "error: --fix expects a=<value> or r=<value>\n";
                return 2;
            }
            double value = 0.0;
            try {
                std::size_t used = 0;
                value = std::stod(scan_fix.substr(eq + 1), &used);
                if (used != scan_fix.size() - eq - 1) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                std::cerr << "error: --fix value is not a number: " << scan_fix << '\n';
                return 2;
            }
            if (scan_range.size() == 2 && !(scan_range[1] > scan_range[0])) {
                std::cerr << "error: --range must satisfy lo < hi\n";
                return 2;
            }
            auto cfg = build_config(scan_opts, seed_source);
            const char* free_key = axis == "r" ? "a_range" : "r_range";
            if (scan_range.size() == 2) {
                check(cml_config_set_range(cfg.get(), free_key, scan_range[0], scan_range[1]), "range");
            }
            double lo = 0.0;
            double hi = 0.0;
            check(cml_config_get_range(cfg.get(), free_key, &lo, &hi), "range");
            if (!(hi > lo)) {
                std::cerr << "error: free parameter range has zero length\n";
                return 2;
            }
            check(cml_config_set_range(cfg.get(), axis == "r" ? "r_range" : "a_range", value, value), "fix");
            if (scan_step) check(cml_config_set_double(cfg.get(), "grid_step", *scan_step), "step");
            check(cml_config_validate(cfg.get()), "config");
            cml_table* raw = nullptr;
            check(cml_scan(cfg.get(), axis[0], value, scan_threads, &raw), "scan");
            TablePtr table(raw, &cml_table_free);
            const fs::path dir(scan_opts.out_dir);
            fs::create_directories(dir);
            const std::string csv = (dir / "scan.csv").string();
            check(cml_table_write_csv(table.get(), csv.c_str()), "write csv");
            write_manifest(cfg.get(), "scan", seed_source, scan_threads, started, {csv}, dir);
            std::cout << "wrote " << cml_table_size(table.get()) << " cells to " << csv << '\n';
            return 0;
        }
    } catch (const Failure& f) {
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
