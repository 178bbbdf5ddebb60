#include "cml/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "cml/errors.hpp"
#include "cml/rng.hpp"

namespace cml {

namespace {

void check_range(const Range& r, const char* name, bool allow_negative) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo) {
        throw ConfigError(std::string(name) + " range must satisfy lo <= hi");
    }
    if (!allow_negative && r.lo < 0.0) throw ConfigError(std::string(name) + " range must be nonnegative");
}

double snap(double v) noexcept { return std::round(v * 1e9) / 1e9; }

}  // namespace

void SweepConfig::validate() const {
    check_range(a_range, "a", false);
    check_range(r_range, "r", false);
    if (!(r_range.lo > 0.0)) throw ConfigError("r must be > 0");
    if (!(grid_step > 0.0) || !std::isfinite(grid_step)) throw ConfigError("grid step must be > 0");
    if (n < 3) throw ConfigError("lattice size n must be >= 3");
    if (window < 1) throw ConfigError("measurement window must be >= 1");
    if (realizations < 1) throw ConfigError("realizations must be >= 1");
    if (init_const) {
        if (!(*init_const >= 0.0) || !std::isfinite(*init_const)) throw ConfigError("init constant must be >= 0");
    } else if (!(init_lo >= 0.0) || !(init_hi > init_lo) || !std::isfinite(init_hi)) {
        throw ConfigError("initial range must satisfy 0 <= lo < hi");
    }
    if (bg_bins < 2 || pareto_bins < 2) throw ConfigError("histograms need at least 2 bins");
    if (!(beta_threshold >= 0.0 && beta_threshold <= 1.0)) throw ConfigError("beta threshold must lie in [0, 1]");
    if (min_points < 2) throw ConfigError("min points must be >= 2");
    if (!(min_count_fraction >= 0.0 && min_count_fraction < 1.0)) {
        throw ConfigError("min count fraction must lie in [0, 1)");
    }
}

FitOptions SweepConfig::bg_fit_options() const {
    return FitOptions{beta_threshold, min_points, min_count, min_count_fraction, bg_fit_range};
}

FitOptions SweepConfig::pareto_fit_options() const {
    return FitOptions{beta_threshold, min_points, min_count, min_count_fraction, pareto_fit_range};
}

void apply_profile(SweepConfig& cfg, Profile p) {
    switch (p) {
        case Profile::full:
            cfg.n = 100000;
            cfg.transient = 10000;
            cfg.window = 100;
            cfg.grid_step = 0.02;
            break;
        case Profile::desk:
            cfg.n = 10000;
            cfg.transient = 2000;
            cfg.window = 100;
            cfg.grid_step = 0.1;
            break;
    }
}

void apply_preset(SweepConfig& cfg, Preset p) {
    switch (p) {
        case Preset::fig2:
        case Preset::fig3:
            cfg.sample_mode = SampleMode::pooled;
            cfg.realizations = 1;
            break;
        case Preset::fig4:
            cfg.sample_mode = SampleMode::pooled;
            cfg.realizations = 100;
            break;
        case Preset::fig5:
            cfg.sample_mode = SampleMode::snapshot;
            cfg.realizations = 1;
            break;
    }
}

std::optional<Profile> parse_profile(std::string_view s) {
    if (s == "full") return Profile::full;
    if (s == "desk") return Profile::desk;
    return std::nullopt;
}

std::optional<Preset> parse_preset(std::string_view s) {
    if (s == "fig2") return Preset::fig2;
    if (s == "fig3") return Preset::fig3;
    if (s == "fig4") return Preset::fig4;
    if (s == "fig5") return Preset::fig5;
    return std::nullopt;
}

std::string_view to_string(SampleMode m) noexcept { return m == SampleMode::snapshot ? "snapshot" : "pooled"; }
std::string_view to_string(Profile p) noexcept { return p == Profile::desk ? "desk" : "full"; }

std::string_view to_string(Preset p) noexcept {
    switch (p) {
        case Preset::fig2: return "fig2";
        case Preset::fig3: return "fig3";
        case Preset::fig4: return "fig4";
        case Preset::fig5: return "fig5";
    }
    return "fig3";
}

std::int64_t parameter_key(double v) noexcept { return std::llround(v * 1e6); }

std::vector<double> grid_values(Range range, double step) {
    if (!(step > 0.0)) throw ConfigError("grid step must be > 0");
    if (range.hi < range.lo) throw ConfigError("range must satisfy lo <= hi");
    const auto count = static_cast<std::size_t>(std::floor((range.hi - range.lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(snap(range.lo + static_cast<double>(i) * step));
    return out;
}

std::uint64_t cell_seed(const SweepConfig& cfg, double a, double r, std::uint64_t realization) noexcept {
    return derive_seed(cfg.master_seed, parameter_key(a), parameter_key(r), realization);
}

CellRun run_cell_detailed(double a, double r, const SweepConfig& cfg, std::uint64_t realization) {
    cfg.validate();
    CellRun run;
    run.summary.a = a;
    run.summary.r = r;
    run.seed = cell_seed(cfg, a, r, realization);

    LatticeState init = cfg.init_const ? init_constant(cfg.n, *cfg.init_const)
                                       : init_state(cfg.n, InitSpec{cfg.init_lo, cfg.init_hi, run.seed});
    Trajectory traj(std::move(init), ModelParams(cfg.n, r, a));

    auto mark_divergent = [&run] {
        run.summary.divergent = true;
        run.summary.classification = Classification::neither;
        return run;
    };

    if (!traj.advance(cfg.transient)) return mark_divergent();

    const bool pooled = cfg.sample_mode == SampleMode::pooled;
    std::vector<double> sample;
    sample.reserve(pooled ? cfg.n * cfg.window : cfg.n);
    bool gini_defined = true;

    for (std::uint64_t w = 0; w < cfg.window; ++w) {
        if (w > 0 && !traj.advance()) return mark_divergent();
        const LatticeState& s = traj.state();
        run.times.push_back(s.t);
        run.mean_field.values.push_back(mean_field(s));
        run.sigma.values.push_back(sigma(s));
        double g = std::nan("");
        try {
            g = gini(s);
        } catch (const UndefinedError&) {
            gini_defined = false;
        }
        run.gini.values.push_back(g);
        if (pooled || w == 0) sample.insert(sample.end(), s.x.begin(), s.x.end());
    }

    CellSummary& out = run.summary;
    out.h_snapshot = run.mean_field.values.front();
    out.h_mean = time_average(run.mean_field);
    out.sigma_mean = time_average(run.sigma);
    if (!std::isnan(run.gini.values.front())) out.gini_snapshot = run.gini.values.front();
    if (gini_defined) out.gini_mean = time_average(run.gini);

    run.bg_histogram = build_histogram(sample, BinScheme::linear, cfg.bg_bins);
    try {
        out.bg = fit_semilog(*run.bg_histogram, cfg.bg_fit_options());
    } catch (const InsufficientDataError&) {
    } catch (const UndefinedError&) {
    }

    try {
        run.pareto_histogram = build_histogram(sample, cfg.pareto_scheme, cfg.pareto_bins);
        out.pareto = fit_loglog(*run.pareto_histogram, cfg.pareto_fit_options());
    } catch (const InsufficientDataError&) {
    } catch (const UndefinedError&) {
    } catch (const ConfigError&) {
        // log bins over an all-zero sample
    }

    out.classification = classify(out.bg, out.pareto);
    if (out.bg && out.bg->accepted && out.bg->exponent > 0.0) out.temperature = 1.0 / out.bg->exponent;
    return run;
}

CellSummary run_cell(double a, double r, const SweepConfig& cfg, std::uint64_t realization) {
    return run_cell_detailed(a, r, cfg, realization).summary;
}

namespace {

struct Mean {
    double sum = 0.0;
    std::size_t count = 0;

    void add(const std::optional<double>& v) {
        if (v) {
            sum += *v;
            ++count;
        }
    }
    std::optional<double> get() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

std::optional<FitResult> merge_fits(const std::vector<CellSummary>& runs, bool pareto, const FitOptions& opts) {
    Mean exponent;
    Mean intercept;
    Mean beta;
    std::size_t points = SIZE_MAX;
    for (const auto& c : runs) {
        const auto& f = pareto ? c.pareto : c.bg;
        if (!f) continue;
        exponent.add(f->exponent);
        intercept.add(f->intercept);
        beta.add(f->beta);
        points = std::min(points, f->points_used);
    }
    if (beta.count == 0) return std::nullopt;
    FitResult out;
    out.family = pareto ? Family::pareto : Family::boltzmann_gibbs;
    out.exponent = *exponent.get();
    out.intercept = *intercept.get();
    out.beta = *beta.get();
    out.points_used = points;
    out.accepted = std::fabs(out.beta) > opts.beta_threshold && out.points_used >= opts.min_points;
    return out;
}

}  // namespace

CellSummary merge_realizations(double a, double r, const std::vector<CellSummary>& runs, const SweepConfig& cfg) {
    std::vector<CellSummary> ok;
    for (const auto& c : runs) {
        if (!c.divergent) ok.push_back(c);
    }
    CellSummary out;
    out.a = a;
    out.r = r;
    if (ok.empty()) {
        out.divergent = true;
        return out;
    }
    if (ok.size() == 1) {
        out = ok.front();
        out.a = a;
        out.r = r;
        return out;
    }
    Mean hs, hm, sm, gs, gm;
    for (const auto& c : ok) {
        hs.add(c.h_snapshot);
        hm.add(c.h_mean);
        sm.add(c.sigma_mean);
        gs.add(c.gini_snapshot);
        gm.add(c.gini_mean);
    }
    out.h_snapshot = hs.get();
    out.h_mean = hm.get();
    out.sigma_mean = sm.get();
    out.gini_snapshot = gs.get();
    out.gini_mean = gm.get();
    out.bg = merge_fits(ok, false, cfg.bg_fit_options());
    out.pareto = merge_fits(ok, true, cfg.pareto_fit_options());
    out.classification = classify(out.bg, out.pareto);
    if (out.bg && out.bg->accepted && out.bg->exponent > 0.0) out.temperature = 1.0 / out.bg->exponent;
    return out;
}

CellSummary ensemble_cell(double a, double r, const SweepConfig& cfg) {
    cfg.validate();
    std::vector<CellSummary> runs;
    runs.reserve(cfg.realizations);
    for (std::uint64_t k = 0; k < cfg.realizations; ++k) runs.push_back(run_cell(a, r, cfg, k));
    return merge_realizations(a, r, runs, cfg);
}

namespace {

std::vector<CellSummary> run_grid(const std::vector<double>& as, const std::vector<double>& rs, const SweepConfig& cfg,
                                  unsigned threads) {
    cfg.validate();
    const std::size_t cells = as.size() * rs.size();
    const std::size_t reals = cfg.realizations;
    const std::size_t tasks = cells * reals;
    std::vector<CellSummary> per_task(tasks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            const std::size_t cell = t / reals;
            const double r = rs[cell / as.size()];
            const double a = as[cell % as.size()];
            try {
                per_task[t] = run_cell(a, r, cfg, t % reals);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks);
            }
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<CellSummary> out;
    out.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const double r = rs[c / as.size()];
        const double a = as[c % as.size()];
        std::vector<CellSummary> runs(per_task.begin() + static_cast<std::ptrdiff_t>(c * reals),
                                      per_task.begin() + static_cast<std::ptrdiff_t>((c + 1) * reals));
        out.push_back(merge_realizations(a, r, runs, cfg));
    }
    return out;
}

}  // namespace

std::vector<CellSummary> sweep(const SweepConfig& cfg, unsigned threads) {
    cfg.validate();
    return run_grid(grid_values(cfg.a_range, cfg.grid_step), grid_values(cfg.r_range, cfg.grid_step), cfg, threads);
}

std::vector<CellSummary> scan_line(Axis fixed, double value, const SweepConfig& cfg, unsigned threads) {
    cfg.validate();
    const std::vector<double> pinned{snap(value)};
    if (fixed == Axis::r) return run_grid(grid_values(cfg.a_range, cfg.grid_step), pinned, cfg, threads);
    return run_grid(pinned, grid_values(cfg.r_range, cfg.grid_step), cfg, threads);
}

}  // namespace cml
