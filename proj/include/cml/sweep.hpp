#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cml/distribution_fit.hpp"
#include "cml/lattice.hpp"
#include "cml/measures.hpp"

namespace cml {

/// Which states feed the fitted wealth distribution.
enum class SampleMode {
    /// Every state of the measurement window, pooled into one sample.
    pooled,
    /// Only the first measured state (t = transient).
    snapshot,
};

struct SweepConfig {
    Range a_range{0.0, 2.0};
    Range r_range{1.0, 10.0};
    double grid_step = 0.02;
    std::size_t n = 100000;
    std::uint64_t transient = 10000;
    std::uint64_t window = 100;
    std::uint64_t realizations = 1;
    std::uint64_t master_seed = 0;
    double init_lo = 1.0;
    double init_hi = 100.0;
    /// Replaces the random initial profile with a constant one.
    std::optional<double> init_const;

    SampleMode sample_mode = SampleMode::pooled;
    std::size_t bg_bins = 44;
    BinScheme pareto_scheme = BinScheme::linear;
    std::size_t pareto_bins = 44;
    double beta_threshold = 0.96;
    std::size_t min_points = 5;
    std::uint64_t min_count = 5;
    double min_count_fraction = 5e-5;
    std::optional<Range> bg_fit_range;
    std::optional<Range> pareto_fit_range;

    void validate() const;
    FitOptions bg_fit_options() const;
    FitOptions pareto_fit_options() const;
};

enum class Profile { full, desk };
enum class Preset { fig2, fig3, fig4, fig5 };

void apply_profile(SweepConfig& cfg, Profile p);
void apply_preset(SweepConfig& cfg, Preset p);
std::optional<Profile> parse_profile(std::string_view s);
std::optional<Preset> parse_preset(std::string_view s);
std::string_view to_string(SampleMode m) noexcept;
std::string_view to_string(Profile p) noexcept;
std::string_view to_string(Preset p) noexcept;

struct CellSummary {
    double a = 0.0;
    double r = 0.0;
    bool divergent = false;
    std::optional<double> h_snapshot;
    std::optional<double> h_mean;
    std::optional<double> sigma_mean;
    std::optional<double> gini_snapshot;
    std::optional<double> gini_mean;
    std::optional<FitResult> bg;
    std::optional<FitResult> pareto;
    Classification classification = Classification::neither;
    /// 1/mu, present only for accepted Boltzmann-Gibbs fits with mu > 0.
    std::optional<double> temperature;
};

/// Everything one trajectory produced, for single-cell inspection.
struct CellRun {
    CellSummary summary;
    std::uint64_t seed = 0;
    std::optional<Histogram> bg_histogram;
    std::optional<Histogram> pareto_histogram;
    /// Time index of each series entry.
    std::vector<std::uint64_t> times;
    ObservableSeries mean_field{Observable::mean_field, {}};
    ObservableSeries sigma{Observable::sigma, {}};
    /// NaN where the Gini coefficient is undefined (zero total wealth).
    ObservableSeries gini{Observable::gini, {}};
};

/// Integer key of a parameter value on a 1e-6 lattice; seeds derive from it.
std::int64_t parameter_key(double v) noexcept;

/// Grid coordinates lo, lo+step, ..., <= hi (snapped to 1e-9).
std::vector<double> grid_values(Range range, double step);

std::uint64_t cell_seed(const SweepConfig& cfg, double a, double r, std::uint64_t realization) noexcept;

CellRun run_cell_detailed(double a, double r, const SweepConfig& cfg, std::uint64_t realization = 0);
CellSummary run_cell(double a, double r, const SweepConfig& cfg, std::uint64_t realization = 0);

/// Averages cfg.realizations independent runs over the non-divergent ones.
CellSummary ensemble_cell(double a, double r, const SweepConfig& cfg);

/// Combines per-realization summaries. Accepted flags are re-derived from the
/// mean beta; points_used is the minimum over contributing realizations.
CellSummary merge_realizations(double a, double r, const std::vector<CellSummary>& runs, const SweepConfig& cfg);

/// Every grid cell, sorted by (r, a). Output does not depend on `threads`.
std::vector<CellSummary> sweep(const SweepConfig& cfg, unsigned threads = 1);

enum class Axis { a, r };

/// 1D sweep holding `fixed` at `value`, free parameter over its cfg range.
std::vector<CellSummary> scan_line(Axis fixed, double value, const SweepConfig& cfg, unsigned threads = 1);

}  // namespace cml
