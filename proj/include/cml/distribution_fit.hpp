#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cml {

enum class BinScheme { linear, logarithmic };

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Normalized empirical density of a sample.
struct Histogram {
    BinScheme scheme = BinScheme::linear;
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;
    /// Samples left out: outside the range, or nonpositive for log bins.
    std::uint64_t dropped = 0;

    std::size_t bins() const noexcept { return counts.size(); }
    std::uint64_t total() const noexcept;
    double width(std::size_t k) const noexcept { return edges[k + 1] - edges[k]; }
    /// Arithmetic midpoint for linear bins, geometric midpoint for log bins.
    double center(std::size_t k) const noexcept;
};

/// Bins `samples` into `bins` equal-width (linear) or equal-log-width bins.
///
/// Default ranges are [0, max] for linear bins and [smallest positive sample,
/// max] for logarithmic bins. The right edge is closed. Density integrates to
/// one over the retained samples.
Histogram build_histogram(std::span<const double> samples, BinScheme scheme, std::size_t bins,
                          std::optional<Range> range = std::nullopt);

enum class Family { boltzmann_gibbs, pareto };

struct FitOptions {
    double beta_threshold = 0.96;
    std::size_t min_points = 5;
    /// Bins with fewer counts are not fitted (ln 0 undefined, Poisson noise).
    std::uint64_t min_count = 5;
    /// Raises the count floor to this fraction of the binned samples.
    double min_count_fraction = 0.0;
    /// Only bins whose center lies in this range are fitted.
    std::optional<Range> fit_range;
};

/// Effective per-bin count floor for a histogram holding `total` samples.
std::uint64_t count_floor(const FitOptions& opts, std::uint64_t total) noexcept;

struct FitResult {
    Family family = Family::boltzmann_gibbs;
    /// mu for Boltzmann-Gibbs, alpha for Pareto; minus the fitted slope.
    double exponent = 0.0;
    /// Intercept of the fitted line in ln-density.
    double intercept = 0.0;
    /// Signed Pearson correlation of the linearized points.
    double beta = 0.0;
    bool accepted = false;
    std::size_t points_used = 0;
};

/// Least squares of ln(density) against x: P(x) ~ exp(-mu x).
FitResult fit_semilog(const Histogram& h, const FitOptions& opts = {});

/// Least squares of ln(density) against ln(x): P(x) ~ x^-alpha.
FitResult fit_loglog(const Histogram& h, const FitOptions& opts = {});

enum class Classification { boltzmann_gibbs, pareto, both, neither };

Classification classify(const std::optional<FitResult>& bg, const std::optional<FitResult>& pareto);

std::string_view to_string(Classification c) noexcept;
std::string_view to_string(Family f) noexcept;
std::string_view to_string(BinScheme s) noexcept;

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
LineFit least_squares(std::span<const double> xs, std::span<const double> ys);

/// Product-moment correlation. Throws UndefinedError on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace cml
