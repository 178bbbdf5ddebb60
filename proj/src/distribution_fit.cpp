#include "cml/distribution_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cml/errors.hpp"

namespace cml {

std::uint64_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double Histogram::center(std::size_t k) const noexcept {
    if (scheme == BinScheme::logarithmic) return std::sqrt(edges[k] * edges[k + 1]);
    return 0.5 * (edges[k] + edges[k + 1]);
}

Histogram build_histogram(std::span<const double> samples, BinScheme scheme, std::size_t bins,
                          std::optional<Range> range) {
    if (samples.empty()) throw ConfigError("histogram of an empty sample");
    if (bins < 2) throw ConfigError("histogram needs at least 2 bins");

    Range rg;
    if (range) {
        rg = *range;
    } else if (scheme == BinScheme::linear) {
        rg = {0.0, *std::max_element(samples.begin(), samples.end())};
        if (rg.hi <= 0.0) rg.hi = 1.0;
    } else {
        double lo = INFINITY;
        double hi = 0.0;
        for (double v : samples) {
            if (v > 0.0) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (!std::isfinite(lo)) throw ConfigError("logarithmic histogram needs positive samples");
        if (hi <= lo) {
            lo *= 0.5;
            hi *= 2.0;
        }
        rg = {lo, hi};
    }
    if (!std::isfinite(rg.lo) || !std::isfinite(rg.hi) || !(rg.hi > rg.lo)) {
        throw ConfigError("histogram range must satisfy lo < hi");
    }
    if (scheme == BinScheme::logarithmic && !(rg.lo > 0.0)) {
        throw ConfigError("logarithmic histogram range requires lo > 0");
    }

    Histogram h;
    h.scheme = scheme;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    const double nb = static_cast<double>(bins);
    const double log_lo = std::log(rg.lo);
    const double log_span = scheme == BinScheme::logarithmic ? std::log(rg.hi) - log_lo : 0.0;
    for (std::size_t k = 0; k <= bins; ++k) {
        const double f = static_cast<double>(k) / nb;
        h.edges[k] = scheme == BinScheme::linear ? rg.lo + (rg.hi - rg.lo) * f : std::exp(log_lo + log_span * f);
    }
    h.edges.front() = rg.lo;
    h.edges.back() = rg.hi;

    for (double v : samples) {
        if (!(v >= rg.lo && v <= rg.hi) || (scheme == BinScheme::logarithmic && v <= 0.0)) {
            ++h.dropped;
            continue;
        }
        const double f = scheme == BinScheme::linear ? (v - rg.lo) / (rg.hi - rg.lo) : (std::log(v) - log_lo) / log_span;
        auto k = static_cast<std::size_t>(std::clamp(f * nb, 0.0, nb - 1.0));
        // The index guess can be off by one against the rounded edges.
        while (k > 0 && v < h.edges[k]) --k;
        while (k + 1 < bins && v >= h.edges[k + 1]) ++k;
        ++h.counts[k];
    }

    const double total = static_cast<double>(h.total());
    h.density.assign(bins, 0.0);
    if (total > 0.0) {
        for (std::size_t k = 0; k < bins; ++k) {
            h.density[k] = static_cast<double>(h.counts[k]) / (total * h.width(k));
        }
    }
    return h;
}

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ConfigError("least squares needs >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw UndefinedError("least squares with zero variance in x");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ConfigError("correlation needs >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw UndefinedError("correlation undefined for zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::uint64_t count_floor(const FitOptions& opts, std::uint64_t total) noexcept {
    const double rel = std::ceil(opts.min_count_fraction * static_cast<double>(total));
    return std::max<std::uint64_t>({opts.min_count, 1, static_cast<std::uint64_t>(std::max(rel, 0.0))});
}

namespace {

FitResult fit_linearized(const Histogram& h, const FitOptions& opts, Family family) {
    const bool log_x = family == Family::pareto;
    std::vector<double> xs;
    std::vector<double> ys;
    const std::uint64_t floor = count_floor(opts, h.total());
    for (std::size_t k = 0; k < h.bins(); ++k) {
        if (h.counts[k] < floor) continue;
        const double c = h.center(k);
        if (opts.fit_range && (c < opts.fit_range->lo || c > opts.fit_range->hi)) continue;
        if (log_x && !(c > 0.0)) continue;
        xs.push_back(log_x ? std::log(c) : c);
        ys.push_back(std::log(h.density[k]));
    }
    const std::size_t needed = std::max<std::size_t>(opts.min_points, 2);
    if (xs.size() < needed) {
        throw InsufficientDataError("only " + std::to_string(xs.size()) + " usable bins, need " +
                                    std::to_string(needed));
    }
    const LineFit line = least_squares(xs, ys);
    FitResult out;
    out.family = family;
    out.exponent = -line.slope;
    out.intercept = line.intercept;
    out.beta = pearson(xs, ys);
    out.points_used = xs.size();
    out.accepted = std::fabs(out.beta) > opts.beta_threshold && out.points_used >= opts.min_points;
    return out;
}

}  // namespace

FitResult fit_semilog(const Histogram& h, const FitOptions& opts) {
    return fit_linearized(h, opts, Family::boltzmann_gibbs);
}

FitResult fit_loglog(const Histogram& h, const FitOptions& opts) { return fit_linearized(h, opts, Family::pareto); }

Classification classify(const std::optional<FitResult>& bg, const std::optional<FitResult>& pareto) {
    const bool b = bg && bg->accepted;
    const bool p = pareto && pareto->accepted;
    if (b && p) return Classification::both;
    if (b) return Classification::boltzmann_gibbs;
    if (p) return Classification::pareto;
    return Classification::neither;
}

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::boltzmann_gibbs: return "boltzmann_gibbs";
        case Classification::pareto: return "pareto";
        case Classification::both: return "both";
        case Classification::neither: return "neither";
    }
    return "neither";
}

std::string_view to_string(Family f) noexcept {
    return f == Family::pareto ? "pareto" : "boltzmann_gibbs";
}

std::string_view to_string(BinScheme s) noexcept {
    return s == BinScheme::logarithmic ? "logarithmic" : "linear";
}

}  // namespace cml
