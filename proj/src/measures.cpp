#include "cml/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cml/errors.hpp"

namespace cml {

namespace {

void require_nonempty(std::span<const double> x) {
    if (x.empty()) throw ConfigError("observable of an empty state");
}

const LatticeState& require_finite(const LatticeState& s) {
    if (s.divergent) throw DivergentStateError("state is divergent; excluded from measurement");
    return s;
}

double gini_denominator(std::span<const double> x) {
    const double h = mean_field(x);
    if (!(h > 0.0)) throw UndefinedError("Gini coefficient undefined for zero total wealth");
    const double n = static_cast<double>(x.size());
    return n * n * h;
}

}  // namespace

double mean_field(std::span<const double> x) {
    require_nonempty(x);
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sigma(std::span<const double> x) {
    const double h = mean_field(x);
    double ss = 0.0;
    for (double v : x) ss += (v - h) * (v - h);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

double gini(std::span<const double> x) {
    require_nonempty(x);
    const double denom = gini_denominator(x);
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        // rank i = k + 1
        acc += (2.0 * static_cast<double>(k + 1) - n - 1.0) * sorted[k];
    }
    return std::max(0.0, acc / denom);
}

double gini_bruteforce(std::span<const double> x) {
    require_nonempty(x);
    const double denom = gini_denominator(x);
    double acc = 0.0;
    for (double xi : x) {
        for (double xj : x) acc += std::fabs(xi - xj);
    }
    return acc / (2.0 * denom);
}

double mean_field(const LatticeState& s) { return mean_field(std::span<const double>(require_finite(s).x)); }
double sigma(const LatticeState& s) { return sigma(std::span<const double>(require_finite(s).x)); }
double gini(const LatticeState& s) { return gini(std::span<const double>(require_finite(s).x)); }
double gini_bruteforce(const LatticeState& s) {
    return gini_bruteforce(std::span<const double>(require_finite(s).x));
}

std::string_view to_string(Observable o) noexcept {
    switch (o) {
        case Observable::mean_field: return "mean_field";
        case Observable::sigma: return "sigma";
        case Observable::gini: return "gini";
    }
    return "unknown";
}

double time_average(std::span<const double> values) {
    if (values.empty()) throw ConfigError("time average of an empty series");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double time_average(const ObservableSeries& series) { return time_average(std::span<const double>(series.values)); }

}  // namespace cml
