#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cml/lattice.hpp"

namespace cml {

// Observables over agent wealths. The span overloads accept any length >= 1
// (the formulas themselves do not need the ring constraint); the LatticeState
// overloads additionally refuse divergent states.

double mean_field(std::span<const double> x);
double sigma(std::span<const double> x);

/// Sorted-rank evaluation, O(N log N).
double gini(std::span<const double> x);

/// Literal pairwise double sum, O(N^2). Test oracle.
double gini_bruteforce(std::span<const double> x);

double mean_field(const LatticeState& s);
double sigma(const LatticeState& s);
double gini(const LatticeState& s);
double gini_bruteforce(const LatticeState& s);

enum class Observable { mean_field, sigma, gini };

std::string_view to_string(Observable o) noexcept;

struct ObservableSeries {
    Observable label = Observable::mean_field;
    std::vector<double> values;
};

double time_average(const ObservableSeries& series);
double time_average(std::span<const double> values);

}  // namespace cml
