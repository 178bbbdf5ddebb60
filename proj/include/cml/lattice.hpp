#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cml {

/// Any site above this (or non-finite) marks the trajectory divergent.
inline constexpr double kDivergenceThreshold = 1e12;

/// Growth capacity r and environmental pressure a on a ring of n agents.
///
/// r and a hold either one value (homogeneous system) or exactly n values
/// (one per agent).
class ModelParams {
public:
    ModelParams(std::size_t n, double r, double a);
    ModelParams(std::size_t n, std::vector<double> r, std::vector<double> a);

    std::size_t n() const noexcept { return n_; }
    bool homogeneous() const noexcept { return r_.size() == 1 && a_.size() == 1; }
    double r(std::size_t i) const noexcept { return r_.size() == 1 ? r_[0] : r_[i]; }
    double a(std::size_t i) const noexcept { return a_.size() == 1 ? a_[0] : a_[i]; }

private:
    void validate() const;

    std::size_t n_;
    std::vector<double> r_;
    std::vector<double> a_;
};

struct InitSpec {
    double lo = 1.0;
    double hi = 100.0;
    std::uint64_t seed = 0;
};

struct LatticeState {
    std::vector<double> x;
    std::uint64_t t = 0;
    bool divergent = false;

    std::size_t size() const noexcept { return x.size(); }
};

/// i.i.d. uniform wealths on [lo, hi) at t = 0.
LatticeState init_state(std::size_t n, const InitSpec& spec);

/// Every agent starts with wealth c.
LatticeState init_constant(std::size_t n, double c);

/// Mean of the two ring neighbours of site i.
inline double local_field(std::span<const double> x, std::size_t i) noexcept {
    const std::size_t n = x.size();
    const std::size_t left = i == 0 ? n - 1 : i - 1;
    const std::size_t right = i + 1 == n ? 0 : i + 1;
    return 0.5 * (x[left] + x[right]);
}

inline double local_field(const LatticeState& s, std::size_t i) noexcept {
    return local_field(std::span<const double>(s.x), i);
}

/// Synchronous update of every site from `in` into `out` (out is resized).
/// `in` and `out` must be distinct objects.
void step_into(const LatticeState& in, const ModelParams& params, LatticeState& out);

LatticeState step(const LatticeState& state, const ModelParams& params);

/// Applies `steps` updates, stopping early once the state is divergent.
LatticeState run(LatticeState state, const ModelParams& params, std::uint64_t steps);

/// Reusable double buffer for long trajectories.
class Trajectory {
public:
    Trajectory(LatticeState initial, ModelParams params);

    const LatticeState& state() const noexcept { return current_; }
    const ModelParams& params() const noexcept { return params_; }

    /// Returns false once the trajectory has diverged.
    bool advance();
    bool advance(std::uint64_t steps);

private:
    ModelParams params_;
    LatticeState current_;
    LatticeState scratch_;
};

}  // namespace cml
