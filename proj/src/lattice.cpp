#include "cml/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cml/errors.hpp"
#include "cml/rng.hpp"

namespace cml {

namespace {

void check_values(const std::vector<double>& v, std::size_t n, const char* name, bool strict) {
    if (v.size() != 1 && v.size() != n) {
        throw ConfigError(std::string(name) + " must be a scalar or have length n=" + std::to_string(n));
    }
    for (double x : v) {
        const bool ok = std::isfinite(x) && (strict ? x > 0.0 : x >= 0.0);
        if (!ok) {
            throw ConfigError(std::string(name) + (strict ? " must be > 0" : " must be >= 0"));
        }
    }
}

inline double update(double x, double psi, double r, double a) noexcept {
    return r * x * std::exp(-std::fabs(x - a * psi));
}

}  // namespace

ModelParams::ModelParams(std::size_t n, double r, double a) : ModelParams(n, std::vector{r}, std::vector{a}) {}

ModelParams::ModelParams(std::size_t n, std::vector<double> r, std::vector<double> a)
    : n_(n), r_(std::move(r)), a_(std::move(a)) {
    validate();
}

void ModelParams::validate() const {
    if (n_ < 3) {
        throw ConfigError("lattice size n must be >= 3, got " + std::to_string(n_));
    }
    check_values(r_, n_, "r", true);
    check_values(a_, n_, "a", false);
}

LatticeState init_state(std::size_t n, const InitSpec& spec) {
    if (n < 3) {
        throw ConfigError("lattice size n must be >= 3, got " + std::to_string(n));
    }
    if (!(spec.lo >= 0.0) || !(spec.hi > spec.lo) || !std::isfinite(spec.hi)) {
        throw ConfigError("initial range must satisfy 0 <= lo < hi");
    }
    Engine eng(spec.seed);
    LatticeState s;
    s.x.resize(n);
    const double width = spec.hi - spec.lo;
    for (auto& v : s.x) {
        v = spec.lo + width * uniform01(eng);
        // lo + width*u can round up to hi for u close to 1.
        if (v >= spec.hi) v = std::nextafter(spec.hi, spec.lo);
    }
    return s;
}

LatticeState init_constant(std::size_t n, double c) {
    if (n < 3) {
        throw ConfigError("lattice size n must be >= 3, got " + std::to_string(n));
    }
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw ConfigError("constant initial wealth must be finite and >= 0");
    }
    LatticeState s;
    s.x.assign(n, c);
    return s;
}

void step_into(const LatticeState& in, const ModelParams& params, LatticeState& out) {
    const std::size_t n = in.x.size();
    if (n != params.n()) {
        throw ConfigError("state length " + std::to_string(n) + " does not match n=" + std::to_string(params.n()));
    }
    out.x.resize(n);
    const double* x = in.x.data();
    double* y = out.x.data();

    if (params.homogeneous()) {
        const double r = params.r(0);
        const double a = params.a(0);
        y[0] = update(x[0], 0.5 * (x[n - 1] + x[1]), r, a);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            y[i] = update(x[i], 0.5 * (x[i - 1] + x[i + 1]), r, a);
        }
        y[n - 1] = update(x[n - 1], 0.5 * (x[n - 2] + x[0]), r, a);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = update(x[i], local_field(in.x, i), params.r(i), params.a(i));
        }
    }

    bool bad = in.divergent;
    for (std::size_t i = 0; i < n; ++i) {
        // !(y <= T) also catches NaN.
        bad |= !(y[i] <= kDivergenceThreshold);
    }
    out.t = in.t + 1;
    out.divergent = bad;
}

LatticeState step(const LatticeState& state, const ModelParams& params) {
    LatticeState out;
    step_into(state, params, out);
    return out;
}

LatticeState run(LatticeState state, const ModelParams& params, std::uint64_t steps) {
    if (steps == 0 || state.divergent) return state;
    Trajectory traj(std::move(state), params);
    traj.advance(steps);
    return traj.state();
}

Trajectory::Trajectory(LatticeState initial, ModelParams params)
    : params_(std::move(params)), current_(std::move(initial)) {
    if (current_.x.size() != params_.n()) {
        throw ConfigError("state length does not match n");
    }
    scratch_.x.resize(current_.x.size());
}

bool Trajectory::advance() {
    if (current_.divergent) return false;
    step_into(current_, params_, scratch_);
    std::swap(current_, scratch_);
    return !current_.divergent;
}

bool Trajectory::advance(std::uint64_t steps) {
    for (std::uint64_t k = 0; k < steps; ++k) {
        if (!advance()) return false;
    }
    return !current_.divergent;
}

}  // namespace cml
