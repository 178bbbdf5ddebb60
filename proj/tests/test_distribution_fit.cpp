#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "cml/distribution_fit.hpp"
#include "cml/errors.hpp"
#include "doctest.h"

using cml::BinScheme;
using cml::Histogram;

namespace {

// Histogram whose density is f evaluated exactly at each bin center.
Histogram synthetic(BinScheme scheme, double lo, double hi, std::size_t bins, const std::function<double(double)>& f) {
    Histogram h;
    h.scheme = scheme;
    for (std::size_t k = 0; k <= bins; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(bins);
        h.edges.push_back(scheme == BinScheme::linear ? lo + (hi - lo) * t : lo * std::pow(hi / lo, t));
    }
    h.counts.assign(bins, 100);
    for (std::size_t k = 0; k < bins; ++k) h.density.push_back(f(h.center(k)));
    return h;
}

double integral(const Histogram& h) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.bins(); ++k) s += h.density[k] * h.width(k);
    return s;
}

cml::FitResult fit_with_beta(double beta) {
    cml::FitResult f;
    f.beta = beta;
    f.points_used = 10;
    f.accepted = std::fabs(beta) > 0.96;
    return f;
}

}  // namespace

TEST_CASE("histogram shape and normalization") {
    std::mt19937_64 eng(11);
    std::lognormal_distribution<double> ln(0.0, 1.5);
    std::vector<double> xs(20000);
    for (double& v : xs) v = ln(eng);
    for (auto scheme : {BinScheme::linear, BinScheme::logarithmic}) {
        for (std::size_t bins : {2u, 17u, 60u}) {
            const auto h = cml::build_histogram(xs, scheme, bins);
            CHECK(h.edges.size() == bins + 1);
            CHECK(h.counts.size() == bins);
            CHECK(h.density.size() == bins);
            CHECK(h.total() + h.dropped == xs.size());
            CHECK(h.dropped == 0);
            CHECK(std::fabs(integral(h) - 1.0) <= 1e-9);
            for (std::size_t k = 0; k < bins; ++k) CHECK(h.edges[k] < h.edges[k + 1]);
        }
    }
}

TEST_CASE("constant sample lands in one bin") {
    const std::vector<double> xs(50, 4.2);
    const auto h = cml::build_histogram(xs, BinScheme::linear, 10);
    std::size_t nonzero = 0;
    for (auto c : h.counts) nonzero += c > 0;
    CHECK(nonzero == 1);
    CHECK(h.counts.back() == 50);
    CHECK(std::fabs(integral(h) - 1.0) <= 1e-9);
}

TEST_CASE("decade placement on log bins") {
    const std::vector<double> xs{0.5, 5.0, 50.0};
    const auto h = cml::build_histogram(xs, BinScheme::logarithmic, 3, cml::Range{0.1, 100.0});
    REQUIRE(h.bins() == 3);
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[1] == 1);
    CHECK(h.counts[2] == 1);
    CHECK(h.center(1) == doctest::Approx(std::sqrt(10.0)));

    const std::vector<double> with_out{0.05, 0.5, 200.0};
    const auto d = cml::build_histogram(with_out, BinScheme::logarithmic, 3, cml::Range{0.1, 100.0});
    CHECK(d.total() == 1);
    CHECK(d.dropped == 2);
}

TEST_CASE("exponential sample matches its density") {
    std::mt19937_64 eng(2024);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> xs(1000000);
    for (double& v : xs) v = e(eng);
    const auto h = cml::build_histogram(xs, BinScheme::linear, 50);
    int checked = 0;
    for (std::size_t k = 0; k < h.bins(); ++k) {
        if (h.counts[k] <= 1000) continue;
        // bin average of e^-x, within four Poisson standard deviations
        const double exact = (std::exp(-h.edges[k]) - std::exp(-h.edges[k + 1])) / h.width(k);
        CHECK(std::fabs(h.density[k] / exact - 1.0) < 4.0 / std::sqrt(static_cast<double>(h.counts[k])));
        CHECK(std::fabs(h.density[k] / std::exp(-h.center(k)) - 1.0) < 0.05);
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("exact recovery on synthetic densities") {
    const auto e1 = synthetic(BinScheme::linear, 0.0, 10.0, 40, [](double x) { return std::exp(-x); });
    const auto f1 = cml::fit_semilog(e1);
    CHECK(f1.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f1.beta == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f1.accepted);
    CHECK(f1.points_used == 40);
    CHECK(f1.family == cml::Family::boltzmann_gibbs);

    const auto e2 = synthetic(BinScheme::linear, 0.0, 5.0, 30, [](double x) { return 7.0 * std::exp(-2.0 * x); });
    const auto f2 = cml::fit_semilog(e2);
    CHECK(f2.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f2.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));
    CHECK(f2.beta == doctest::Approx(-1.0).epsilon(1e-12));

    for (auto scheme : {BinScheme::logarithmic, BinScheme::linear}) {
        const auto p = synthetic(scheme, 1.0, 1000.0, 40, [](double x) { return std::pow(x, -3.0); });
        const auto fp = cml::fit_loglog(p);
        CHECK(fp.exponent == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(fp.beta == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(fp.accepted);
        CHECK(fp.family == cml::Family::pareto);
    }
}

TEST_CASE("fits are invariant under density rescaling") {
    std::mt19937_64 eng(3);
    std::gamma_distribution<double> g(2.0, 1.0);
    std::vector<double> xs(50000);
    for (double& v : xs) v = g(eng);
    const auto h = cml::build_histogram(xs, BinScheme::linear, 40);
    const auto bg = cml::fit_semilog(h);
    const auto pa = cml::fit_loglog(h);
    for (double c : {1e-4, 3.0, 1e6}) {
        auto s = h;
        for (double& d : s.density) d *= c;
        const auto bg2 = cml::fit_semilog(s);
        const auto pa2 = cml::fit_loglog(s);
        CHECK(bg2.exponent == doctest::Approx(bg.exponent).epsilon(1e-10));
        CHECK(bg2.beta == doctest::Approx(bg.beta).epsilon(1e-10));
        CHECK(bg2.intercept == doctest::Approx(bg.intercept + std::log(c)).epsilon(1e-10));
        CHECK(pa2.exponent == doctest::Approx(pa.exponent).epsilon(1e-10));
        CHECK(pa2.beta == doctest::Approx(pa.beta).epsilon(1e-10));
    }
}

TEST_CASE("bin selection rules") {
    auto h = synthetic(BinScheme::linear, 0.0, 10.0, 10, [](double x) { return std::exp(-x); });
    h.counts = {100, 100, 100, 100, 100, 100, 4, 0, 100, 100};
    cml::FitOptions opts;
    CHECK(cml::fit_semilog(h, opts).points_used == 8);
    opts.min_count = 1;
    CHECK(cml::fit_semilog(h, opts).points_used == 9);
    opts.fit_range = cml::Range{2.0, 8.0};
    CHECK(cml::fit_semilog(h, opts).points_used == 5);
    opts.fit_range = cml::Range{2.0, 6.0};
    CHECK_THROWS_AS(cml::fit_semilog(h, opts), cml::InsufficientDataError);

    // the relative floor scales with the sample size
    cml::FitOptions rel;
    rel.min_count_fraction = 0.125;
    CHECK(cml::count_floor(rel, 1000) == 125);
    CHECK(cml::count_floor(rel, 16) == 5);
    CHECK(cml::count_floor(rel, 1001) == 126);
    // total 1200, floor 150
    h.counts = {300, 200, 150, 149, 100, 100, 50, 50, 50, 51};
    CHECK_THROWS_AS(cml::fit_semilog(h, rel), cml::InsufficientDataError);
    rel.min_points = 3;
    CHECK(cml::fit_semilog(h, rel).points_used == 3);
}

TEST_CASE("acceptance gate") {
    auto h = synthetic(BinScheme::linear, 0.0, 10.0, 6, [](double x) { return std::exp(-x); });
    cml::FitOptions opts;
    opts.min_points = 6;
    CHECK(cml::fit_semilog(h, opts).accepted);
    opts.beta_threshold = 1.0;
    CHECK_FALSE(cml::fit_semilog(h, opts).accepted);
}

TEST_CASE("pearson") {
    const std::vector<double> x{1, 2, 3};
    CHECK(cml::pearson(x, std::vector<double>{1, 3, 2}) == doctest::Approx(0.5));
    CHECK(cml::pearson(x, std::vector<double>{3, 5, 7}) == doctest::Approx(1.0));
    CHECK(cml::pearson(x, std::vector<double>{-1, -2, -3}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(cml::pearson(x, std::vector<double>{2, 2, 2}), cml::UndefinedError);
    CHECK_THROWS_AS(cml::pearson(x, std::vector<double>{1, 2}), cml::ConfigError);

    std::mt19937_64 eng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(30), b(30);
        for (int i = 0; i < 30; ++i) {
            a[static_cast<std::size_t>(i)] = n(eng);
            b[static_cast<std::size_t>(i)] = 0.3 * a[static_cast<std::size_t>(i)] + n(eng);
        }
        const double p = cml::pearson(a, b);
        CHECK(p >= -1.0);
        CHECK(p <= 1.0);
        CHECK(cml::pearson(b, a) == doctest::Approx(p).epsilon(1e-12));
        std::vector<double> a2(a);
        for (double& v : a2) v = 4.0 * v - 7.0;
        CHECK(cml::pearson(a2, b) == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("classification") {
    using C = cml::Classification;
    CHECK(cml::classify(fit_with_beta(-0.99), fit_with_beta(-0.5)) == C::boltzmann_gibbs);
    CHECK(cml::classify(fit_with_beta(-0.5), fit_with_beta(-0.97)) == C::pareto);
    CHECK(cml::classify(fit_with_beta(-0.97), fit_with_beta(-0.97)) == C::both);
    CHECK(cml::classify(fit_with_beta(-0.5), fit_with_beta(0.2)) == C::neither);
    CHECK(cml::classify(std::nullopt, std::nullopt) == C::neither);
    CHECK(cml::classify(fit_with_beta(-0.99), std::nullopt) == C::boltzmann_gibbs);
    CHECK(cml::to_string(C::both) == "both");
}

TEST_CASE("histogram error paths") {
    const std::vector<double> empty;
    const std::vector<double> xs{1.0, 2.0};
    CHECK_THROWS_AS(cml::build_histogram(empty, BinScheme::linear, 10), cml::ConfigError);
    CHECK_THROWS_AS(cml::build_histogram(xs, BinScheme::linear, 1), cml::ConfigError);
    CHECK_THROWS_AS(cml::build_histogram(xs, BinScheme::linear, 10, cml::Range{3.0, 1.0}), cml::ConfigError);
    CHECK_THROWS_AS(cml::build_histogram(xs, BinScheme::logarithmic, 10, cml::Range{0.0, 1.0}), cml::ConfigError);
    CHECK_THROWS_AS(cml::build_histogram(std::vector<double>{0.0, 0.0}, BinScheme::logarithmic, 4), cml::ConfigError);
}
