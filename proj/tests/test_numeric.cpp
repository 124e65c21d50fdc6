#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "alkit/numeric.hpp"
#include "test_util.hpp"

using namespace alkit;
using alkit_tests::vec;

TEST_SUITE_BEGIN("numeric");

TEST_CASE("splitmix64 and hash64 are stable and order sensitive") {
    CHECK(splitmix64(0) == splitmix64(0));
    CHECK(splitmix64(1) != splitmix64(2));
    CHECK(hash64(1, 2) != hash64(2, 1));
    CHECK(hash64(0, 0) != 0);
    // derived streams stay distinct
    CHECK(hash64(42, 0) != hash64(42, 1));
}

TEST_CASE("rng is deterministic and respects ranges") {
    Rng a(123), b(123), c(124);
    bool identical = true, differs = false;
    for (int i = 0; i < 200; ++i) {
        const double ua = a.uniform01();
        identical = identical && ua == b.uniform01();
        differs = differs || ua != c.uniform01();
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    CHECK(identical);
    CHECK(differs);

    Rng r(7);
    for (int i = 0; i < 200; ++i) {
        const int k = r.uniform_int(7);
        CHECK(k >= 0);
        CHECK(k < 7);
        const double u = r.uniform(-2.0, 3.0);
        CHECK(u >= -2.0);
        CHECK(u <= 3.0);
    }
    const Vector v = r.uniform_vec(5);
    CHECK(v.size() == 5);
    CHECK(v.minCoeff() >= 0.0);
    CHECK(v.maxCoeff() < 1.0);
}

TEST_CASE("uniform_int covers all residues") {
    Rng r(99);
    std::vector<int> hits(5, 0);
    for (int i = 0; i < 2000; ++i) hits[static_cast<std::size_t>(r.uniform_int(5))]++;
    for (int h : hits) CHECK(h > 200);
}

TEST_CASE("pairwise_sum beats naive accumulation") {
    // 1 + n copies of eps/2: naive addition loses them all, pairwise keeps
    // the bulk because equals-sized partial sums are combined.
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> values{1.0};
    const int n = 1 << 16;
    for (int i = 0; i < n; ++i) values.push_back(eps / 2);
    const double exact = 1.0 + n * (eps / 2);
    double naive = 0.0;
    for (double v : values) naive += v;
    CHECK(naive == 1.0);  // demonstrates the failure mode
    CHECK(std::abs(pairwise_sum(values) - exact) / exact < 1e-12);

    CHECK(pairwise_sum({}) == 0.0);
    CHECK(pairwise_sum({3.5}) == 3.5);
    CHECK(pairwise_sum({1.0, 2.0, 3.0}) == 6.0);
}

TEST_CASE("log_sum_exp handles extremes") {
    CHECK(log_sum_exp({0.0, 0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // far apart: the small one is invisible
    CHECK(log_sum_exp({1000.0, 0.0}) == doctest::Approx(1000.0));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(log_sum_exp({-inf, 1.0}) == doctest::Approx(1.0));
    CHECK(log_sum_exp({-inf, -inf}) == -inf);
}

TEST_CASE("cholesky factors, solves and reports log det") {
    Matrix a(2, 2);
    const double eta = 1e-6;
    a << 1.0 + eta, 0.5, 0.5, 1.0 + eta;
    const CholeskyFactor f = cholesky(a, eta);
    CHECK(f.jitter_used == eta);
    const double det = (1.0 + eta) * (1.0 + eta) - 0.25;
    CHECK(f.log_det == doctest::Approx(std::log(det)).epsilon(1e-14));

    const Vector b = vec({1.0, -2.0});
    const Vector x = f.solve(b);
    CHECK((a * x - b).norm() < 1e-12);
    CHECK(f.quad_form(b) == doctest::Approx(b.dot(x)).epsilon(1e-14));
    CHECK(f.quad_form(b) >= 0.0);
}

TEST_CASE("cholesky on a duplicated-point correlation matrix") {
    // two identical rows: off-diagonal 1, diagonal 1 + eta. Determinant is
    // (1+eta)^2 - 1, tiny but positive, so the factorization succeeds with
    // the first jitter and log_det matches the closed form.
    const double eta = 1e-6;
    Matrix a(2, 2);
    a << 1.0 + eta, 1.0, 1.0, 1.0 + eta;
    const CholeskyFactor f = cholesky(a, eta);
    CHECK(f.jitter_used == eta);
    CHECK(f.log_det ==
          doctest::Approx(std::log((1.0 + eta) * (1.0 + eta) - 1.0)).epsilon(1e-9));
}

TEST_CASE("cholesky escalates jitter and gives up honestly") {
    // off-diagonal above the diagonal: indefinite until the jitter reaches
    // 1e-6 on the schedule starting at 1e-8.
    Matrix a(2, 2);
    a << 1.0, 1.0 + 1e-7, 1.0 + 1e-7, 1.0;
    const CholeskyFactor f = cholesky(a, 1e-8);
    CHECK(f.jitter_used > 1e-8);
    CHECK(f.jitter_used <= 1e-2);

    // eta = 0 means "exact or nothing"
    Matrix s(2, 2);
    s << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(cholesky(s, 0.0), NotPositiveDefinite);
    // hopeless even at the largest allowed jitter
    Matrix h(2, 2);
    h << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(cholesky(h, 1e-6), NotPositiveDefinite);
}

TEST_CASE("normal pdf and cdf reference values") {
    CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
    CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
    // erfc-based tails keep relative accuracy where erf-based forms underflow
    CHECK(norm_cdf(-10.0) == doctest::Approx(7.61985302416053e-24).epsilon(1e-12));
    CHECK(norm_cdf(-1.0) + norm_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("maximize_box finds a smooth interior optimum") {
    const Vector target = vec({0.3, 0.7, 0.55});
    const auto f = [&](const Vector& x) { return -(x - target).squaredNorm(); };
    BoxOptimizerConfig cfg;
    cfg.seed = 11;
    const BoxOptimum opt = maximize_box(f, 3, cfg);
    CHECK((opt.x - target).norm() < 1e-3);
    CHECK(opt.value == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(opt.ranked.size() > 1000);  // candidates plus polished end points
    // ranked is sorted best first
    for (std::size_t i = 1; i < opt.ranked.size(); ++i) {
        CHECK(opt.ranked[i - 1].second >= opt.ranked[i].second);
    }
}

TEST_CASE("maximize_box is deterministic and honors extra starts") {
    const auto f = [](const Vector& x) {
        return std::sin(7.0 * x[0]) + std::cos(3.0 * x[1]);
    };
    BoxOptimizerConfig cfg;
    cfg.seed = 5;
    const BoxOptimum a = maximize_box(f, 2, cfg);
    const BoxOptimum b = maximize_box(f, 2, cfg);
    CHECK(a.value == b.value);
    CHECK((a.x - b.x).norm() == 0.0);

    // an extra start at the optimum can only help
    const BoxOptimum c = maximize_box(f, 2, cfg, {a.x});
    CHECK(c.value >= a.value);
}

TEST_CASE("maximize_box treats -inf as infeasible") {
    // feasible region is a small corner box; the optimum sits at its corner
    const auto f = [](const Vector& x) {
        if (x[0] > 0.2 || x[1] > 0.2) return -std::numeric_limits<double>::infinity();
        return x[0] + x[1];
    };
    BoxOptimizerConfig cfg;
    cfg.seed = 3;
    cfg.n_candidates = 4000;
    const BoxOptimum opt = maximize_box(f, 2, cfg);
    CHECK(std::isfinite(opt.value));
    CHECK(opt.x[0] <= 0.2);
    CHECK(opt.x[1] <= 0.2);
    CHECK(opt.value > 0.35);  // pattern search pushes into the corner
}

TEST_SUITE_END();
