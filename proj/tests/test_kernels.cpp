#include <doctest.h>

#include <cmath>

#include "alkit/kernels.hpp"
#include "test_util.hpp"

using namespace alkit;
using alkit_tests::vec;

TEST_SUITE_BEGIN("kernels");

TEST_CASE("family names round trip") {
    for (KernelFamily f : {KernelFamily::Gaussian, KernelFamily::IM, KernelFamily::MIM,
                           KernelFamily::ExpProduct}) {
        CHECK(kernel_family_from_string(to_string(f)) == f);
    }
    CHECK(kernel_family_from_string("gauss") == KernelFamily::Gaussian);
    CHECK_THROWS_AS(kernel_family_from_string("matern"), ValidationError);
    CHECK(family_uses_alpha(KernelFamily::IM));
    CHECK(family_uses_alpha(KernelFamily::MIM));
    CHECK(!family_uses_alpha(KernelFamily::Gaussian));
    CHECK(!family_uses_alpha(KernelFamily::ExpProduct));
}

TEST_CASE("hand-computed kernel values") {
    // one-dimensional pair at distance 0.4
    const Vector a = vec({0.3}), b = vec({0.7});

    KernelSpec mim = KernelSpec::isotropic(KernelFamily::MIM, 1, 0.5, 1.0);
    CHECK(eval_kernel(mim, a, b) == doctest::Approx(1.0 / 1.64).epsilon(1e-15));

    KernelSpec im = KernelSpec::isotropic(KernelFamily::IM, 1, 0.5, 2.0);
    CHECK(eval_kernel(im, a, b) ==
          doctest::Approx(std::pow(1.64, -2.0)).epsilon(1e-15));

    KernelSpec gauss = KernelSpec::isotropic(KernelFamily::Gaussian, 1, 0.5);
    CHECK(eval_kernel(gauss, a, b) == doctest::Approx(std::exp(-0.64)).epsilon(1e-15));

    KernelSpec ep = KernelSpec::isotropic(KernelFamily::ExpProduct, 1, 0.5);
    CHECK(eval_kernel(ep, a, b) == doctest::Approx(std::exp(-0.8)).epsilon(1e-15));

    // anisotropic two-dimensional checks against the documented formulas
    const Vector p = vec({0.0, 0.0}), q = vec({0.3, 0.4});
    KernelSpec g2;
    g2.family = KernelFamily::Gaussian;
    g2.theta = vec({0.5, 1.0});
    CHECK(eval_kernel(g2, p, q) ==
          doctest::Approx(std::exp(-(0.09 / 0.25 + 0.16))).epsilon(1e-15));

    KernelSpec im2;
    im2.family = KernelFamily::IM;
    im2.theta = vec({0.5, 1.0});
    im2.alpha = 0.5;
    CHECK(eval_kernel(im2, p, q) ==
          doctest::Approx(std::pow(1.0 + 0.09 / 0.25 + 0.16, -0.5)).epsilon(1e-15));
}

TEST_CASE("basic kernel identities") {
    const Vector x = vec({0.21, 0.77, 0.5});
    const Vector y = vec({0.6, 0.1, 0.95});
    for (KernelFamily f : {KernelFamily::Gaussian, KernelFamily::IM, KernelFamily::MIM,
                           KernelFamily::ExpProduct}) {
        const KernelSpec spec = KernelSpec::isotropic(f, 3, 0.4, 1.3);
        CHECK(eval_kernel(spec, x, x) == 1.0);
        CHECK(eval_kernel(spec, x, y) == eval_kernel(spec, y, x));
        const double v = eval_kernel(spec, x, y);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("mim factors exactly into per-coordinate terms") {
    KernelSpec spec;
    spec.family = KernelFamily::MIM;
    spec.theta = vec({0.2, 0.7, 1.3});
    spec.alpha = 1.7;
    const Vector x = vec({0.1, 0.5, 0.9});
    const Vector y = vec({0.45, 0.2, 0.65});

    double product = 1.0;
    for (int k = 0; k < 3; ++k) {
        KernelSpec one;
        one.family = KernelFamily::MIM;
        one.theta = vec({spec.theta[k]});
        one.alpha = spec.alpha;
        product *= eval_kernel(one, vec({x[k]}), vec({y[k]}));
    }
    CHECK(eval_kernel(spec, x, y) == product);  // bitwise, same operation order
}

TEST_CASE("mim keeps polynomial tails along shared coordinates") {
    // aligned in coordinate 1, far in coordinate 2: the gaussian correlation
    // is numerically dead while mim retains the 1/(1+d^2/t^2) factor.
    const Vector x = vec({0.5, 0.05});
    const Vector y = vec({0.5, 0.95});
    const KernelSpec mim = KernelSpec::isotropic(KernelFamily::MIM, 2, 0.1, 1.0);
    const KernelSpec gauss = KernelSpec::isotropic(KernelFamily::Gaussian, 2, 0.1);
    const double vm = eval_kernel(mim, x, y);
    const double vg = eval_kernel(gauss, x, y);
    CHECK(vm == doctest::Approx(1.0 / 82.0).epsilon(1e-12));
    CHECK(vg < 1e-30);
    CHECK(vm > 1e4 * vg);
}

TEST_CASE("small length scales decorrelate separated points") {
    // at theta = 1e-3 and alpha = 2 every correlation across a gap of 0.5
    // or more is far below 1e-6, for the product family per coordinate
    const KernelSpec spec = KernelSpec::isotropic(KernelFamily::MIM, 2, 1e-3, 2.0);
    const double v = eval_kernel(spec, vec({0.0, 0.0}), vec({0.5, 0.6}));
    CHECK(v < 1e-6);
    CHECK(v > 0.0);
}

TEST_CASE("correlation matrix and vector agree with eval_kernel") {
    Matrix pts(3, 2);
    pts << 0.1, 0.2, 0.8, 0.4, 0.5, 0.9;
    const KernelSpec spec = KernelSpec::isotropic(KernelFamily::MIM, 2, 0.3, 0.8, 1e-4);
    const Matrix r = correlation_matrix(spec, pts);
    CHECK(r.rows() == 3);
    CHECK(r.cols() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(r(i, i) == 1.0 + 1e-4);
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            CHECK(r(i, j) == r(j, i));
            CHECK(r(i, j) ==
                  eval_kernel(spec, pts.row(i).transpose(), pts.row(j).transpose()));
        }
    }
    const Vector x = vec({0.6, 0.6});
    const Vector rv = correlation_vector(spec, pts, x);
    CHECK(rv.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(rv[i] == eval_kernel(spec, pts.row(i).transpose(), x));
    }
    // no nugget on the vector: correlation with a design row is exactly 1
    const Vector at_row = correlation_vector(spec, pts, pts.row(0).transpose());
    CHECK(at_row[0] == 1.0);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
    KernelSpec spec = KernelSpec::isotropic(KernelFamily::MIM, 2, 0.5, 1.0);
    CHECK_NOTHROW(spec.validate());

    KernelSpec bad = spec;
    bad.theta[1] = 1e-4;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = spec;
    bad.theta[0] = 2e3;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = spec;
    bad.alpha = 3.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = spec;
    bad.alpha = 0.001;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = spec;
    bad.nugget = 0.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = spec;
    bad.nugget = -1e-9;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    // alpha is ignored by families without a shape exponent
    KernelSpec gauss = KernelSpec::isotropic(KernelFamily::Gaussian, 2, 0.5);
    gauss.alpha = 99.0;
    CHECK_NOTHROW(gauss.validate());

    KernelSpec empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);
}

TEST_CASE("dimension mismatches are rejected") {
    const KernelSpec spec = KernelSpec::isotropic(KernelFamily::Gaussian, 3, 0.5);
    CHECK_THROWS_AS(eval_kernel(spec, vec({0.1, 0.2}), vec({0.3, 0.4})),
                    DimensionMismatch);
    Matrix pts(2, 2);
    pts << 0.1, 0.2, 0.3, 0.4;
    CHECK_THROWS_AS(correlation_matrix(spec, pts), DimensionMismatch);
    CHECK_THROWS_AS(correlation_vector(spec, pts, vec({0.1, 0.2, 0.3})),
                    DimensionMismatch);
}

TEST_SUITE_END();
