#include <doctest.h>

#include <cmath>
#include <limits>

#include "alkit/testfns.hpp"
#include "test_util.hpp"

using namespace alkit;
using alkit_tests::vec;

namespace {

// Fixed off-grid probe, the same for every dimension.
Vector probe(int d) {
    Vector u(d);
    for (int k = 0; k < d; ++k) u[k] = ((7 * k + 3) % 10) / 10.0 + 0.05;
    return u;
}

void check_value(const std::string& name, double expected) {
    const TestFunction fn = find_function(name);
    CHECK(fn.name == name);
    CHECK(fn(probe(fn.d)) == doctest::Approx(expected).epsilon(1e-12));
}

}  // namespace

TEST_SUITE_BEGIN("testfns");

TEST_CASE("values at a fixed probe point") {
    check_value("levy6", 76.20963290863213);
    check_value("ackley6", 21.246495681211215);
    check_value("rastrigin6", 170.17652994888135);
    check_value("friedman5", 7.0495017991244575);
    check_value("detpep8", 54.330559332036046);
    check_value("otl6", 4.644193726721802);
    check_value("piston7", 0.6958874264808839);
    check_value("robotarm8", 1.1284054662909588);
    check_value("wingweight10", 267.6570566449883);

    // one-dimensional sanity: levy at the domain center
    const TestFunction levy1 = find_function("levy1");
    CHECK(levy1(vec({0.5})) == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("documented minima are attained") {
    for (const std::string name : {"levy6", "ackley6", "rastrigin6", "levy6_aug10"}) {
        const TestFunction fn = find_function(name);
        REQUIRE(fn.min_value.has_value());
        REQUIRE(fn.min_location.has_value());
        CHECK(*fn.min_value == 0.0);
        CHECK(fn.min_location->size() == fn.d);
        CHECK(fn(*fn.min_location) <= *fn.min_value + 1e-10);
    }

    // augmented minimizers park the inert coordinates at the center
    const TestFunction aug = find_function("ackley6_aug10");
    for (int k = 6; k < 10; ++k) CHECK((*aug.min_location)[k] == 0.5);

    CHECK(!find_function("friedman5").min_value.has_value());
    CHECK(!find_function("piston7_aug10").min_location.has_value());
}

TEST_CASE("inert coordinates do not change the value") {
    const TestFunction fn = find_function("levy4_aug6");
    CHECK(fn.d == 6);
    CHECK(fn.d_active == 4);
    Vector a = probe(6), b = probe(6);
    b[4] = 0.01;
    b[5] = 0.99;
    CHECK(fn(a) == fn(b));  // bitwise: the tail is never read
}

TEST_CASE("the catalog is fixed") {
    const auto cat = catalog();
    REQUIRE(cat.size() == 13);
    const std::vector<std::string> expected = {
        "friedman5_aug10", "detpep8_aug10", "otl6_aug10",  "piston7_aug10",
        "robotarm8_aug10", "wingweight10",  "ackley6",     "ackley6_aug10",
        "levy6",           "levy6_aug10",   "rastrigin6",  "rastrigin6_aug10",
        "levy4_aug6"};
    for (std::size_t i = 0; i < cat.size(); ++i) {
        CHECK(cat[i].name == expected[i]);
        CHECK(cat[i].d >= cat[i].d_active);
        CHECK(cat[i].d_active >= 1);
    }
    CHECK(cat[0].d == 10);
    CHECK(cat[0].d_active == 5);
    CHECK(cat[12].d == 6);
    CHECK(cat[12].d_active == 4);
}

TEST_CASE("name grammar") {
    CHECK(find_function("levy2_aug2").d == 2);
    CHECK(find_function("wingweight10").d_active == 10);

    CHECK_THROWS_AS(find_function("nosuchfn5"), ValidationError);
    CHECK_THROWS_AS(find_function("friedman7"), ValidationError);  // fixed arity
    CHECK_THROWS_AS(find_function("otl6_aug4"), ValidationError);  // shrinking aug
    CHECK_THROWS_AS(find_function("levy"), ValidationError);
    CHECK_THROWS_AS(find_function("levy0"), ValidationError);
    CHECK_THROWS_AS(find_function("levy6_aug"), ValidationError);
    CHECK_THROWS_AS(find_function("levy6_augx"), ValidationError);
    CHECK_THROWS_AS(find_function("levyx"), ValidationError);
    CHECK_THROWS_AS(find_function(""), ValidationError);
}

TEST_CASE("evaluation guards its domain") {
    const TestFunction fn = find_function("ackley2");
    CHECK_THROWS_AS(fn(vec({0.5})), DimensionMismatch);
    CHECK_THROWS_AS(fn(vec({0.5, 1.2})), ValidationError);
    CHECK_THROWS_AS(fn(vec({-0.1, 0.5})), ValidationError);
    CHECK_THROWS_AS(fn(vec({0.5, std::numeric_limits<double>::quiet_NaN()})),
                    ValidationError);
    CHECK(fn(vec({0.0, 1.0})) > 0.0);  // the closed box is allowed
}

TEST_SUITE_END();
