#include "doctest.h"

#include "ppszlab/gw.hpp"
#include "ppszlab/numeric.hpp"

#include <cmath>
#include <numbers>

using namespace ppszlab;

TEST_CASE("Q for k = 3") {
    CHECK(gw::q(3, 0.0) == 0.0);
    CHECK(gw::q(3, 1.0 / 3) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(gw::q(3, 0.5) == 1.0);
    CHECK(gw::q(3, 0.8) == 1.0);
    CHECK_THROWS_AS(gw::q(3, 1.5), Error);
}

TEST_CASE("Q for k = 5 is the smallest fixed point") {
    double v = gw::q(5, 0.5);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    // bisection on the quartic below the trivial root at 1
    auto h = [](double x) { return std::pow(0.5 + 0.5 * x, 4) - x; };
    double root = bisect(h, 0.0, 0.9);
    CHECK(v == doctest::Approx(root).epsilon(1e-10));
    CHECK(std::abs(h(v)) < 1e-12);
    // plain iteration from 0 lands on the same point
    double it = 0;
    for (int i = 0; i < 5000; ++i) it = std::pow(0.5 + 0.5 * it, 4);
    CHECK(v == doctest::Approx(it).epsilon(1e-10));
}

TEST_CASE("P") {
    CHECK(gw::p(3, 0.25) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    for (int k : {3, 4, 6}) CHECK(gw::p(k, 0.0) == 0.0);
    for (int k : {3, 4, 5})
        for (int i = 0; i <= 20; ++i) {
            double r = i / 20.0;
            double q = gw::q(k, r);
            CHECK(gw::p(k, r) == doctest::Approx(r + q - r * q).epsilon(1e-13));
        }
}

TEST_CASE("s_k") {
    CHECK(gw::s(3) == doctest::Approx(2 - 2 * std::log(2.0)).epsilon(1e-11));
    CHECK(std::pow(2.0, 1 - gw::s(3)) == doctest::Approx(1.3070319).epsilon(1e-7));
    double expected = std::numbers::pi * std::numbers::pi / 60;
    CHECK(std::abs(gw::s(10) - expected) / expected < 0.15);
    for (int k = 3; k < 10; ++k) CHECK(gw::s(k + 1) < gw::s(k));
}

TEST_CASE("Q' agrees with finite differences") {
    CHECK(gw::q_prime(0.0) == 0.0);
    CHECK(gw::q_prime(0.25) == doctest::Approx(0.5 / std::pow(0.75, 3)).epsilon(1e-14));
    const double hstep = 1e-6;
    for (int i = 1; i <= 100; ++i) {
        double r = 0.49 * i / 101;
        double fd = (gw::q(3, r + hstep) - gw::q(3, r - hstep)) / (2 * hstep);
        CHECK(std::abs(gw::q_prime(r) - fd) < 1e-6);
        CHECK(gw::q_prime_k(3, r) == doctest::Approx(gw::q_prime(r)).epsilon(1e-9));
    }
    for (double r : {0.1, 0.3, 0.5, 0.6}) {
        double fd = (gw::q(5, r + hstep) - gw::q(5, r - hstep)) / (2 * hstep);
        CHECK(gw::q_prime_k(5, r) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("two-critical-clause bonus") {
    CHECK(gw::b_twocc(0.0) == doctest::Approx(2.0));
    CHECK(gw::b_twocc(0.5) == 1.0);
    double prev = gw::b_twocc(0.0);
    for (int i = 1; i <= 100; ++i) {
        double cur = gw::b_twocc(0.5 * i / 100);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("q_truncated") {
    CHECK(gw::q_truncated(3, 0.3, 0) == 0.0);
    CHECK(gw::q_truncated(3, 0.3, 1) == doctest::Approx(0.09));
    // increasing in depth toward the limit
    double prev = 0;
    for (int d = 1; d <= 60; ++d) {
        double v = gw::q_truncated(3, 0.4, d);
        CHECK(v >= prev);
        CHECK(v <= gw::q(3, 0.4) + 1e-15);
        prev = v;
    }
    CHECK(prev == doctest::Approx(gw::q(3, 0.4)).epsilon(1e-4));
    // slow near the critical point: depth 14 is still about 0.0095 short at r = 0.4
    CHECK(gw::q(3, 0.4) - gw::q_truncated(3, 0.4, 14) == doctest::Approx(0.00949).epsilon(0.01));
    CHECK_THROWS_AS(gw::q_truncated(3, 0.4, -1), Error);
}
