#include "hyperbound/basis.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hyperbound;

TEST_CASE("composite index") {
    CHECK(mu_index(0, 0, 1) == 1);
    CHECK(mu_index(0, 1, 0) == 2);
    CHECK(mu_index(1, 0, 1) == 5);
    CHECK_THROWS_AS(mu_index(0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(mu_index(-1, 0, 1), std::invalid_argument);
    for (long mu = 1; mu <= 200; ++mu) {
        const BasisIndex k = basis_from_mu(mu);
        CHECK(k.mu() == mu);
        CHECK(mu_index(k.n, k.p, k.q) == mu);
    }
    CHECK_THROWS_AS(basis_from_mu(0), std::invalid_argument);
}

TEST_CASE("basis values at simple points") {
    BasisParams par{0.0, 1.0};
    CHECK(eval_basis({0, 0, 1}, par, 0.0) == 1.0);
    CHECK(eval_basis({0, 1, 0}, par, 0.0) == 0.0);
    BasisParams par2{0.0, 2.0};
    const double c1 = std::cosh(1.0);
    CHECK(eval_basis({0, 0, 1}, par2, 1.0) == doctest::Approx(1.0 / (c1 * c1)).epsilon(1e-14));
}

TEST_CASE("analytic first derivative") {
    BasisParams par{0.0, 1.0};
    CHECK(eval_basis_derivative({0, 0, 1}, par, 0.0) == 0.0);
    // d/dx [sinh x cosh^-2 x] = cosh^-1 - 2 sinh^2 cosh^-3 -> 1 at x = 0
    CHECK(eval_basis_derivative({0, 1, 0}, par, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    oracles::Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        BasisIndex idx{rng.integer(0, 4), rng.integer(0, 1), rng.integer(0, 1)};
        if (idx.mu() < 1) idx.q = 1;
        BasisParams p{rng.uniform(-1.0, 1.0), rng.uniform(0.3, 2.5)};
        const double x = 0.5;
        const double fd = oracles::fd_first([&](double t) { return eval_basis(idx, p, t); }, x, 1e-4);
        CHECK(eval_basis_derivative(idx, p, x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("second derivative against finite differences") {
    oracles::Rng rng(17);
    for (int i = 0; i < 40; ++i) {
        BasisIndex idx{rng.integer(0, 3), rng.integer(0, 1), rng.integer(0, 1)};
        if (idx.mu() < 1) idx.q = 1;
        BasisParams p{rng.uniform(-1.2, 1.2), rng.uniform(0.4, 2.0)};
        const double x = rng.uniform(0.4, 2.5);
        const double fd =
            oracles::fd_second([&](double t) { return eval_basis(idx, p, t); }, x, 1e-3);
        const double an = eval_basis_second_derivative(idx, p, x);
        CHECK(an == doctest::Approx(fd).epsilon(2e-7));
    }
}

TEST_CASE("kinetic ratio identity") {
    // xi''/xi = (sigma+q-1)^2 + (a^2 - sigma(sigma+1) - (2 sigma+1) a sinh x)/cosh^2 x
    //           + (q-1)(q - 2 a sinh x)/sinh^2 x
    oracles::Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        BasisIndex idx{rng.integer(0, 5), rng.integer(0, 1), rng.integer(0, 1)};
        if (idx.mu() < 1) idx.q = 1;
        BasisParams p{rng.uniform(-1.5, 1.5), rng.uniform(0.3, 2.5)};
        if (p.a == 0.0) p.a = 0.3;
        const double x = rng.uniform(0.2, 3.0) * (rng.integer(0, 1) ? 1.0 : -1.0);
        const double sigma = sigma_of(idx, p);
        const double sh = std::sinh(x), ch = std::cosh(x);
        const double rhs = (sigma + idx.q - 1.0) * (sigma + idx.q - 1.0) +
                           (p.a * p.a - sigma * (sigma + 1.0) - (2.0 * sigma + 1.0) * p.a * sh) /
                               (ch * ch) +
                           (idx.q - 1.0) * (idx.q - 2.0 * p.a * sh) / (sh * sh);
        const double lhs =
            eval_basis_second_derivative(idx, p, x) / eval_basis(idx, p, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("parity at a = 0") {
    BasisParams par{0.0, 0.8};
    for (long mu = 1; mu <= 12; ++mu) {
        const BasisIndex idx = basis_from_mu(mu);
        for (double x : {0.3, 1.1, 2.7}) {
            const double sign = (idx.q == 1) ? 1.0 : -1.0;
            CHECK(eval_basis(idx, par, x) ==
                  doctest::Approx(sign * eval_basis(idx, par, -x)).epsilon(1e-14));
        }
    }
}

TEST_CASE("square-integrability proxy") {
    oracles::Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        BasisIndex idx{rng.integer(0, 3), rng.integer(0, 1), rng.integer(0, 1)};
        if (idx.mu() < 1) idx.q = 1;
        BasisParams p{rng.uniform(-1.0, 1.0), rng.uniform(0.3, 2.0)};
        const double sigma = sigma_of(idx, p);
        const double C = std::pow(2.0, sigma + 1.0);
        for (double x : {5.5, 9.0, 16.0, -7.0, -20.0}) {
            const double bound =
                C * std::exp(-p.kappa * std::fabs(x) + std::fabs(p.a) * M_PI / 2.0);
            CHECK(std::fabs(eval_basis(idx, p, x)) <= bound);
        }
    }
}
