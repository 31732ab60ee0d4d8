#include "hyperbound/potential.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hyperbound;

namespace {

PotentialSpec random_spec(oracles::Rng& rng, int max_order, bool allow_g1 = false) {
    const int M = rng.integer(2, max_order);
    std::vector<double> f(static_cast<size_t>(M - 1)), g(static_cast<size_t>(M));
    for (double& c : f) c = rng.uniform(-3.0, 3.0);
    for (double& c : g) c = rng.uniform(-3.0, 3.0);
    if (!allow_g1) g[0] = 0.0;
    return PotentialSpec(M, std::move(f), std::move(g));
}

} // namespace

TEST_CASE("pointwise evaluation at the origin") {
    CHECK(evaluate_potential(PotentialSpec::antisymmetric_scarf(1.7), 0.0) == 0.0);
    CHECK(evaluate_potential(PotentialSpec::poschl_teller(-2.0), 0.0) == -2.0);
    // mixed: sinh 0 kills every antisymmetric term
    PotentialSpec mixed(3, {-1.5, 0.25}, {0.0, 2.0, -1.0});
    CHECK(evaluate_potential(mixed, 0.0) == doctest::Approx(-1.25).epsilon(1e-15));
}

TEST_CASE("g_1 tanh-like term sets the asymptotes") {
    PotentialSpec spec(2, {0.0}, {0.5, 0.0});
    CHECK(spec.asymptotically_asymmetric());
    CHECK(evaluate_potential(spec, 30.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(evaluate_potential(spec, -30.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(evaluate_potential(spec, 400.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("large-|x| branch joins the direct branch") {
    oracles::Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        PotentialSpec spec = random_spec(rng, 6);
        // both sides of the switch at |x| = 20 evaluate the same expression
        const double vl = evaluate_potential(spec, 19.999999);
        const double vr = evaluate_potential(spec, 20.000001);
        CHECK(std::fabs(vl - vr) <= 1e-12 * std::max(1.0, std::fabs(vl)) + 1e-18);
        CHECK(std::isfinite(evaluate_potential(spec, 500.0)));
    }
}

TEST_CASE("parity split and recombination") {
    PotentialSpec spec(2, {1.0}, {0.0, 2.0});
    const ParitySplit ps = parity_split(spec);
    CHECK(ps.symmetric.f(2) == 1.0);
    CHECK(ps.symmetric.is_symmetric());
    CHECK(ps.antisymmetric.g(2) == 2.0);
    CHECK(ps.antisymmetric.is_antisymmetric());

    PotentialSpec zero(2, {0.0}, {0.0, 0.0});
    const ParitySplit zs = parity_split(zero);
    CHECK(zs.symmetric.max_coupling() == 0.0);
    CHECK(zs.antisymmetric.max_coupling() == 0.0);

    oracles::Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        PotentialSpec s = random_spec(rng, 6, true);
        const ParitySplit p = parity_split(s);
        for (double x : {0.7, -1.3, 2.9}) {
            const double sum =
                evaluate_potential(p.symmetric, x) + evaluate_potential(p.antisymmetric, x);
            CHECK(sum == doctest::Approx(evaluate_potential(s, x)).epsilon(1e-14));
        }
    }
}

TEST_CASE("split parts have definite parity") {
    oracles::Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        PotentialSpec s = random_spec(rng, 6, true);
        const ParitySplit p = parity_split(s);
        for (int j = 0; j < 10; ++j) {
            const double x = rng.uniform(-6.0, 6.0);
            const double vs = evaluate_potential(p.symmetric, x);
            const double va = evaluate_potential(p.antisymmetric, x);
            CHECK(std::fabs(vs - evaluate_potential(p.symmetric, -x)) <=
                  1e-13 * std::max(1.0, std::fabs(vs)));
            CHECK(std::fabs(va + evaluate_potential(p.antisymmetric, -x)) <=
                  1e-13 * std::max(1.0, std::fabs(va)));
        }
    }
}

TEST_CASE("generalized parity conjugation") {
    PotentialSpec spec(2, {-2.0}, {0.0, 1.0});
    const PotentialSpec conj = phat_conjugate(spec);
    CHECK(conj.f(2) == -2.0);
    CHECK(conj.g(2) == -1.0);

    PotentialSpec sym = PotentialSpec::poschl_teller(-6.0);
    const PotentialSpec sym2 = phat_conjugate(sym);
    for (int m = 2; m <= 2; ++m) CHECK(sym2.f(m) == sym.f(m));
    CHECK(sym2.g(2) == 0.0);

    // involution
    const PotentialSpec twice = phat_conjugate(phat_conjugate(spec));
    CHECK(twice.g(2) == spec.g(2));
    CHECK(twice.f(2) == spec.f(2));
}

TEST_CASE("conjugated potential is the spatial reflection") {
    oracles::Rng rng(3);
    for (int i = 0; i < 25; ++i) {
        PotentialSpec s = random_spec(rng, 6, true);
        const PotentialSpec c = phat_conjugate(s);
        for (int j = 0; j < 100; ++j) {
            const double x = rng.uniform(-10.0, 10.0);
            const double lhs = evaluate_potential(c, -x);
            const double rhs = evaluate_potential(s, x);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
        }
    }
}

TEST_CASE("short-range decay without g_1") {
    oracles::Rng rng(29);
    for (int i = 0; i < 20; ++i) {
        PotentialSpec s = random_spec(rng, 6);
        const double bound = 1e-12 * std::max(1.0, s.max_coupling());
        CHECK(std::fabs(evaluate_potential(s, 30.0)) <= bound);
        CHECK(std::fabs(evaluate_potential(s, -30.0)) <= bound);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(PotentialSpec(1, {}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec(3, {0.0}, {0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec(2, {0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("max_depth locates the deepest point") {
    // |V| of the pure AS well peaks at g/2 (|sinh| cosh^-2 maxes at sinh = 1)
    PotentialSpec as = PotentialSpec::antisymmetric_scarf(2.0);
    CHECK(as.max_depth() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(PotentialSpec::poschl_teller(-6.0).max_depth() == doctest::Approx(6.0).epsilon(1e-9));
}
