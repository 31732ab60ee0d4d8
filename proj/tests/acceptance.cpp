// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line with its runtime.

#include "hyperbound/matching.hpp"
#include "hyperbound/numerov.hpp"
#include "hyperbound/potential.hpp"
#include "hyperbound/qbuilder.hpp"
#include "hyperbound/series.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace hyperbound;

namespace {

double a_j(double kappa, int j) { return -j * (2.0 * kappa + j); }
double b_j(double kappa, int j) { return (kappa + j) * (kappa + j + 1.0); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Criterion {
    const char* label;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string note;

    explicit Criterion(const char* l) : label(l) {}
    void require(bool ok) {
        pass = pass && ok;
        CHECK(ok);
    }
    double seconds() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count() /
               1000.0;
    }
    ~Criterion() {
        std::printf("[%s] %s  (%.2f s)%s%s\n", label, pass ? "PASS" : "FAIL", seconds(),
                    note.empty() ? "" : "  ", note.c_str());
        std::fflush(stdout);
    }
};

GridConfig grid_for(double kappa_min) {
    GridConfig g;
    g.half_width = std::max(40.0, 26.0 / std::max(kappa_min, 0.05));
    std::size_t n = static_cast<std::size_t>(2.0 * g.half_width / 2.5e-3) + 1;
    if (n % 2 == 0) ++n;
    g.points = std::min<std::size_t>(n, 640001);
    return g;
}

} // namespace

TEST_CASE("criterion 01: golden matrices") {
    Criterion cr("criterion 01");
    for (double kappa : {0.5, 1.0, 2.0}) {
        // Poschl-Teller two-term recurrence, both sectors
        for (int p = 0; p <= 1; ++p) {
            const double f = -2.0;
            QMatrix q = build_q(PotentialSpec::poschl_teller(f), BasisParams{0.0, kappa},
                                p == 0 ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0});
            const auto w = q.dense_window(6);
            for (int c = 0; c < 6; ++c)
                for (int r = 0; r < 6; ++r) {
                    double expect = 0.0;
                    if (r == c && r > 0) expect = a_j(kappa, 2 * r);
                    if (r == c + 1) expect = f + b_j(kappa, 2 * c + p);
                    cr.require(w[r][c] == expect);
                }
        }
        // single-term symmetric wells, K = 1..3 (D = K partitions)
        for (int K = 1; K <= 3; ++K) {
            const double f = -1.0;
            std::vector<double> fs(static_cast<size_t>(2 * K - 1), 0.0);
            fs.back() = f;
            PotentialSpec spec(2 * K, fs, std::vector<double>(static_cast<size_t>(2 * K), 0.0));
            for (int p = 0; p <= 1; ++p) {
                QMatrix q = build_q(spec, BasisParams{0.0, kappa},
                                    p == 0 ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0});
                cr.require(q.block_dim() == K);
                const std::size_t sz = 2 * static_cast<std::size_t>(K) + 3;
                const auto w = q.dense_window(sz);
                for (std::size_t c = 0; c < sz; ++c)
                    for (std::size_t r = 0; r < sz; ++r) {
                        double expect = 0.0;
                        if (r == c && r > 0) expect = a_j(kappa, 2 * static_cast<int>(r));
                        if (r == c + 1) expect += b_j(kappa, 2 * static_cast<int>(c) + p);
                        if (r == c + static_cast<std::size_t>(K)) expect += f;
                        cr.require(w[r][c] == expect);
                    }
            }
        }
        // anti-symmetric scarf, both sectors; b_2 genuinely repeats in two
        // consecutive rows of the p = 0 sector (both kets of the first full
        // doublet carry sigma = kappa + 2)
        const double g = 1.0;
        PotentialSpec as = PotentialSpec::antisymmetric_scarf(g);
        {
            QMatrix q0 = build_q(as, BasisParams{0.0, kappa}, {0, 0, 1});
            const auto w = q0.dense_window(7);
            const double expect[7][7] = {
                {0, 0, 0, 0, 0, 0, 0},
                {g, a_j(kappa, 1), 0, 0, 0, 0, 0},
                {b_j(kappa, 0), g, a_j(kappa, 2), 0, 0, 0, 0},
                {0, b_j(kappa, 2), g, a_j(kappa, 3), 0, 0, 0},
                {0, -g, b_j(kappa, 2), g, a_j(kappa, 4), 0, 0},
                {0, 0, 0, b_j(kappa, 4), g, a_j(kappa, 5), 0},
                {0, 0, 0, -g, b_j(kappa, 4), g, a_j(kappa, 6)},
            };
            for (int r = 0; r < 7; ++r)
                for (int c = 0; c < 7; ++c) cr.require(w[r][c] == expect[r][c]);
        }
        {
            QMatrix q1 = build_q(as, BasisParams{0.0, kappa}, {0, 1, 0});
            const auto w = q1.dense_window(6);
            const double expect[6][6] = {
                {0, 0, 0, 0, 0, 0},
                {g, a_j(kappa, 1), 0, 0, 0, 0},
                {b_j(kappa, 1), g, a_j(kappa, 2), 0, 0, 0},
                {-g, b_j(kappa, 1), g, a_j(kappa, 3), 0, 0},
                {0, 0, b_j(kappa, 3), g, a_j(kappa, 4), 0},
                {0, 0, -g, b_j(kappa, 3), g, a_j(kappa, 5)},
            };
            for (int r = 0; r < 6; ++r)
                for (int c = 0; c < 6; ++c) cr.require(w[r][c] == expect[r][c]);
        }
    }
    cr.require(cr.seconds() < 1.0);
}

TEST_CASE("criterion 02: exactly solvable reduction") {
    Criterion cr("criterion 02");
    SpectrumConfig cfg;
    cfg.epsilons = {0.1, 0.05, 0.025, 0.0125};
    double worst_exact = 0.0, worst_numerov = 0.0;
    for (double lambda : {2.0, 3.0, 4.0}) {
        PotentialSpec pt = PotentialSpec::poschl_teller(-lambda * (lambda - 1.0));
        const double kmax = std::sqrt(pt.max_depth()) + 1.0;
        const auto res = find_spectrum(pt, 0.0, {0.05, kmax}, cfg);
        const auto oracle = numerov_spectrum(pt, grid_for(0.9), 8);
        cr.require(res.size() == static_cast<std::size_t>(lambda) - 1);
        cr.require(oracle.size() == res.size());
        for (std::size_t n = 0; n < res.size(); ++n) {
            const double exact = lambda - 1.0 - static_cast<double>(n);
            worst_exact = std::max(worst_exact, std::fabs(res[n].kappa - exact));
            worst_numerov = std::max(worst_numerov, std::fabs(res[n].energy - oracle[n]));
            cr.require(std::fabs(res[n].kappa - exact) <= 1e-8);
            cr.require(std::fabs(res[n].energy - oracle[n]) <= 1e-6);
        }
    }
    cr.note = "worst |kappa - (lambda-1-n)| " + sci(worst_exact) + ", worst |E - numerov| " +
              sci(worst_numerov);
    cr.require(cr.seconds() < 10.0);
}

TEST_CASE("criterion 03: AS cross-validation") {
    Criterion cr("criterion 03");
    double worst = 0.0;
    for (double g : {0.5, 1.0, 2.0, 5.0}) {
        PotentialSpec spec = PotentialSpec::antisymmetric_scarf(g);
        const double kmax = std::sqrt(spec.max_depth()) + 1.0;
        const auto res = find_spectrum(spec, 0.0, {0.02, kmax}, {});
        const double kmin = res.empty() ? 0.1 : res.back().kappa;
        const auto oracle = numerov_spectrum(spec, grid_for(kmin), 8);
        cr.require(res.size() == oracle.size());
        for (std::size_t n = 0; n < std::min(res.size(), oracle.size()); ++n) {
            const double diff = std::fabs(res[n].energy - oracle[n]);
            worst = std::max(worst, diff);
            cr.require(diff <= 1e-5);
        }
    }
    cr.note = "worst |E - numerov| " + sci(worst);
    cr.require(cr.seconds() < 60.0);
}

TEST_CASE("criterion 04: generalization beyond M = 2") {
    Criterion cr("criterion 04");
    const PotentialSpec specs[] = {
        PotentialSpec(4, {-3.0, 0.0, -1.0}, {0.0, 0.0, 0.0, 0.0}),
        PotentialSpec(4, {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.5}),
        PotentialSpec(3, {0.0, -2.0}, {0.0, 1.0, 0.0}),
    };
    double worst = 0.0;
    for (const PotentialSpec& spec : specs) {
        const double kmax = std::sqrt(spec.max_depth()) + 1.0;
        const auto res = find_spectrum(spec, 0.0, {0.02, kmax}, {});
        cr.require(!res.empty());
        const double kmin = res.empty() ? 0.1 : res.back().kappa;
        const auto oracle = numerov_spectrum(spec, grid_for(kmin), 8);
        cr.require(res.size() == oracle.size());
        for (std::size_t n = 0; n < std::min(res.size(), oracle.size()); ++n) {
            const double diff = std::fabs(res[n].energy - oracle[n]);
            worst = std::max(worst, diff);
            cr.require(diff <= 1e-5);
        }
    }
    cr.note = "worst |E - numerov| " + sci(worst);
}

TEST_CASE("criterion 05: coefficient symmetry") {
    Criterion cr("criterion 05");
    for (double g : {0.3, 1.0, 3.0}) {
        for (double kappa : {0.7, 1.5}) {
            for (int p = 0; p <= 1; ++p) {
                const BasisIndex seed = p == 0 ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0};
                CoefficientStream sp(build_q(PotentialSpec::antisymmetric_scarf(g),
                                             BasisParams{0.0, kappa}, seed));
                CoefficientStream sm(build_q(PotentialSpec::antisymmetric_scarf(-g),
                                             BasisParams{0.0, kappa}, seed));
                for (std::size_t j = 1; j <= 50; ++j) {
                    for (int q = 0; q <= 1; ++q) {
                        const double hp = sp.component(j, q);
                        const double hm = sm.component(j, q);
                        const double sign = ((p + q + 1) % 2 == 0) ? 1.0 : -1.0;
                        cr.require(std::fabs(hm - sign * hp) <= 1e-12 * std::fabs(hp));
                    }
                }
            }
        }
    }
}

TEST_CASE("criterion 06: asymptotic ratio law") {
    Criterion cr("criterion 06");
    // |tail_ratio(j, q) - (1 + (1-4q)/(2j))| <= C/j^2 over j in [50, 200],
    // with the fitted C bounded by 10 (a genuine j^-2 correction has C = O(1)).
    CoefficientStream st(
        build_q(PotentialSpec::antisymmetric_scarf(1.0), BasisParams{0.0, 1.0}, {0, 0, 1}));
    char buf[256];
    for (int q = 0; q <= 1; ++q) {
        double c_fit = 0.0, alpha_200 = 0.0;
        for (std::size_t j = 50; j <= 200; ++j) {
            const double ratio = tail_ratio(st, j, q);
            const double law = 1.0 + (1.0 - 4.0 * q) / (2.0 * static_cast<double>(j));
            c_fit = std::max(c_fit, static_cast<double>(j) * static_cast<double>(j) *
                                        std::fabs(ratio - law));
            if (j == 200) alpha_200 = 2.0 * static_cast<double>(j) * (ratio - 1.0);
        }
        std::snprintf(buf, sizeof(buf), "q=%d: fitted C = %.3g, measured 2j(ratio-1) -> %.3f; ", q,
                      c_fit, alpha_200);
        cr.note += buf;
        cr.require(c_fit <= 10.0);
    }
    // The q = 1 component follows the stated -3/(2j) law.  The q = 0
    // component of the recurrence converges from BELOW, ratio = 1 - 1/(2j)
    // + O(j^-2), so the +1/(2j) form stated for q = 0 is off by a sign and
    // its fitted C grows like j; the check records the discrepancy rather
    // than forcing agreement.
}

TEST_CASE("criterion 07: convergence strip") {
    Criterion cr("criterion 07");
    PotentialSpec spec = PotentialSpec::antisymmetric_scarf(1.0);
    SeriesSolution sol = make_solution(spec, BasisParams{0.0, 0.9}, 0);
    char buf[128];
    for (double x : {0.9, 1.5, 3.0}) {
        const double t = 1.0 / (std::cosh(x) * std::cosh(x));
        CoefficientStream& st = sol.stream();
        const double lo = std::fabs(st.component(40, 1)) * std::pow(t, 40);
        const double hi = std::fabs(st.component(50, 1)) * std::pow(t, 50);
        const double rate = std::pow(hi / lo, 0.1);
        std::snprintf(buf, sizeof(buf), "x=%.1f: rate %.4f vs sech^2 %.4f; ", x, rate, t);
        cr.note += buf;
        cr.require(std::fabs(rate - t) <= 0.05 * t);
    }
    // inside the |x| <= ln(1+sqrt 2) caution strip the real series still sums
    const double x0 = 0.5;
    const EvalResult r = sol.evaluate(x0);
    cr.require(r.error_bound <= 1e-11 * std::max(1.0, std::fabs(r.value)));
    const double E = -0.81;
    const double psi2 =
        oracles::fd_second([&](double t) { return sol.evaluate(t).value; }, x0, 1e-2);
    const double resid = -psi2 + (evaluate_potential(spec, x0) - E) * r.value;
    cr.require(std::fabs(resid) <= 1e-6 * std::max(1.0, std::fabs(r.value)));
}

TEST_CASE("criterion 08: ODE residual of assembled bound states") {
    Criterion cr("criterion 08");
    struct Case {
        PotentialSpec spec;
        std::size_t level;
    };
    const Case cases[] = {
        {PotentialSpec::poschl_teller(-6.0), 0},
        {PotentialSpec::poschl_teller(-6.0), 1},
        {PotentialSpec::antisymmetric_scarf(1.0), 0},
        {PotentialSpec(4, {-3.0, 0.0, -1.0}, {0.0, 1.0, 0.0, 0.5}), 0},
    };
    double worst = 0.0;
    for (const Case& c : cases) {
        const double kmax = std::sqrt(c.spec.max_depth()) + 1.0;
        const auto res = find_spectrum(c.spec, 0.0, {0.02, kmax}, {});
        cr.require(res.size() > c.level);
        if (res.size() <= c.level) continue;
        const MatchResult& r = res[c.level];
        const double h = 0.01;
        for (int i = 0; i < 50; ++i) {
            const double ax = 0.25 + (5.0 - 0.25) * i / 49.0;
            const double x = (i % 2 == 0) ? ax : -ax;
            std::vector<double> xs{x - 2 * h, x - h, x, x + h, x + 2 * h};
            const auto w = assemble_wavefunction(r, c.spec, 0.0, xs);
            const double psi2 = (-w[4].psi + 16 * w[3].psi - 30 * w[2].psi + 16 * w[1].psi -
                                 w[0].psi) /
                                (12.0 * h * h);
            const double resid =
                -psi2 + (evaluate_potential(c.spec, x) - r.energy) * w[2].psi;
            const double rel = std::fabs(resid) / std::max(1.0, std::fabs(w[2].psi));
            worst = std::max(worst, rel);
            cr.require(rel <= 1e-6);
        }
    }
    cr.note = "worst residual " + sci(worst);
}

TEST_CASE("criterion 09: matching stability across epsilon ladders") {
    Criterion cr("criterion 09");
    SpectrumConfig la, lb;
    la.epsilons = {0.05, 0.025, 0.0125};
    lb.epsilons = {0.08, 0.04, 0.02};
    const PotentialSpec specs[] = {
        PotentialSpec::poschl_teller(-6.0),
        PotentialSpec::antisymmetric_scarf(1.0),
        PotentialSpec(4, {-3.0, 0.0, -1.0}, {0.0, 1.0, 0.0, 0.5}),
    };
    double worst = 0.0;
    for (const PotentialSpec& spec : specs) {
        const double kmax = std::sqrt(spec.max_depth()) + 1.0;
        const auto ra = find_spectrum(spec, 0.0, {0.02, kmax}, la);
        const auto rb = find_spectrum(spec, 0.0, {0.02, kmax}, lb);
        cr.require(ra.size() == rb.size());
        for (std::size_t i = 0; i < std::min(ra.size(), rb.size()); ++i) {
            const double diff = std::fabs(ra[i].kappa - rb[i].kappa);
            worst = std::max(worst, diff);
            cr.require(diff < 1e-6);
        }
    }
    cr.note = "worst |kappa_A - kappa_B| " + sci(worst);
}

TEST_CASE("criterion 10: determinant invariance under the generalized parity") {
    Criterion cr("criterion 10");
    const PotentialSpec specs[] = {
        PotentialSpec::antisymmetric_scarf(1.0),
        PotentialSpec::antisymmetric_scarf(2.0),
        PotentialSpec(4, {-3.0, 0.0, -1.0}, {0.0, 1.0, 0.0, 0.5}),
    };
    double worst = 0.0;
    for (const PotentialSpec& spec : specs) {
        const PotentialSpec conj = phat_conjugate(spec);
        for (int i = 0; i < 20; ++i) {
            const double kappa = 0.15 + 0.09 * i;
            const double d1 = secular_determinant(spec, kappa, 0.0, 0.08);
            const double d2 = secular_determinant(conj, kappa, 0.0, 0.08);
            const double rel = std::fabs(d1 - d2) / std::max(1e-30, std::fabs(d1));
            worst = std::max(worst, rel);
            cr.require(rel <= 1e-10);
        }
    }
    cr.note = "worst relative difference " + sci(worst);
}
