#include "hyperbound/matching.hpp"

#include "hyperbound/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

namespace hyperbound {

namespace {

struct StrippedSums {
    double odd_value = 0.0;  // q = 0 kets, weight 1
    double even_value = 0.0; // q = 1 kets, weight 1
    double even_sigma = 0.0; // q = 1 kets, weight sigma
};

// a = 0: accumulate the stripped t-series of one stream.
StrippedSums accumulate_stripped(CoefficientStream& st, double t, double tol,
                                 std::size_t max_terms) {
    StrippedSums out;
    QMatrix& qm = st.q();
    const double kappa = qm.params().kappa;
    const double tail = t / (1.0 - t);
    double tpow = 1.0;
    int cur_n = 0;
    int below = 0;
    for (std::size_t n = 0;; ++n) {
        if (n >= max_terms)
            throw SlowConvergence("matching series hit max_terms at t = " + std::to_string(t));
        const std::vector<double>& f = st.coefficient(n);
        const std::size_t start = qm.block_start(n);
        double blk_v = 0.0, blk_s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const BasisIndex k = qm.ket(start + i);
            while (cur_n < k.n) {
                tpow *= t;
                ++cur_n;
            }
            const double term = f[i] * tpow;
            const double at = std::fabs(term);
            blk_v = std::max(blk_v, at);
            if (k.q == 0) {
                out.odd_value += term;
            } else {
                const double sigma = kappa + 2.0 * k.n + k.p;
                out.even_value += term;
                out.even_sigma += term * sigma;
                blk_s = std::max(blk_s, at * sigma);
            }
        }
        // per-series geometric tail bounds, each relative to its own scale
        const bool ok_v = blk_v * tail <= tol * std::max({1.0, std::fabs(out.odd_value),
                                                          std::fabs(out.even_value)});
        const bool ok_s = blk_s * tail <= tol * std::max(1.0, std::fabs(out.even_sigma));
        if (n >= 2 && ok_v && ok_s) {
            if (++below >= 2) break;
        } else {
            below = 0;
        }
    }
    return out;
}

struct DirectSums {
    double v_plus = 0.0, v_minus = 0.0;
    double d_plus = 0.0, d_minus = 0.0;
};

// a != 0: evaluate phi and phi' at +-eps in one pass over the stream.
DirectSums accumulate_direct(CoefficientStream& st, double eps, double tol,
                             std::size_t max_terms) {
    DirectSums out;
    QMatrix& qm = st.q();
    const BasisParams& par = qm.params();
    const double kappa = par.kappa, a = par.a;

    const double ch = std::cosh(eps);
    const double sh = std::sinh(eps);
    const double th = sh / ch;
    const double sech = 1.0 / ch;
    const double t = sech * sech;
    const double gd = std::asin(th);
    const double lc = std::log(ch);
    // bases at +eps and -eps for p = 0, 1
    double bp_pos[2] = {std::exp(-kappa * lc + a * gd), std::exp(-(kappa + 1.0) * lc + a * gd)};
    double bp_neg[2] = {std::exp(-kappa * lc - a * gd), std::exp(-(kappa + 1.0) * lc - a * gd)};

    const double tail = t / (1.0 - t);
    double tpow = 1.0;
    int cur_n = 0;
    int below = 0;
    for (std::size_t n = 0;; ++n) {
        if (n >= max_terms)
            throw SlowConvergence("matching series hit max_terms at eps = " + std::to_string(eps));
        const std::vector<double>& f = st.coefficient(n);
        const std::size_t start = qm.block_start(n);
        double blk_v = 0.0, blk_d = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const BasisIndex k = qm.ket(start + i);
            while (cur_n < k.n) {
                tpow *= t;
                ++cur_n;
            }
            const double sigma = kappa + 2.0 * k.n + k.p;
            const double up = f[i] * bp_pos[k.p] * tpow;
            const double um = f[i] * bp_neg[k.p] * tpow;
            blk_v = std::max({blk_v, std::fabs(up), std::fabs(um)});
            blk_d = std::max(blk_d, std::max(std::fabs(up), std::fabs(um)) * (sigma + 1.0));
            if (k.q == 1) {
                out.v_plus += up;
                out.v_minus += um;
                out.d_plus += up * (-sigma * th + a * sech);
                out.d_minus += um * (sigma * th + a * sech);
            } else {
                out.v_plus += up * sh;
                out.v_minus += um * (-sh);
                out.d_plus += up * ch * (1.0 - sigma * th * th + a * th * sech);
                out.d_minus += um * ch * (1.0 - sigma * th * th - a * th * sech);
            }
        }
        const bool ok_v = blk_v * tail <= tol * std::max({1.0, std::fabs(out.v_plus),
                                                          std::fabs(out.v_minus)});
        const bool ok_d = blk_d * tail <= tol * std::max({1.0, std::fabs(out.d_plus),
                                                          std::fabs(out.d_minus)});
        if (n >= 2 && ok_v && ok_d) {
            if (++below >= 2) break;
        } else {
            below = 0;
        }
    }
    return out;
}

// Shared per-kappa state: the two Jost streams.
struct MatchContext {
    std::shared_ptr<CoefficientStream> st0, st1;

    MatchContext(const PotentialSpec& spec, const BasisParams& par) {
        st0 = std::make_shared<CoefficientStream>(build_q(spec, par, BasisIndex{0, 0, 1}), false);
        st1 = std::make_shared<CoefficientStream>(build_q(spec, par, BasisIndex{0, 1, 0}), false);
    }

    MatchComponents components(double eps, double tol, std::size_t max_terms) {
        MatchComponents mc;
        mc.epsilon = eps;
        const double sech = 1.0 / std::cosh(eps);
        mc.t = sech * sech;
        const BasisParams& par = st0->q().params();
        if (par.a == 0.0) {
            const StrippedSums p0 = accumulate_stripped(*st0, mc.t, tol, max_terms);
            const StrippedSums p1 = accumulate_stripped(*st1, mc.t, tol, max_terms);
            mc.s_tilde = p0.odd_value;
            mc.s = p1.odd_value;
            mc.S = p0.even_sigma;
            mc.S_tilde = p1.even_sigma;
            mc.c = p0.even_value;
            mc.c_tilde = p1.even_value;
            const double kappa = par.kappa;
            const double sh = std::sinh(eps);
            mc.C_tilde = -sh * std::pow(sech, 1.0) * std::exp(-kappa * std::log(std::cosh(eps))) * p0.even_sigma;
            mc.C = -sh * sech * sech * std::exp(-kappa * std::log(std::cosh(eps))) * p1.even_sigma;
        } else {
            const DirectSums p0 = accumulate_direct(*st0, eps, tol, max_terms);
            const DirectSums p1 = accumulate_direct(*st1, eps, tol, max_terms);
            mc.s_tilde = 0.5 * (p0.v_plus - p0.v_minus);
            mc.s = 0.5 * (p1.v_plus - p1.v_minus);
            mc.S = 0.5 * (p0.d_plus - p0.d_minus);
            mc.S_tilde = 0.5 * (p1.d_plus - p1.d_minus);
            mc.c = 0.5 * (p0.v_plus + p0.v_minus);
            mc.c_tilde = 0.5 * (p1.v_plus + p1.v_minus);
            mc.C_tilde = 0.5 * (p0.d_plus + p0.d_minus);
            mc.C = 0.5 * (p1.d_plus + p1.d_minus);
        }
        return mc;
    }

    // Determinant scaled by the squared Frobenius norm: same zero set,
    // smooth in kappa, bounded scale.
    static double det_norm(const MatchComponents& mc) {
        const double det = mc.s_tilde * mc.S_tilde - mc.s * mc.S;
        const double f2 = mc.s_tilde * mc.s_tilde + mc.s * mc.s + mc.S * mc.S +
                          mc.S_tilde * mc.S_tilde;
        return det / std::max(f2, 1e-300);
    }

    // Conditioning of the secular matrix: sigma_min / sigma_max, -> 0 at a root.
    static double singularity_ratio(const MatchComponents& mc) {
        const double a11 = mc.s_tilde, a12 = mc.s, a21 = mc.S, a22 = mc.S_tilde;
        const double t2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double det = a11 * a22 - a12 * a21;
        const double disc = std::sqrt(std::max(0.0, t2 * t2 - 4.0 * det * det));
        const double smax2 = 0.5 * (t2 + disc);
        const double smin2 = 0.5 * (t2 - disc);
        if (smax2 <= 0.0) return 0.0;
        return std::sqrt(std::max(0.0, smin2) / smax2);
    }
};

double neville_at_zero(const std::vector<double>& u, std::vector<double> y) {
    const std::size_t n = u.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            y[i] = (u[i + m] * y[i] - u[i] * y[i + 1]) / (u[i + m] - u[i]);
    return y[0];
}

// Brent zeroin on a bracketing interval.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb, double tol) {
    double c = a, fc = fa, d = b - a, e = d;
    while (fb != 0.0) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double xm = 0.5 * (c - b);
        const double tol1 = 2.0 * 2.22e-16 * std::fabs(b) + 0.5 * tol;
        if (std::fabs(xm) <= tol1 || fb == 0.0) break;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return b;
}

unsigned worker_count(unsigned requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned cap = std::min(hw, 8u);
    if (const char* env = std::getenv("HYPERBOUND_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) cap = static_cast<unsigned>(std::min<long>(v, 64));
    }
    if (requested >= 1) cap = requested;
    return std::max(1u, cap);
}

} // namespace

MatchComponents components_at(const PotentialSpec& spec, const BasisParams& params, double epsilon,
                              double series_tol, std::size_t max_terms) {
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw std::invalid_argument("components_at: need 0 < epsilon <= 0.5");
    MatchContext ctx(spec, params);
    return ctx.components(epsilon, series_tol, max_terms);
}

double secular_determinant(const PotentialSpec& spec, double kappa, double a, double epsilon,
                           double series_tol, std::size_t max_terms) {
    if (kappa <= 0.0) throw std::invalid_argument("secular_determinant: kappa must be > 0");
    const MatchComponents mc = components_at(spec, BasisParams{a, kappa}, epsilon, series_tol, max_terms);
    return mc.s_tilde * mc.S_tilde - mc.s * mc.S;
}

std::vector<MatchResult> find_spectrum(const PotentialSpec& spec, double a,
                                       std::pair<double, double> kappa_range,
                                       const SpectrumConfig& config) {
    if (config.grid_points < 32) throw std::invalid_argument("find_spectrum: grid_points >= 32");
    if (config.epsilons.empty()) throw std::invalid_argument("find_spectrum: empty epsilon ladder");
    std::vector<double> eps = config.epsilons;
    for (double e : eps)
        if (!(e > 0.0 && e <= 0.5)) throw std::invalid_argument("find_spectrum: epsilons in (0, 0.5]");
    for (std::size_t i = 1; i < eps.size(); ++i)
        if (eps[i] >= eps[i - 1])
            throw std::invalid_argument("find_spectrum: epsilons must be strictly decreasing");

    if (config.refine_ladder) eps.push_back(0.5 * eps.back());

    const double klo = std::max(kappa_range.first, 1e-4);
    const double khi = kappa_range.second;
    if (!(khi > klo)) throw std::invalid_argument("find_spectrum: bad kappa range");

    const std::size_t npts = config.grid_points;
    std::vector<double> ks(npts);
    for (std::size_t i = 0; i < npts; ++i)
        ks[i] = klo + (khi - klo) * static_cast<double>(i) / static_cast<double>(npts - 1);

    auto det_at = [&](double kappa, double e) {
        MatchContext ctx(spec, BasisParams{a, kappa});
        return MatchContext::det_norm(ctx.components(e, config.series_tol, config.max_terms));
    };

    // scan the determinant on the grid at the largest epsilon only (the
    // cheapest member of the ladder); roots at smaller epsilons are then
    // re-bracketed locally around the previous ladder step
    std::vector<double> det0(npts, 0.0);
    {
        const unsigned workers = worker_count(config.threads);
        std::atomic<std::size_t> next{0};
        auto run = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= npts) return;
                det0[i] = det_at(ks[i], eps.front());
            }
        };
        if (workers <= 1) {
            run();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
            for (std::thread& th : pool) th.join();
        }
    }

    const double noise_floor = 1e-9;

    struct Ladder {
        std::size_t bracket = 0;   // grid cell of the sign change
        std::vector<double> kappa; // per epsilon
        bool complete = true;
    };
    std::vector<Ladder> ladders;
    for (std::size_t i = 0; i + 1 < npts; ++i) {
        const double dl = det0[i], dr = det0[i + 1];
        if (!(dl * dr < 0.0)) continue;
        if (std::max(std::fabs(dl), std::fabs(dr)) < noise_floor) continue; // degenerate columns
        Ladder lad;
        lad.bracket = i;
        ladders.push_back(std::move(lad));
    }

    auto walk_ladder = [&](Ladder& lad) {
        const std::size_t i = lad.bracket;
        double root = brent_root([&](double k) { return det_at(k, eps.front()); }, ks[i], ks[i + 1],
                                 det0[i], det0[i + 1], config.tol);
        lad.kappa.push_back(root);
        for (std::size_t e = 1; e < eps.size() && lad.complete; ++e) {
            // predict the next rung from the rungs found so far, then bracket
            // locally; the bracket width follows the prediction uncertainty
            double center = root;
            double delta = std::max({0.8 * (std::tanh(eps[e - 1]) - std::tanh(eps[e])),
                                     4.0 * config.tol, 1e-5});
            if (e >= 2) {
                std::vector<double> uu(e), yy(lad.kappa);
                for (std::size_t k = 0; k < e; ++k) uu[k] = std::tanh(eps[k]) - std::tanh(eps[e]);
                center = neville_at_zero(uu, yy);
                std::vector<double> uu2(uu.begin() + 1, uu.end());
                std::vector<double> yy2(lad.kappa.begin() + 1, lad.kappa.end());
                const double center2 = neville_at_zero(uu2, yy2);
                const double factor = (e == 2) ? 0.25 : 0.6;
                delta = std::max({factor * std::fabs(center - center2), 100.0 * config.tol, 1e-9});
            }
            bool bracketed = false;
            for (int attempt = 0; attempt < 10 && !bracketed; ++attempt, delta *= 4.0) {
                const double lo = std::max(center - delta, 0.5 * klo);
                const double hi = center + delta;
                const double flo = det_at(lo, eps[e]);
                const double fhi = det_at(hi, eps[e]);
                if (flo * fhi < 0.0) {
                    root = brent_root([&](double k) { return det_at(k, eps[e]); }, lo, hi, flo, fhi,
                                      config.tol);
                    lad.kappa.push_back(root);
                    bracketed = true;
                }
            }
            if (!bracketed) lad.complete = false;
        }
    };
    {
        const unsigned workers = worker_count(config.threads);
        if (workers <= 1 || ladders.size() <= 1) {
            for (Ladder& lad : ladders) walk_ladder(lad);
        } else {
            std::atomic<std::size_t> next{0};
            auto run = [&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= ladders.size()) return;
                    walk_ladder(ladders[i]);
                }
            };
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < std::min<std::size_t>(workers, ladders.size()); ++w)
                pool.emplace_back(run);
            for (std::thread& th : pool) th.join();
        }
    }

    std::vector<MatchResult> out;
    for (const Ladder& lad : ladders) {
        if (!lad.complete) continue;
        const std::vector<double>& ladder = lad.kappa;

        std::vector<double> u(eps.size());
        for (std::size_t e = 0; e < eps.size(); ++e) u[e] = std::tanh(eps[e]);
        const double k_full = neville_at_zero(u, ladder);
        double spread = 0.0;
        if (eps.size() >= 2) {
            const std::vector<double> u2(u.begin() + 1, u.end());
            const std::vector<double> l2(ladder.begin() + 1, ladder.end());
            spread = std::fabs(k_full - neville_at_zero(u2, l2));
        }
        // The sub-ladder disagreement carries the structural next-order term,
        // so instability is judged against the kappa scale, and by the ladder
        // corrections failing to shrink as eps halves.
        bool unstable = spread > std::max(100.0 * config.tol, 0.02 * std::max(std::fabs(k_full), 0.5));
        for (std::size_t e = 2; e + 1 <= eps.size() && !unstable; ++e) {
            const double d_prev = std::fabs(ladder[e - 1] - ladder[e - 2]);
            const double d_cur = std::fabs(ladder[e] - ladder[e - 1]);
            if (d_cur > d_prev + 10.0 * config.tol) unstable = true;
        }
        if (unstable)
            throw ExtrapolationUnstable("kappa(eps) ladder is not converging (spread " +
                                        std::to_string(spread) + ")");

        MatchResult res;
        res.kappa = k_full;
        res.energy = -k_full * k_full;
        res.epsilon_used = eps.back();
        res.extrapolation_spread = spread;
        res.near_threshold = (k_full < 10.0 * config.tol);

        // The null direction of the secular matrix carries the same O(eps)
        // matching bias as the root, so extrapolate it down the same ladder
        // (per rung, at that rung's own root).
        std::vector<double> w0s(eps.size()), w1s(eps.size());
        for (std::size_t e = 0; e < eps.size(); ++e) {
            MatchContext ctx(spec, BasisParams{a, ladder[e]});
            const MatchComponents mc = ctx.components(eps[e], config.series_tol, config.max_terms);
            const double r1 = std::hypot(mc.s_tilde, mc.s);
            const double r2 = std::hypot(mc.S, mc.S_tilde);
            double w0, w1;
            if (r1 >= r2) {
                w0 = mc.s;
                w1 = -mc.s_tilde;
            } else {
                w0 = mc.S_tilde;
                w1 = -mc.S;
            }
            const double norm = std::hypot(w0, w1);
            if (norm > 0.0) {
                w0 /= norm;
                w1 /= norm;
            }
            if (e > 0 && w0 * w0s[e - 1] + w1 * w1s[e - 1] < 0.0) {
                w0 = -w0;
                w1 = -w1;
            }
            w0s[e] = w0;
            w1s[e] = w1;
        }
        double w0 = neville_at_zero(u, w0s);
        double w1 = neville_at_zero(u, w1s);
        const double wmax = std::max(std::fabs(w0), std::fabs(w1));
        if (wmax > 0.0) {
            w0 /= wmax;
            w1 /= wmax;
        }
        if (w0 < 0.0 || (w0 == 0.0 && w1 < 0.0)) {
            w0 = -w0;
            w1 = -w1;
        }
        // wipe parasitic admixtures below the extrapolation floor
        if (std::fabs(w0) < 1e-9) w0 = 0.0;
        if (std::fabs(w1) < 1e-9) w1 = 0.0;
        res.mixing_M = w0;
        res.mixing_N = w1;

        MatchContext ctx(spec, BasisParams{a, std::max(k_full, 1e-6)});
        res.residual = MatchContext::singularity_ratio(
            ctx.components(eps.back(), config.series_tol, config.max_terms));
        out.push_back(res);
    }

    std::sort(out.begin(), out.end(),
              [](const MatchResult& x, const MatchResult& y) { return x.kappa > y.kappa; });
    // merge near-duplicates
    std::vector<MatchResult> dedup;
    for (const MatchResult& r : out)
        if (dedup.empty() || std::fabs(dedup.back().kappa - r.kappa) > std::max(10.0 * config.tol, 1e-9))
            dedup.push_back(r);
    return dedup;
}

std::vector<WavefunctionSample> assemble_wavefunction(const MatchResult& result,
                                                      const PotentialSpec& spec, double a,
                                                      const std::vector<double>& xs,
                                                      double series_tol, std::size_t max_terms) {
    const BasisParams par{a, result.kappa};
    const Truncation tr{series_tol, max_terms};
    SeriesSolution phi0 = make_solution(spec, par, 0, tr);
    SeriesSolution phi1 = make_solution(spec, par, 1, tr);
    std::vector<WavefunctionSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        const EvalResult e0 = phi0.evaluate(x);
        const EvalResult e1 = phi1.evaluate(x);
        WavefunctionSample s;
        s.x = x;
        s.psi = result.mixing_M * e0.value + result.mixing_N * e1.value;
        s.dpsi = result.mixing_M * e0.derivative + result.mixing_N * e1.derivative;
        out.push_back(s);
    }
    return out;
}

} // namespace hyperbound
