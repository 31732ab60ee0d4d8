#include "hyperbound/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperbound {

PotentialSpec::PotentialSpec(int order, std::vector<double> f, std::vector<double> g)
    : order_(order), f_(std::move(f)), g_(std::move(g)) {
    if (order_ < 2)
        throw std::invalid_argument("PotentialSpec: order M must be >= 2");
    if (f_.size() != static_cast<size_t>(order_ - 1))
        throw std::invalid_argument("PotentialSpec: f must hold f_2..f_M");
    if (g_.size() != static_cast<size_t>(order_))
        throw std::invalid_argument("PotentialSpec: g must hold g_1..g_M");
    for (double c : f_)
        if (!std::isfinite(c)) throw std::invalid_argument("PotentialSpec: non-finite f coupling");
    for (double c : g_)
        if (!std::isfinite(c)) throw std::invalid_argument("PotentialSpec: non-finite g coupling");
}

bool PotentialSpec::is_symmetric() const {
    return std::all_of(g_.begin(), g_.end(), [](double c) { return c == 0.0; });
}

bool PotentialSpec::is_antisymmetric() const {
    return std::all_of(f_.begin(), f_.end(), [](double c) { return c == 0.0; });
}

double PotentialSpec::max_coupling() const {
    double m = 0.0;
    for (double c : f_) m = std::max(m, std::fabs(c));
    for (double c : g_) m = std::max(m, std::fabs(c));
    return m;
}

double evaluate_potential(const PotentialSpec& spec, double x) {
    const int M = spec.order();
    const double ax = std::fabs(x);

    if (ax <= 20.0) {
        const double sech = 1.0 / std::cosh(x);
        const double sh = std::sinh(x);
        double v = 0.0;
        double p = sech; // sech^1
        for (int n = 1; n <= M; ++n) {
            if (n >= 2) v += spec.f(n) * p;
            v += spec.g(n) * sh * p;
            p *= sech;
        }
        return v;
    }

    // Large |x|: cosh^m overflows, so factor out e^{-|x|} powers.
    //   sech(x)   = 2 e^{-|x|} / (1 + u),   u = e^{-2|x|}
    //   sinh(x)   = sign(x) e^{|x|} (1 - u) / 2
    // so sinh(x) * sech^n(x) = sign(x) 2^{n-1} e^{-(n-1)|x|} (1-u) / (1+u)^n.
    const double u = std::exp(-2.0 * ax);
    const double e = std::exp(-ax);
    const double sgn = (x >= 0.0) ? 1.0 : -1.0;
    double v = 0.0;
    double en = 1.0;         // e^{-(n-1)|x|}
    double two_nm1 = 1.0;    // 2^{n-1}
    double inv1pu_n = 1.0 / (1.0 + u); // (1+u)^{-n}
    for (int n = 1; n <= M; ++n) {
        if (n >= 2) {
            // f_n * sech^n = f_n 2^n e^{-n|x|} (1+u)^{-n}
            v += spec.f(n) * (2.0 * two_nm1) * (en * e) * inv1pu_n;
        }
        v += spec.g(n) * sgn * two_nm1 * en * (1.0 - u) * inv1pu_n;
        en *= e;
        two_nm1 *= 2.0;
        inv1pu_n /= (1.0 + u);
    }
    return v;
}

double PotentialSpec::max_depth() const {
    // |V| is maximized well inside |x| < 15 for all members of the family.
    double best = 0.0;
    double best_x = 0.0;
    const int n = 3001;
    for (int i = 0; i < n; ++i) {
        const double x = -15.0 + 30.0 * i / (n - 1);
        const double v = std::fabs(evaluate_potential(*this, x));
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    // local refinement by ternary search
    double lo = best_x - 0.02, hi = best_x + 0.02;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (std::fabs(evaluate_potential(*this, m1)) < std::fabs(evaluate_potential(*this, m2)))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, std::fabs(evaluate_potential(*this, 0.5 * (lo + hi))));
}

ParitySplit parity_split(const PotentialSpec& spec) {
    const int M = spec.order();
    std::vector<double> f(static_cast<size_t>(M - 1), 0.0);
    std::vector<double> g(static_cast<size_t>(M), 0.0);
    for (int m = 2; m <= M; ++m) f[static_cast<size_t>(m - 2)] = spec.f(m);
    PotentialSpec sym(M, f, std::vector<double>(static_cast<size_t>(M), 0.0));
    for (int n = 1; n <= M; ++n) g[static_cast<size_t>(n - 1)] = spec.g(n);
    PotentialSpec asym(M, std::vector<double>(static_cast<size_t>(M - 1), 0.0), g);
    return {sym, asym};
}

PotentialSpec phat_conjugate(const PotentialSpec& spec) {
    const int M = spec.order();
    std::vector<double> f(static_cast<size_t>(M - 1));
    std::vector<double> g(static_cast<size_t>(M));
    for (int m = 2; m <= M; ++m) f[static_cast<size_t>(m - 2)] = spec.f(m);
    for (int n = 1; n <= M; ++n) g[static_cast<size_t>(n - 1)] = -spec.g(n);
    return PotentialSpec(M, std::move(f), std::move(g));
}

} // namespace hyperbound
