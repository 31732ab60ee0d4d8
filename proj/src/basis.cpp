#include "hyperbound/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperbound {

long mu_index(int n, int p, int q) {
    if (n < 0 || p < 0 || p > 1 || q < 0 || q > 1)
        throw std::invalid_argument("mu_index: need n >= 0 and p, q in {0,1}");
    if (n == 0 && p == 0 && q == 0)
        throw std::invalid_argument("mu_index: (0,0,0) is excluded, numbering starts at mu = 1");
    return 4L * n + 2L * p + q;
}

BasisIndex basis_from_mu(long mu) {
    if (mu < 1) throw std::invalid_argument("basis_from_mu: mu must be >= 1");
    BasisIndex idx;
    idx.n = static_cast<int>(mu / 4);
    idx.p = static_cast<int>((mu % 4) / 2);
    idx.q = static_cast<int>(mu % 2);
    return idx;
}

double sigma_of(const BasisIndex& idx, const BasisParams& params) {
    return params.kappa + 2.0 * idx.n + idx.p;
}

namespace {

inline double ln_cosh(double x) {
    const double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - M_LN2;
}

inline double gudermann(double x) { return std::asin(std::tanh(x)); }

} // namespace

double eval_basis(const BasisIndex& idx, const BasisParams& params, double x) {
    const double sigma = sigma_of(idx, params);
    const double lc = ln_cosh(x);
    const double gd = gudermann(x);
    if (idx.q == 1)
        return std::exp(-sigma * lc + params.a * gd);
    if (x == 0.0) return 0.0;
    const double ax = std::fabs(x);
    if (ax > 30.0) {
        // sinh(x) = sign(x) e^{|x|} (1 - e^{-2|x|}) / 2, folded into the exponent
        const double sgn = (x > 0.0) ? 1.0 : -1.0;
        return sgn * std::exp(ax - M_LN2 - sigma * lc + params.a * gd) * (1.0 - std::exp(-2.0 * ax));
    }
    return std::sinh(x) * std::exp(-sigma * lc + params.a * gd);
}

double eval_basis_derivative(const BasisIndex& idx, const BasisParams& params, double x) {
    const double sigma = sigma_of(idx, params);
    const double th = std::tanh(x);
    const double sech = 1.0 / std::cosh(std::fabs(x) > 700.0 ? 700.0 : x); // domain guard
    if (idx.q == 1) {
        const double xi = eval_basis(idx, params, x);
        return xi * (-sigma * th + params.a * sech);
    }
    // d/dx [sinh cosh^{-sigma} e^{a gd}] = cosh^{1-sigma} e^{a gd} (1 - sigma th^2 + a th sech)
    const double lc = ln_cosh(x);
    const double core = std::exp((1.0 - sigma) * lc + params.a * gudermann(x));
    return core * (1.0 - sigma * th * th + params.a * th * sech);
}

double eval_basis_second_derivative(const BasisIndex& idx, const BasisParams& params, double x) {
    const double sigma = sigma_of(idx, params);
    const double a = params.a;
    const double th = std::tanh(x);
    const double sech = 1.0 / std::cosh(x);
    if (idx.q == 1) {
        const double xi = eval_basis(idx, params, x);
        const double L = -sigma * th + a * sech;
        const double Lp = -sigma * sech * sech - a * sech * th;
        return xi * (L * L + Lp);
    }
    const double lc = ln_cosh(x);
    const double core = std::exp((1.0 - sigma) * lc + a * gudermann(x));
    const double B = 1.0 - sigma * th * th + a * th * sech;
    const double Bp = -2.0 * sigma * th * sech * sech + a * (sech * sech * sech - th * th * sech);
    return core * (a * sech * B + (1.0 - sigma) * th * B + Bp);
}

} // namespace hyperbound
