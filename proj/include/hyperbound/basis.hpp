#pragma once

#include <cstdint>

namespace hyperbound {

// Index triple of one basis function
//
//   xi_{n,p,q}(x) = sinh^{1-q}(x) cosh^{-(kappa+2n+p)}(x) exp(a * arctan(sinh x))
//
// with composite index mu = 4n + 2p + q >= 1; (0,0,0) is excluded.
struct BasisIndex {
    int n = 0;
    int p = 0; // 0 or 1
    int q = 0; // 0 or 1

    long mu() const { return 4L * n + 2L * p + q; }

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

long mu_index(int n, int p, int q);          // rejects (0,0,0) and bad ranges
BasisIndex basis_from_mu(long mu);           // inverse of mu_index, mu >= 1

struct BasisParams {
    double a = 0.0;
    double kappa = 1.0; // > 0, E = -kappa^2
};

// sigma(n,p) = kappa + 2n + p, the cosh exponent of the basis function
double sigma_of(const BasisIndex& idx, const BasisParams& params);

double eval_basis(const BasisIndex& idx, const BasisParams& params, double x);
double eval_basis_derivative(const BasisIndex& idx, const BasisParams& params, double x);
double eval_basis_second_derivative(const BasisIndex& idx, const BasisParams& params, double x);

} // namespace hyperbound
