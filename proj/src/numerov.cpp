#include "hyperbound/numerov.hpp"

#include "hyperbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperbound {

namespace {

struct Sweep {
    std::vector<double> psi;
    int nodes = 0;
};

void check_grid(const GridConfig& grid) {
    if (grid.points < 2001 || grid.points % 2 == 0)
        throw std::invalid_argument("GridConfig: points must be odd and >= 2001");
    if (std::fabs(grid.match_point) >= grid.half_width)
        throw std::invalid_argument("GridConfig: match_point must be interior");
}

// Numerov sweep from the left across the whole grid; counts sign changes.
int count_nodes(const std::vector<double>& w, double h, double E) {
    // w holds V(x_i); f_i = V_i - E so psi'' = f psi
    const std::size_t n = w.size();
    const double h2 = h * h / 12.0;
    const double kap = std::sqrt(std::max(1e-12, -E));
    double pm1 = 1e-20;
    double p0 = pm1 * std::exp(kap * h);
    int nodes = 0;
    for (std::size_t i = 2; i < n; ++i) {
        const double f2 = w[i - 2] - E, f1 = w[i - 1] - E, f0 = w[i] - E;
        double p1 = ((2.0 + 10.0 * h2 * f1) * p0 - (1.0 - h2 * f2) * pm1) / (1.0 - h2 * f0);
        if ((p1 < 0.0) != (p0 < 0.0) && p0 != 0.0) ++nodes;
        pm1 = p0;
        p0 = p1;
        const double mag = std::fabs(p0);
        if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
            const double s = (mag > 1e100) ? 1e-100 : 1e100;
            pm1 *= s;
            p0 *= s;
        }
    }
    return nodes;
}

std::vector<double> tabulate(const PotentialSpec& spec, const GridConfig& grid) {
    const std::size_t n = grid.points;
    std::vector<double> w(n);
    const double L = grid.half_width;
    const double h = 2.0 * L / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) w[i] = evaluate_potential(spec, -L + h * static_cast<double>(i));
    return w;
}

} // namespace

std::vector<double> numerov_spectrum(const PotentialSpec& spec, const GridConfig& grid,
                                     std::size_t max_levels) {
    check_grid(grid);
    if (max_levels == 0) return {};

    const std::vector<double> w = tabulate(spec, grid);
    const double h = 2.0 * grid.half_width / static_cast<double>(grid.points - 1);

    const double depth = spec.max_depth();
    if (depth == 0.0) return {};
    const double e_lo = -1.05 * depth - 0.1;
    const double e_hi = -1e-9;

    const int n_total = std::min<int>(static_cast<int>(max_levels), count_nodes(w, h, e_hi));
    if (n_total <= 0) return {};

    std::vector<double> levels;
    for (int k = 0; k < n_total; ++k) {
        // eigenvalue k sits exactly where the node count jumps from k to k+1
        double lo = e_lo, hi = e_hi;
        for (int it = 0; it < 96 && (hi - lo) > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_nodes(w, h, mid) >= k + 1)
                hi = mid;
            else
                lo = mid;
        }
        levels.push_back(0.5 * (lo + hi));
    }

    // decay check for the weakest level found
    const double kap_min = std::sqrt(-levels.back());
    if (kap_min * grid.half_width < 23.0)
        throw GridTooSmall("eigenfunction tail above 1e-10 at the boundary; enlarge half_width");
    return levels;
}

GridFunction numerov_eigenfunction(const PotentialSpec& spec, const GridConfig& grid,
                                   std::size_t level) {
    check_grid(grid);
    const std::vector<double> levels = numerov_spectrum(spec, grid, level + 1);
    if (levels.size() <= level) throw LevelMissing("requested level is not in the spectrum");
    const double E = levels[level];

    const std::vector<double> w = tabulate(spec, grid);
    const std::size_t n = grid.points;
    const double L = grid.half_width;
    const double h = 2.0 * L / static_cast<double>(n - 1);
    const double h2 = h * h / 12.0;
    const double kap = std::sqrt(-E);

    std::size_t m = static_cast<std::size_t>((grid.match_point + L) / h);
    m = std::clamp<std::size_t>(m, 2, n - 3);

    std::vector<double> psi(n, 0.0);
    psi[0] = 1e-20;
    psi[1] = psi[0] * std::exp(kap * h);
    for (std::size_t i = 2; i <= m + 1; ++i) {
        const double f2 = w[i - 2] - E, f1 = w[i - 1] - E, f0 = w[i] - E;
        psi[i] = ((2.0 + 10.0 * h2 * f1) * psi[i - 1] - (1.0 - h2 * f2) * psi[i - 2]) / (1.0 - h2 * f0);
        if (std::fabs(psi[i]) > 1e100)
            for (std::size_t j = 0; j <= i; ++j) psi[j] *= 1e-100;
    }

    std::vector<double> right(n, 0.0);
    right[n - 1] = 1e-20;
    right[n - 2] = right[n - 1] * std::exp(kap * h);
    for (std::size_t i = n - 3;; --i) {
        const double f2 = w[i + 2] - E, f1 = w[i + 1] - E, f0 = w[i] - E;
        right[i] = ((2.0 + 10.0 * h2 * f1) * right[i + 1] - (1.0 - h2 * f2) * right[i + 2]) / (1.0 - h2 * f0);
        if (std::fabs(right[i]) > 1e100)
            for (std::size_t j = i; j < n; ++j) right[j] *= 1e-100;
        if (i == m) break;
    }

    if (right[m] == 0.0 || psi[m] == 0.0) throw LevelMissing("match point fell on a node; move match_point");
    const double scale = psi[m] / right[m];
    for (std::size_t i = m; i < n; ++i) psi[i] = right[i] * scale;

    double amax = 0.0;
    for (double v : psi) amax = std::max(amax, std::fabs(v));
    for (double& v : psi) v /= amax;

    // orient: global extremum positive
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(psi[i]) > std::fabs(psi[imax])) imax = i;
    if (psi[imax] < 0.0)
        for (double& v : psi) v = -v;

    GridFunction out;
    out.x.resize(n);
    out.psi = std::move(psi);
    for (std::size_t i = 0; i < n; ++i) out.x[i] = -L + h * static_cast<double>(i);
    return out;
}

} // namespace hyperbound
