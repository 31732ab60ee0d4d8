#pragma once

#include "hyperbound/potential.hpp"

#include <cstddef>
#include <vector>

namespace hyperbound {

struct GridConfig {
    double half_width = 40.0;  // domain [-L, L]
    std::size_t points = 32001; // uniform grid count, odd
    double match_point = 0.5;  // glue abscissa for eigenfunctions
};

// Independent grid oracle: Numerov integration from both ends with decaying
// boundary data, eigenvalues from node-count bisection (O(h^4) accuracy).
// Returns all E < 0, ascending, up to max_levels.
std::vector<double> numerov_spectrum(const PotentialSpec& spec, const GridConfig& grid,
                                     std::size_t max_levels);

struct GridFunction {
    std::vector<double> x;
    std::vector<double> psi;
};

// Max-normalized eigenfunction of the requested level (0-based, by node count).
GridFunction numerov_eigenfunction(const PotentialSpec& spec, const GridConfig& grid,
                                   std::size_t level);

} // namespace hyperbound
