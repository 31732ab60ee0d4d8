#pragma once

#include "hyperbound/matching.hpp"
#include "hyperbound/numerov.hpp"
#include "hyperbound/potential.hpp"

#include <string>
#include <vector>

namespace hyperbound {

// Flat key-value run configuration (dotted keys, `key = value` lines,
// '#' comments).  Recognized keys:
//   M, f.2 .. f.M, g.1 .. g.M, a,
//   kappa.min, kappa.max (0 = auto), grid, eps (comma list),
//   tol.series, tol.root, format (table|json|csv), out,
//   numerov.half_width (0 = auto), numerov.points (0 = auto),
//   numerov.match_point, validate.bound
struct RunConfig {
    PotentialSpec spec;
    double a = 0.0;
    double kappa_min = 0.01;
    double kappa_max = 0.0; // 0: sqrt(max depth) + 1
    std::vector<double> epsilons{0.05, 0.025, 0.0125};
    std::size_t grid_points = 128;
    double tol_series = 1e-12;
    double tol_root = 1e-10;
    std::string format = "table";
    std::string out_path;

    double half_width = 0.0; // 0: auto from the found spectrum
    std::size_t points = 0;  // 0: auto
    double match_point = 0.5;
    double validate_bound = 1e-5;

    double resolved_kappa_max() const;
    SpectrumConfig spectrum_config() const;
    GridConfig grid_config(double kappa_min_expected) const;
    void validate() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Serialization used by the CLI (full precision, machine-stable layout).
std::string spectrum_json(const RunConfig& config, const std::vector<MatchResult>& results);
std::string spectrum_table(const std::vector<MatchResult>& results);
std::string wavefunction_csv(const std::vector<WavefunctionSample>& samples);
std::string format_full(double v); // 17 significant digits

} // namespace hyperbound
