#include "hyperbound/config.hpp"
#include "hyperbound/errors.hpp"
#include "hyperbound/matching.hpp"
#include "hyperbound/numerov.hpp"
#include "hyperbound/potential.hpp"
#include "hyperbound/qbuilder.hpp"
#include "hyperbound/series.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace hyperbound;

struct CliOverrides {
    std::string config_path;
    double kappa_min = -1.0, kappa_max = -1.0, tol = -1.0;
    long grid = -1;
    std::string eps, format, out;
};

void add_common(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "run configuration file");
    cmd->add_option("--kappa-min", ov.kappa_min, "lower end of the kappa scan");
    cmd->add_option("--kappa-max", ov.kappa_max, "upper end of the kappa scan (0: auto)");
    cmd->add_option("--grid", ov.grid, "kappa grid points");
    cmd->add_option("--eps", ov.eps, "epsilon ladder, comma separated, decreasing");
    cmd->add_option("--tol", ov.tol, "kappa root tolerance");
    cmd->add_option("--format", ov.format, "table|json|csv");
    cmd->add_option("--out", ov.out, "output path (default stdout)");
}

RunConfig load_config(const CliOverrides& ov) {
    RunConfig cfg;
    if (!ov.config_path.empty()) cfg = parse_config_file(ov.config_path);
    if (ov.kappa_min > 0.0) cfg.kappa_min = ov.kappa_min;
    if (ov.kappa_max >= 0.0) cfg.kappa_max = ov.kappa_max;
    if (ov.grid > 0) cfg.grid_points = static_cast<std::size_t>(ov.grid);
    if (ov.tol > 0.0) cfg.tol_root = ov.tol;
    if (!ov.format.empty()) cfg.format = ov.format;
    if (!ov.out.empty()) cfg.out_path = ov.out;
    if (!ov.eps.empty()) {
        std::stringstream ss(ov.eps);
        std::string item;
        std::vector<double> eps;
        while (std::getline(ss, item, ','))
            if (!item.empty()) eps.push_back(std::stod(item));
        cfg.epsilons = eps;
    }
    cfg.validate();
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path);
    if (!out) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
    out << text;
}

std::string spectrum_csv(const std::vector<MatchResult>& results) {
    std::ostringstream os;
    os << "kappa,energy,mixing_M,mixing_N,residual\n";
    for (const MatchResult& r : results)
        os << format_full(r.kappa) << ',' << format_full(r.energy) << ',' << format_full(r.mixing_M)
           << ',' << format_full(r.mixing_N) << ',' << format_full(r.residual) << '\n';
    return os.str();
}

int cmd_spectrum(const RunConfig& cfg) {
    const auto results =
        find_spectrum(cfg.spec, cfg.a, {cfg.kappa_min, cfg.resolved_kappa_max()}, cfg.spectrum_config());
    if (cfg.format == "json")
        emit(cfg, spectrum_json(cfg, results));
    else if (cfg.format == "csv")
        emit(cfg, spectrum_csv(results));
    else
        emit(cfg, spectrum_table(results));
    return 0;
}

int cmd_wavefunction(const RunConfig& cfg, long level, double x_min, double x_max, long samples) {
    const auto results =
        find_spectrum(cfg.spec, cfg.a, {cfg.kappa_min, cfg.resolved_kappa_max()}, cfg.spectrum_config());
    if (level < 0 || static_cast<std::size_t>(level) >= results.size()) {
        std::cerr << "hyperbound: level " << level << " not found (" << results.size()
                  << " bound states)\n";
        return 3;
    }
    std::vector<double> xs;
    for (long i = 0; i < samples; ++i) {
        const double x = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
        if (std::fabs(x) < 1.5e-3) continue; // punctured domain
        xs.push_back(x);
    }
    const auto samples_out =
        assemble_wavefunction(results[static_cast<std::size_t>(level)], cfg.spec, cfg.a, xs);
    emit(cfg, wavefunction_csv(samples_out));
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const auto series =
        find_spectrum(cfg.spec, cfg.a, {cfg.kappa_min, cfg.resolved_kappa_max()}, cfg.spectrum_config());

    double kmin_expected = cfg.kappa_min;
    if (!series.empty()) kmin_expected = series.back().kappa;
    GridConfig grid = cfg.grid_config(kmin_expected);
    std::vector<double> oracle;
    for (int attempt = 0;; ++attempt) {
        try {
            oracle = numerov_spectrum(cfg.spec, grid, std::max<std::size_t>(series.size() + 2, 8));
            break;
        } catch (const GridTooSmall&) {
            if (attempt >= 3) throw;
            grid.half_width *= 2.0;
            std::size_t n = static_cast<std::size_t>(2.0 * grid.half_width / 2.5e-3) + 1;
            if (n % 2 == 0) ++n;
            grid.points = std::min<std::size_t>(n, 1200001);
        }
    }

    std::ostringstream os;
    os << "  #      E (series)         E (numerov)          |diff|\n";
    const std::size_t n = std::max(series.size(), oracle.size());
    bool ok = series.size() == oracle.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        char line[160];
        if (i < series.size() && i < oracle.size()) {
            const double diff = std::fabs(series[i].energy - oracle[i]);
            worst = std::max(worst, diff);
            if (diff > cfg.validate_bound) ok = false;
            std::snprintf(line, sizeof(line), "%3zu %17.10f %19.10f %15.3e\n", i, series[i].energy,
                          oracle[i], diff);
        } else if (i < series.size()) {
            std::snprintf(line, sizeof(line), "%3zu %17.10f %19s %15s\n", i, series[i].energy, "-",
                          "missing");
        } else {
            std::snprintf(line, sizeof(line), "%3zu %17s %19.10f %15s\n", i, "-", oracle[i],
                          "missing");
        }
        os << line;
    }
    os << (ok ? "VALIDATION PASSED" : "VALIDATION FAILED") << " (levels: series " << series.size()
       << ", numerov " << oracle.size() << "; worst |diff| " << format_full(worst) << ", bound "
       << format_full(cfg.validate_bound) << ")\n";
    emit(cfg, os.str());
    return ok ? 0 : 1;
}

int cmd_qmatrix(const RunConfig& cfg, int seed_p, long blocks, double kappa) {
    const BasisIndex seed = (seed_p == 0) ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0};
    QMatrix q = build_q(cfg.spec, BasisParams{cfg.a, kappa}, seed);
    std::ostringstream os;
    os << "seed |Xi_" << seed.mu() << ">  kappa " << format_full(kappa) << "  a "
       << format_full(cfg.a) << "\n";
    os << "partition D = " << q.block_dim() << ", head = " << q.head_size() << "\n";
    const std::size_t rows = q.block_start(static_cast<std::size_t>(blocks)) +
                             q.block_size(static_cast<std::size_t>(blocks));
    os << "basis:";
    for (std::size_t i = 0; i < rows; ++i) {
        const BasisIndex k = q.ket(i);
        os << " |Xi_" << k.mu() << ">";
    }
    os << "\n";
    const auto w = q.dense_window(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < rows; ++c) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " %11.5g", w[r][c]);
            os << buf;
        }
        os << "\n";
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_terminate_scan(const RunConfig& cfg, int seed_p, double a_min, double a_max, long a_steps,
                       long max_block) {
    const BasisIndex seed = (seed_p == 0) ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0};
    std::vector<double> a_values;
    if (a_steps <= 1) {
        a_values.push_back(cfg.a);
    } else {
        for (long i = 0; i < a_steps; ++i)
            a_values.push_back(a_min + (a_max - a_min) * static_cast<double>(i) /
                                           static_cast<double>(a_steps - 1));
    }
    const auto points = detect_termination(cfg.spec, seed, a_values, cfg.kappa_min,
                                           cfg.resolved_kappa_max(),
                                           std::max<std::size_t>(cfg.grid_points, 64),
                                           static_cast<std::size_t>(max_block));
    std::ostringstream os;
    os << "           a            kappa   K     residual\n";
    for (const TerminationPoint& p : points) {
        char line[160];
        std::snprintf(line, sizeof(line), "%12.6f %16.10f %3zu %12.3e\n", p.a, p.kappa, p.block,
                      p.residual);
        os << line;
    }
    if (points.empty()) os << "  (no termination points detected)\n";
    emit(cfg, os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bound states of short-range hyperbolic potentials via partitioned power series"};
    app.require_subcommand(1);

    CliOverrides ov;
    long level = 0, samples = 201, blocks = 4, a_steps = 1, max_block = 8;
    double x_min = -8.0, x_max = 8.0, a_min = 0.0, a_max = 0.0, qkappa = 1.0;
    int seed_p = 0;

    CLI::App* sp = app.add_subcommand("spectrum", "bound-state energies from the secular matching");
    add_common(sp, ov);
    CLI::App* wf = app.add_subcommand("wavefunction", "sample psi and psi' of one bound state");
    add_common(wf, ov);
    wf->add_option("--level", level, "state index (0 = ground state)");
    wf->add_option("--x-min", x_min, "first sample");
    wf->add_option("--x-max", x_max, "last sample");
    wf->add_option("--samples", samples, "sample count");
    CLI::App* va = app.add_subcommand("validate", "compare the series spectrum against the grid oracle");
    add_common(va, ov);
    CLI::App* qm = app.add_subcommand("qmatrix", "dump the leading block rows of Q(z)");
    add_common(qm, ov);
    qm->add_option("--seed-p", seed_p, "seed sector, 0 (|Xi_1>) or 1 (|Xi_2>)");
    qm->add_option("--blocks", blocks, "number of block rows");
    qm->add_option("--kappa", qkappa, "kappa at which entries are evaluated");
    CLI::App* ts = app.add_subcommand("terminate-scan", "scan (a, kappa) for terminating solutions");
    add_common(ts, ov);
    ts->add_option("--seed-p", seed_p, "seed sector, 0 or 1");
    ts->add_option("--a-min", a_min, "scan start in a");
    ts->add_option("--a-max", a_max, "scan end in a");
    ts->add_option("--a-steps", a_steps, "a grid size (1: use config a)");
    ts->add_option("--max-block", max_block, "largest block index K checked");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(ov);
        if (sp->parsed()) return cmd_spectrum(cfg);
        if (wf->parsed()) return cmd_wavefunction(cfg, level, x_min, x_max, samples);
        if (va->parsed()) return cmd_validate(cfg);
        if (qm->parsed()) return cmd_qmatrix(cfg, seed_p, blocks, qkappa);
        if (ts->parsed()) return cmd_terminate_scan(cfg, seed_p, a_min, a_max, a_steps, max_block);
    } catch (const ConfigError& e) {
        std::cerr << "hyperbound: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "hyperbound: config error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "hyperbound: solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "hyperbound: error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
