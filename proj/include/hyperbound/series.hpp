#pragma once

#include "hyperbound/qbuilder.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <vector>

namespace hyperbound {

// Coefficient vectors F_0, F_1, ... of the partitioned two-term recurrence
//   A_0 F_0 = 0 (normalized), F_n = -(A_n)^{-1} B_{n-1} F_{n-1}.
//
// Lazily extended; single writer, do not share while extending.  Past the
// transient the block entries repeat with a fixed period and quadratic
// super-step dependence, so deep blocks stream at a few flops each.  With
// keep_history = false only the newest F_n is retained and coefficient(n)
// must be called with nondecreasing n.
class CoefficientStream {
  public:
    explicit CoefficientStream(QMatrix q, bool keep_history = true);

    QMatrix& q() { return q_; }
    const QMatrix& q() const { return q_; }

    const std::vector<double>& coefficient(std::size_t n); // F_n
    std::size_t generated() const { return next_; }

    // Entry of F_n belonging to the ket with the requested q label.
    double component(std::size_t n, int q_select);

  private:
    void extend_(std::size_t upto);
    void scatter_block_(std::size_t n);
    void fill_compiled_(std::size_t n);
    void try_compile_();
    void step_();
    std::vector<double> initial_();

    QMatrix q_;
    bool keep_history_;
    std::size_t next_ = 0; // blocks generated so far
    std::deque<std::vector<double>> coeffs_; // reference-stable on append
    std::vector<double> cur_, prev_;
    std::vector<double> a_buf_, b_buf_, b_next_, rhs_;
    std::vector<ActionTerm> term_buf_;

    struct PatternEntry {
        std::size_t cell; // flat index into the block matrix
        double w0, w1, w2; // weight = w0 + w1 s + w2 s^2 at super-step s
    };
    struct Pattern {
        std::vector<PatternEntry> a, b;
    };
    bool compiled_ = false;
    bool compile_failed_ = false;
    std::size_t compile_from_ = 0;
    std::size_t period_ = 1;
    std::vector<Pattern> patterns_;
};

struct Truncation {
    double tol = 1e-12;
    std::size_t max_terms = 10000; // partitioned-sum blocks
};

struct EvalResult {
    double value = 0.0;
    double derivative = 0.0;
    double error_bound = 0.0;
    std::size_t blocks_used = 0;
};

// One Jost-type series solution phi^(p); p is the seed sector label.
class SeriesSolution {
  public:
    SeriesSolution(std::shared_ptr<CoefficientStream> stream, Truncation truncation);

    int p_label() const { return p_; }
    const BasisParams& params() const { return stream_->q().params(); }
    CoefficientStream& stream() { return *stream_; }

    // Punctured domain: |x| >= 1e-3.  Sums blocks until the geometric tail
    // bound |last block| * t/(1-t), t = sech^2 x, drops below tol.
    EvalResult evaluate(double x) const;

  private:
    std::shared_ptr<CoefficientStream> stream_;
    Truncation truncation_;
    int p_;
};

SeriesSolution make_solution(const PotentialSpec& spec, const BasisParams& params, int p,
                             Truncation truncation = {});

// [F_j]_q / [F_{j-1}]_q, the convergence diagnostic of the block recurrence.
double tail_ratio(CoefficientStream& stream, std::size_t j, int q_select);

struct TerminationPoint {
    double a = 0.0;
    double kappa = 0.0;
    std::size_t block = 0; // K with F_{K+1} ~ 0
    double residual = 0.0; // normalized |F_{K+1}| at the refined point
};

// Scans the (a, kappa) grid for parameter points where a coefficient vector
// F_{K+1} vanishes (the series degenerates to a finite, quasi-exact solution).
// Local minima are refined by golden-section search; points with normalized
// residual below 1e-10 are reported.
std::vector<TerminationPoint> detect_termination(const PotentialSpec& spec, const BasisIndex& seed,
                                                 const std::vector<double>& a_values,
                                                 double kappa_lo, double kappa_hi,
                                                 std::size_t kappa_samples, std::size_t max_block);

} // namespace hyperbound
