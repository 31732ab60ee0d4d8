#include "hyperbound/series.hpp"

#include "hyperbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <stdexcept>

namespace hyperbound {

namespace {

// Solves L x = rhs for lower-triangular L (row-major n x n).
void solve_lower(const std::vector<double>& L, std::vector<double>& x,
                 const std::vector<double>& rhs, std::size_t n) {
    x.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double s = rhs[r];
        for (std::size_t c = 0; c < r; ++c) s -= L[r * n + c] * x[c];
        const double d = L[r * n + r];
        if (std::fabs(d) < 1e-300)
            throw SingularBlock("vanishing diagonal in A_n (kappa <= 0 or internal error)");
        x[r] = s / d;
    }
}

// Dense solve with partial pivoting, for the relaxed (g_1) block structure.
void solve_dense(std::vector<double> A, std::vector<double>& x, std::vector<double> rhs,
                 std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::fabs(A[r * n + k]) > std::fabs(A[piv * n + k])) piv = r;
        if (std::fabs(A[piv * n + k]) < 1e-300) throw SingularBlock("singular A_n block");
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[k * n + c], A[piv * n + c]);
            std::swap(rhs[k], rhs[piv]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = A[r * n + k] / A[k * n + k];
            A[r * n + k] = 0.0;
            for (std::size_t c = k + 1; c < n; ++c) A[r * n + c] -= f * A[k * n + c];
            rhs[r] -= f * rhs[k];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri * n + c] * x[c];
        x[ri] = s / A[ri * n + ri];
    }
}

} // namespace

CoefficientStream::CoefficientStream(QMatrix q, bool keep_history)
    : q_(std::move(q)), keep_history_(keep_history) {}

// Expands the columns of block n once, scattering into A_n and into the
// pending B_n used by the next step.
void CoefficientStream::scatter_block_(std::size_t n) {
    const std::size_t rows = q_.block_size(n);
    const std::size_t r0 = q_.block_start(n);
    const std::size_t rows1 = q_.block_size(n + 1);
    const std::size_t s0 = q_.block_start(n + 1);
    a_buf_.assign(rows * rows, 0.0);
    b_next_.assign(rows1 * rows, 0.0);
    const bool relaxed = q_.relaxed();
    for (std::size_t c = 0; c < rows; ++c) {
        const std::size_t j = r0 + c;
        q_.expand_column(j, term_buf_);
        for (const ActionTerm& t : term_buf_) {
            const std::size_t pos = q_.position_of(t.target);
            if (pos >= r0 && pos < r0 + rows) {
                if (pos < j && !relaxed)
                    throw NotTriangular("entry above the diagonal in block " + std::to_string(n));
                a_buf_[(pos - r0) * rows + c] += t.weight;
            } else if (pos >= s0 && pos < s0 + rows1) {
                b_next_[(pos - s0) * rows + c] += t.weight;
            } else {
                throw NotTriangular("entry outside the block-bidiagonal band in block " +
                                    std::to_string(n));
            }
        }
    }
}

// Past the transient the scatter pattern of block n repeats with period P in
// n, and every entry is an exact quadratic in the super-step s (sigma is
// linear in s).  Fit each cell from three sampled periods and check a fourth.
void CoefficientStream::try_compile_() {
    if (compiled_ || compile_failed_) return;
    compile_failed_ = true; // until proven otherwise
    const std::size_t D = static_cast<std::size_t>(q_.block_dim());
    const std::size_t classes = static_cast<std::size_t>(q_.active_classes());
    std::size_t period = classes / std::gcd(D, classes);
    if (period == 0) period = 1;

    std::size_t from = 1;
    while (q_.block_start(from) < q_.transient_size() + classes) ++from;

    std::vector<std::vector<double>> a_s(4), b_s(4);
    std::vector<Pattern> pats(period);
    for (std::size_t r = 0; r < period; ++r) {
        for (std::size_t s = 0; s < 4; ++s) {
            scatter_block_(from + r + s * period);
            a_s[s] = a_buf_;
            b_s[s] = b_next_;
        }
        auto fit = [](const std::vector<std::vector<double>>& m, std::size_t cell, double& w0,
                      double& w1, double& w2) {
            const long double m0 = m[0][cell], m1 = m[1][cell], m2 = m[2][cell];
            const long double c2 = 0.5L * (m2 - 2.0L * m1 + m0);
            const long double c1 = m1 - m0 - c2;
            w0 = static_cast<double>(m0);
            w1 = static_cast<double>(c1);
            w2 = static_cast<double>(c2);
            const long double pred3 = m0 + 3.0L * c1 + 9.0L * c2;
            return std::fabs(static_cast<double>(pred3 - m[3][cell])) <=
                   1e-8 * (1.0 + std::fabs(m[3][cell]));
        };
        for (std::size_t cell = 0; cell < a_s[0].size(); ++cell) {
            double w0, w1, w2;
            if (!fit(a_s, cell, w0, w1, w2)) return;
            if (w0 != 0.0 || w1 != 0.0 || w2 != 0.0) pats[r].a.push_back({cell, w0, w1, w2});
        }
        for (std::size_t cell = 0; cell < b_s[0].size(); ++cell) {
            double w0, w1, w2;
            if (!fit(b_s, cell, w0, w1, w2)) return;
            if (w0 != 0.0 || w1 != 0.0 || w2 != 0.0) pats[r].b.push_back({cell, w0, w1, w2});
        }
    }
    patterns_ = std::move(pats);
    compile_from_ = from;
    period_ = period;
    compiled_ = true;
    compile_failed_ = false;
}

void CoefficientStream::fill_compiled_(std::size_t n) {
    const std::size_t i = n - compile_from_;
    const Pattern& pat = patterns_[i % period_];
    const double s = static_cast<double>(i / period_);
    const std::size_t rows = q_.block_size(n);
    a_buf_.assign(rows * rows, 0.0);
    b_next_.assign(q_.block_size(n + 1) * rows, 0.0);
    for (const PatternEntry& e : pat.a) a_buf_[e.cell] = e.w0 + s * (e.w1 + s * e.w2);
    for (const PatternEntry& e : pat.b) b_next_[e.cell] = e.w0 + s * (e.w1 + s * e.w2);
}

std::vector<double> CoefficientStream::initial_() {
    scatter_block_(0);
    const std::size_t h = static_cast<std::size_t>(q_.head_size());
    for (std::size_t c = 0; c < h; ++c)
        if (a_buf_[c] != 0.0)
            throw NoNullVector("A_0 has a nonzero leading row; no Jost-type null vector");
    std::vector<double> f0(h, 0.0);
    f0[0] = 1.0; // norm component
    for (std::size_t r = 1; r < h; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < r; ++c) s += a_buf_[r * h + c] * f0[c];
        const double d = a_buf_[r * h + r];
        if (std::fabs(d) < 1e-300) throw NoNullVector("degenerate A_0 head block");
        f0[r] = -s / d;
    }
    b_buf_.swap(b_next_); // B_0
    return f0;
}

void CoefficientStream::step_() {
    const std::size_t n = next_;
    if (n == 0) {
        cur_ = initial_();
        if (keep_history_) coeffs_.push_back(cur_);
        next_ = 1;
        return;
    }
    const std::size_t rows = q_.block_size(n);
    const std::size_t pcols = cur_.size();
    rhs_.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < pcols; ++c) s += b_buf_[r * pcols + c] * cur_[c];
        rhs_[r] = -s;
    }
    if (!compiled_ && !compile_failed_ && q_.block_start(n) > q_.transient_size() + 4)
        try_compile_();
    if (compiled_ && n >= compile_from_)
        fill_compiled_(n);
    else
        scatter_block_(n);
    if (q_.relaxed())
        solve_dense(a_buf_, prev_, rhs_, rows);
    else
        solve_lower(a_buf_, prev_, rhs_, rows);
    cur_.swap(prev_);
    if (keep_history_) coeffs_.push_back(cur_);
    b_buf_.swap(b_next_);
    ++next_;
}

void CoefficientStream::extend_(std::size_t upto) {
    while (next_ <= upto) step_();
}

const std::vector<double>& CoefficientStream::coefficient(std::size_t n) {
    if (keep_history_) {
        if (n >= next_) extend_(n);
        return coeffs_[n];
    }
    if (n + 1 < next_)
        throw std::logic_error("CoefficientStream without history is forward-only");
    if (n >= next_) extend_(n);
    return cur_;
}

double CoefficientStream::component(std::size_t n, int q_select) {
    const std::vector<double>& f = coefficient(n);
    const std::size_t start = q_.block_start(n);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (q_.ket(start + i).q == q_select) return f[i];
    throw std::invalid_argument("block has no ket with the requested q label");
}

SeriesSolution::SeriesSolution(std::shared_ptr<CoefficientStream> stream, Truncation truncation)
    : stream_(std::move(stream)), truncation_(truncation) {
    p_ = stream_->q().seed().p;
}

SeriesSolution make_solution(const PotentialSpec& spec, const BasisParams& params, int p,
                             Truncation truncation) {
    const BasisIndex seed = (p == 0) ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0};
    auto stream = std::make_shared<CoefficientStream>(build_q(spec, params, seed));
    return SeriesSolution(std::move(stream), truncation);
}

EvalResult SeriesSolution::evaluate(double x) const {
    if (std::fabs(x) < 1e-3)
        throw std::domain_error("evaluate: |x| >= 1e-3 (punctured domain; match at the origin instead)");

    CoefficientStream& st = *stream_;
    QMatrix& qm = st.q();
    const BasisParams& par = qm.params();
    const double kappa = par.kappa;
    const double a = par.a;

    const double ch = std::cosh(x);
    const double sh = std::sinh(x);
    const double th = sh / ch;
    const double sech = 1.0 / ch;
    const double t = sech * sech;
    const double gd = std::asin(th);
    // base_p = cosh^{-(kappa+p)} e^{a gd}; xi_{n,p,1} = base_p t^n,
    // xi_{n,p,0} = sinh * base_p t^n
    const double lc = std::log(ch);
    double base[2] = {std::exp(-kappa * lc + a * gd), std::exp(-(kappa + 1.0) * lc + a * gd)};

    EvalResult out;
    double tpow = 1.0;
    int cur_n = 0;
    int below_count = 0;
    const double tail_factor = t / (1.0 - t);

    for (std::size_t n = 0;; ++n) {
        if (n >= truncation_.max_terms)
            throw SlowConvergence("partitioned sum hit max_terms before the tail bound dropped below tolerance");
        const std::vector<double>& f = st.coefficient(n);
        const std::size_t start = qm.block_start(n);
        double term_v = 0.0, term_d = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const BasisIndex k = qm.ket(start + i);
            while (cur_n < k.n) {
                tpow *= t;
                ++cur_n;
            }
            const double bp = base[k.p] * tpow;
            const double sigma = kappa + 2.0 * k.n + k.p;
            if (k.q == 1) {
                term_v += f[i] * bp;
                term_d += f[i] * bp * (-sigma * th + a * sech);
            } else {
                term_v += f[i] * sh * bp;
                term_d += f[i] * ch * bp * (1.0 - sigma * th * th + a * th * sech);
            }
        }
        out.value += term_v;
        out.derivative += term_d;
        out.blocks_used = n + 1;
        out.error_bound = std::fabs(term_v) * tail_factor;
        const double scale = std::max(1.0, std::fabs(out.value));
        if (n >= 2 && out.error_bound <= truncation_.tol * scale) {
            if (++below_count >= 2) break;
        } else {
            below_count = 0;
        }
    }
    return out;
}

double tail_ratio(CoefficientStream& stream, std::size_t j, int q_select) {
    if (j < 1) throw std::invalid_argument("tail_ratio: need j >= 1");
    const double den = stream.component(j - 1, q_select);
    if (den == 0.0) throw ZeroDenominator("tail_ratio: [F_{j-1}]_q vanishes");
    return stream.component(j, q_select) / den;
}

namespace {

double termination_metric(const PotentialSpec& spec, const BasisIndex& seed, double a, double kappa,
                          std::size_t max_block, std::size_t* which) {
    CoefficientStream st(build_q(spec, BasisParams{a, kappa}, seed));
    double best = std::numeric_limits<double>::max();
    for (std::size_t k = 0; k + 1 <= max_block; ++k) {
        double nk = 0.0, nk1 = 0.0;
        for (double v : st.coefficient(k)) nk = std::max(nk, std::fabs(v));
        for (double v : st.coefficient(k + 1)) nk1 = std::max(nk1, std::fabs(v));
        const double m = nk1 / std::max(nk, 1e-100);
        if (m < best) {
            best = m;
            if (which) *which = k;
        }
    }
    return best;
}

} // namespace

std::vector<TerminationPoint> detect_termination(const PotentialSpec& spec, const BasisIndex& seed,
                                                 const std::vector<double>& a_values,
                                                 double kappa_lo, double kappa_hi,
                                                 std::size_t kappa_samples, std::size_t max_block) {
    if (kappa_samples < 3) throw std::invalid_argument("detect_termination: need >= 3 samples");
    std::vector<TerminationPoint> found;
    for (double a : a_values) {
        std::vector<double> ks(kappa_samples), ms(kappa_samples);
        for (std::size_t i = 0; i < kappa_samples; ++i) {
            ks[i] = kappa_lo + (kappa_hi - kappa_lo) * static_cast<double>(i) /
                                   static_cast<double>(kappa_samples - 1);
            ms[i] = termination_metric(spec, seed, a, ks[i], max_block, nullptr);
        }
        for (std::size_t i = 1; i + 1 < kappa_samples; ++i) {
            if (!(ms[i] <= ms[i - 1] && ms[i] <= ms[i + 1])) continue;
            if (ms[i] > 1e-2) continue; // not a candidate dip
            double lo = ks[i - 1], hi = ks[i + 1];
            for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
                const double m1 = lo + (hi - lo) / 3.0;
                const double m2 = hi - (hi - lo) / 3.0;
                if (termination_metric(spec, seed, a, m1, max_block, nullptr) <
                    termination_metric(spec, seed, a, m2, max_block, nullptr))
                    hi = m2;
                else
                    lo = m1;
            }
            const double kr = 0.5 * (lo + hi);
            std::size_t which = 0;
            const double res = termination_metric(spec, seed, a, kr, max_block, &which);
            if (res < 1e-10) found.push_back({a, kr, which, res});
        }
    }
    return found;
}

} // namespace hyperbound
