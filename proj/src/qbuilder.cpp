#include "hyperbound/qbuilder.hpp"

#include "hyperbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hyperbound {

namespace {

// sigma' = sigma + shift decomposed back into (n', p') with p' in {0,1}
BasisIndex shifted(const BasisIndex& idx, int sigma_shift, int new_q) {
    const int twon_p = 2 * idx.n + idx.p + sigma_shift;
    BasisIndex out;
    out.n = twon_p / 2;
    out.p = twon_p % 2;
    out.q = new_q;
    return out;
}

} // namespace

std::vector<ActionTerm> apply_term(TermKind kind, int exponent, double coupling,
                                   const BasisIndex& idx, const BasisParams& params) {
    std::vector<ActionTerm> out;
    const double a = params.a;
    const double sigma = sigma_of(idx, params);

    switch (kind) {
    case TermKind::kinetic: {
        if (idx.q == 0) {
            out.push_back({idx, -(sigma - 1.0) * (sigma - 1.0)});
            if (a != 0.0) out.push_back({shifted(idx, 0, 1), (2.0 * sigma - 1.0) * a});
            out.push_back({shifted(idx, 2, 0), sigma * (sigma + 1.0) - a * a});
            if (a != 0.0) out.push_back({shifted(idx, 2, 1), -(2.0 * sigma + 1.0) * a});
        } else {
            out.push_back({idx, -sigma * sigma});
            if (a != 0.0) out.push_back({shifted(idx, 2, 0), (2.0 * sigma + 1.0) * a});
            out.push_back({shifted(idx, 2, 1), sigma * (sigma + 1.0) - a * a});
        }
        break;
    }
    case TermKind::symmetric: {
        if (coupling == 0.0) break;
        if (exponent < 2) throw UnsupportedTerm("symmetric term needs exponent >= 2");
        // 1/cosh^m shifts the cosh exponent by m; odd m flips p
        out.push_back({shifted(idx, exponent, idx.q), coupling});
        break;
    }
    case TermKind::antisymmetric: {
        if (coupling == 0.0) break;
        if (exponent < 1) throw UnsupportedTerm("antisymmetric term needs exponent >= 1");
        if (exponent == 1 && a == 0.0)
            throw UnsupportedTerm("g_1 term leaves the a = 0 basis family (L = 0 case)");
        if (idx.q == 1) {
            out.push_back({shifted(idx, exponent, 0), coupling});
        } else {
            // sinh^2 = cosh^2 - 1 splits the image over two q = 1 targets
            out.push_back({shifted(idx, exponent - 2, 1), coupling});
            out.push_back({shifted(idx, exponent, 1), -coupling});
        }
        break;
    }
    }
    for (const ActionTerm& t : out)
        if (t.target.mu() < 1)
            throw UnsupportedTerm("term image fell outside the basis numbering");
    return out;
}

void QMatrix::expand_into_(const BasisIndex& idx, std::vector<ActionTerm>& out) const {
    out.clear();
    const double a = params_.a;
    const double kappa = params_.kappa;
    const double sigma = kappa + 2.0 * idx.n + idx.p;

    // kinetic part of (H - z); the diagonal carries the -z shift in the
    // cancellation-free form kappa^2 - (sigma+q-1)^2 = -nu (2 kappa + nu)
    const double nu = 2.0 * idx.n + idx.p + idx.q - 1.0;
    out.push_back({idx, nu == 0.0 ? 0.0 : -nu * (2.0 * kappa + nu)});
    if (idx.q == 0) {
        if (a != 0.0) out.push_back({shifted(idx, 0, 1), (2.0 * sigma - 1.0) * a});
        out.push_back({shifted(idx, 2, 0), sigma * (sigma + 1.0) - a * a});
        if (a != 0.0) out.push_back({shifted(idx, 2, 1), -(2.0 * sigma + 1.0) * a});
    } else {
        if (a != 0.0) out.push_back({shifted(idx, 2, 0), (2.0 * sigma + 1.0) * a});
        out.push_back({shifted(idx, 2, 1), sigma * (sigma + 1.0) - a * a});
    }

    const int M = spec_.order();
    for (int m = 2; m <= M; ++m) {
        const double f = spec_.f(m);
        if (f == 0.0) continue;
        out.push_back({shifted(idx, m, idx.q), f});
    }
    for (int n = 1; n <= M; ++n) {
        const double g = spec_.g(n);
        if (g == 0.0) continue;
        if (idx.q == 1) {
            out.push_back({shifted(idx, n, 0), g});
        } else {
            out.push_back({shifted(idx, n - 2, 1), g});
            out.push_back({shifted(idx, n, 1), -g});
        }
    }
}

void QMatrix::build_closure_() {
    for (auto& row : n_min_) row.fill(-1);

    if (spec_.g(1) != 0.0) {
        // g_1 images step mu down by one: the sectors merge into the full
        // basis and triangularity is relaxed to the block level.
        relaxed_ = true;
        n_min_[0][0] = 1;
        n_min_[0][1] = n_min_[1][0] = n_min_[1][1] = 0;
    } else {
        n_min_[seed_.p][seed_.q] = seed_.n;
        // relax class thresholds to a fixpoint; every image's n shift is
        // constant within a class, so minima propagate from minima
        std::vector<ActionTerm> buf;
        bool changed = true;
        int guard = 0;
        while (changed) {
            if (++guard > 64) throw NotTriangular("class closure did not stabilize");
            changed = false;
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) {
                    if (n_min_[p][q] < 0) continue;
                    BasisIndex idx{n_min_[p][q], p, q};
                    expand_into_(idx, buf);
                    for (const ActionTerm& t : buf) {
                        int floor_n = (t.target.p == 0 && t.target.q == 0) ? 1 : 0;
                        const int cand = std::max(t.target.n, floor_n);
                        int& cur = n_min_[t.target.p][t.target.q];
                        if (cur < 0 || cand < cur) {
                            cur = cand;
                            changed = true;
                        }
                    }
                }
        }
    }

    n_star_ = 0;
    classes_ = 0;
    class_rank_.fill(-1);
    rank_class_.fill(-1);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            if (n_min_[p][q] >= 0) n_star_ = std::max(n_star_, n_min_[p][q]);
    for (int c = 0; c < 4; ++c) {
        const int p = c >> 1, q = c & 1;
        if (n_min_[p][q] >= 0) {
            class_rank_[c] = classes_;
            rank_class_[classes_] = c;
            ++classes_;
        }
    }
    if (classes_ == 0) throw NotTriangular("empty closure");

    transient_.clear();
    for (long mu = 1; mu < 4L * n_star_; ++mu) {
        const BasisIndex k = basis_from_mu(mu);
        if (n_min_[k.p][k.q] >= 0 && k.n >= n_min_[k.p][k.q]) transient_.push_back(k);
    }
}

BasisIndex QMatrix::ket(std::size_t pos) const {
    if (pos < transient_.size()) return transient_[pos];
    const std::size_t i = pos - transient_.size();
    const int c = rank_class_[static_cast<int>(i % static_cast<std::size_t>(classes_))];
    BasisIndex out;
    out.n = n_star_ + static_cast<int>(i / static_cast<std::size_t>(classes_));
    out.p = c >> 1;
    out.q = c & 1;
    return out;
}

std::size_t QMatrix::position_of(const BasisIndex& idx) const {
    const int c = 2 * idx.p + idx.q;
    if (class_rank_[c] < 0 || idx.n < n_min_[idx.p][idx.q])
        throw NotTriangular("ket is not a member of the closure");
    if (idx.n < n_star_) {
        const long mu = idx.mu();
        auto it = std::lower_bound(transient_.begin(), transient_.end(), mu,
                                   [](const BasisIndex& k, long m) { return k.mu() < m; });
        return static_cast<std::size_t>(it - transient_.begin());
    }
    return transient_.size() +
           static_cast<std::size_t>(idx.n - n_star_) * static_cast<std::size_t>(classes_) +
           static_cast<std::size_t>(class_rank_[c]);
}

QMatrix::QMatrix(PotentialSpec spec, BasisParams params, BasisIndex seed)
    : spec_(std::move(spec)), params_(params), seed_(seed) {
    if (params_.kappa <= 0.0) throw std::invalid_argument("QMatrix: kappa must be > 0");
    const bool seed_ok = (seed_ == BasisIndex{0, 0, 1}) || (seed_ == BasisIndex{0, 1, 0});
    if (!seed_ok) throw std::invalid_argument("QMatrix: seed must be |Xi_1> or |Xi_2>");
    if (spec_.g(1) != 0.0 && params_.a == 0.0)
        throw UnsupportedTerm("g_1 != 0 requires the a != 0 basis");
    build_closure_();
    choose_partition_();
}

void QMatrix::expand_column(std::size_t j, std::vector<ActionTerm>& out) const {
    expand_into_(ket(j), out);
}

void QMatrix::column_into(std::size_t j, std::vector<std::pair<std::size_t, double>>& out) const {
    out.clear();
    const BasisIndex idx = ket(j);
    expand_into_(idx, term_buf_);
    for (const ActionTerm& t : term_buf_) {
        const std::size_t row = position_of(t.target);
        bool merged = false;
        for (auto& [r, w] : out)
            if (r == row) {
                w += t.weight;
                merged = true;
                break;
            }
        if (!merged) out.emplace_back(row, t.weight);
    }
    std::sort(out.begin(), out.end());
    const std::size_t bj = block_of(j);
    for (const auto& [row, w] : out) {
        if (row < j && !(relaxed_ && block_of(row) == bj))
            throw NotTriangular("entry above the diagonal at row " + std::to_string(row) +
                                ", column " + std::to_string(j));
        if (block_of(row) > bj + 1)
            throw NotTriangular("entry below the first block subdiagonal at row " +
                                std::to_string(row) + ", column " + std::to_string(j));
    }
}

std::vector<std::pair<std::size_t, double>> QMatrix::column(std::size_t j) const {
    std::vector<std::pair<std::size_t, double>> out;
    column_into(j, out);
    return out;
}

void QMatrix::blocks(std::size_t n, std::vector<double>& a_n, std::vector<double>& b_prev) const {
    const std::size_t rows = block_size(n);
    const std::size_t r0 = block_start(n);
    a_n.assign(rows * rows, 0.0);
    std::vector<std::pair<std::size_t, double>> col;
    if (n >= 1) {
        const std::size_t pcols = block_size(n - 1);
        b_prev.assign(rows * pcols, 0.0);
        const std::size_t p0 = block_start(n - 1);
        for (std::size_t c = 0; c < pcols; ++c) {
            column_into(p0 + c, col);
            for (const auto& [row, w] : col)
                if (row >= r0 && row < r0 + rows) b_prev[(row - r0) * pcols + c] = w;
        }
    } else {
        b_prev.clear();
    }
    for (std::size_t c = 0; c < rows; ++c) {
        column_into(r0 + c, col);
        for (const auto& [row, w] : col)
            if (row >= r0 && row < r0 + rows) a_n[(row - r0) * rows + c] = w;
    }
}

std::vector<std::vector<double>> QMatrix::dense_window(std::size_t size) const {
    std::vector<std::vector<double>> q(size, std::vector<double>(size, 0.0));
    std::vector<std::pair<std::size_t, double>> col;
    for (std::size_t j = 0; j < size; ++j) {
        column_into(j, col);
        for (const auto& [row, w] : col)
            if (row < size) q[row][j] = w;
    }
    return q;
}

void QMatrix::choose_partition_() {
    // window: the transient plus several periods of the banded pattern
    const std::size_t window =
        transient_.size() + static_cast<std::size_t>(classes_) * (spec_.order() + 8);

    struct Entry {
        std::size_t row, col;
    };
    std::vector<Entry> entries;
    std::vector<std::size_t> zero_diag;
    long reach = 1;
    std::vector<ActionTerm> buf;
    for (std::size_t j = 0; j < window; ++j) {
        const BasisIndex idx = ket(j);
        if (2 * idx.n + idx.p + idx.q == 1) zero_diag.push_back(j);
        expand_into_(idx, buf);
        for (const ActionTerm& t : buf) {
            const std::size_t row = position_of(t.target);
            entries.push_back({row, j});
            reach = std::max<long>(reach, static_cast<long>(row) - static_cast<long>(j));
        }
    }

    auto valid = [&](int D, int head) {
        auto blk = [&](std::size_t pos) {
            return pos < static_cast<std::size_t>(head)
                       ? std::size_t{0}
                       : 1 + (pos - static_cast<std::size_t>(head)) / static_cast<std::size_t>(D);
        };
        for (std::size_t zd : zero_diag)
            if (blk(zd) != 0) return false;
        for (const Entry& e : entries) {
            const std::size_t br = blk(e.row), bc = blk(e.col);
            if (e.row < e.col && !(relaxed_ && br == bc)) return false;
            if (br != bc && br != bc + 1) return false;
        }
        return true;
    };

    for (int D = 1; D <= static_cast<int>(reach) + 4; ++D) {
        for (int head = 1; head <= D; ++head) {
            if (valid(D, head)) {
                D_ = D;
                head_ = head;
                return;
            }
        }
    }
    throw NotTriangular("no block-bidiagonal partition found for this spec");
}

QMatrix build_q(const PotentialSpec& spec, const BasisParams& params, const BasisIndex& seed) {
    return QMatrix(spec, params, seed);
}

int partition_dimension(const PotentialSpec& spec, double a) {
    QMatrix q(spec, BasisParams{a, 1.0}, BasisIndex{0, 0, 1});
    return q.block_dim();
}

} // namespace hyperbound
