#pragma once

#include "hyperbound/basis.hpp"
#include "hyperbound/potential.hpp"

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace hyperbound {

enum class TermKind { kinetic, symmetric, antisymmetric };

struct ActionTerm {
    BasisIndex target;
    double weight = 0.0;
};

// Expands one operator term acting on a basis ket into the basis family.
//   kinetic:        T = -d^2/dx^2, exponent ignored
//   symmetric:      coupling / cosh^exponent
//   antisymmetric:  coupling * sinh / cosh^exponent
// Terms whose structural coupling is exactly zero are omitted.  The tanh-like
// exponent-1 antisymmetric term is rejected in the a = 0 basis.
std::vector<ActionTerm> apply_term(TermKind kind, int exponent, double coupling,
                                   const BasisIndex& idx, const BasisParams& params);

// Quasi-Hamiltonian Q(z), z = -kappa^2, over the ordered Lanczos closure of a
// seed ket.  Globally lower triangular; the partition (head block of size
// `head_size`, then uniform blocks of size `block_dim`) makes it block lower
// bidiagonal: A_n on the block diagonal, B_n one block below.
//
// The closure is a union of per-(p,q) tails n >= n_min[p][q], so the ordered
// basis and the mu <-> position maps are arithmetic (no storage, any depth).
class QMatrix {
  public:
    QMatrix(PotentialSpec spec, BasisParams params, BasisIndex seed);

    const PotentialSpec& spec() const { return spec_; }
    const BasisParams& params() const { return params_; }
    const BasisIndex& seed() const { return seed_; }
    double z() const { return -params_.kappa * params_.kappa; }

    int block_dim() const { return D_; }
    int head_size() const { return head_; }
    // true when in-block entries above the scalar diagonal are admitted
    // (the experimental g_1 != 0, a != 0 structure)
    bool relaxed() const { return relaxed_; }

    std::size_t block_start(std::size_t n) const {
        return n == 0 ? 0 : static_cast<std::size_t>(head_) + (n - 1) * static_cast<std::size_t>(D_);
    }
    std::size_t block_size(std::size_t n) const {
        return n == 0 ? static_cast<std::size_t>(head_) : static_cast<std::size_t>(D_);
    }
    std::size_t block_of(std::size_t pos) const {
        return pos < static_cast<std::size_t>(head_)
                   ? 0
                   : 1 + (pos - static_cast<std::size_t>(head_)) / static_cast<std::size_t>(D_);
    }

    BasisIndex ket(std::size_t pos) const;
    std::size_t position_of(const BasisIndex& idx) const;

    // closure shape: number of active (p,q) classes and the length of the
    // non-periodic prefix of the ordered basis
    int active_classes() const { return classes_; }
    std::size_t transient_size() const { return transient_.size(); }

    // Raw expansion of (H - z) applied to the ket at position j (targets not
    // merged); `out` is overwritten without allocating at steady state.
    void expand_column(std::size_t j, std::vector<ActionTerm>& out) const;

    // Column j of Q as (row position, weight), rows ascending; `out` is
    // overwritten (no allocation once its capacity suffices).
    void column_into(std::size_t j, std::vector<std::pair<std::size_t, double>>& out) const;
    std::vector<std::pair<std::size_t, double>> column(std::size_t j) const;

    // Fills A_n (block_size(n) x block_size(n)) and, for n >= 1, B_{n-1}
    // (block_size(n) x block_size(n-1)), both row-major.
    void blocks(std::size_t n, std::vector<double>& a_n, std::vector<double>& b_prev) const;

    // Dense leading size x size window (golden tests, CLI dump).
    std::vector<std::vector<double>> dense_window(std::size_t size) const;

  private:
    void expand_into_(const BasisIndex& idx, std::vector<ActionTerm>& out) const;
    void build_closure_();
    void choose_partition_();

    PotentialSpec spec_;
    BasisParams params_;
    BasisIndex seed_;
    int D_ = 1;
    int head_ = 1;
    bool relaxed_ = false;

    // closure model: per-class tails plus an explicit transient prefix
    std::array<std::array<int, 2>, 2> n_min_{}; // -1: class absent
    int n_star_ = 0;                            // all present classes active for n >= n_star
    std::vector<BasisIndex> transient_;         // kets with mu < 4 n_star, ascending mu
    std::array<int, 4> class_rank_{};           // rank of 2p+q among present classes, -1 absent
    std::array<int, 4> rank_class_{};           // inverse of class_rank_
    int classes_ = 0;

    mutable std::vector<ActionTerm> term_buf_;
};

// Builds Q for the seed and returns it; triangularity is verified as columns
// are generated.
QMatrix build_q(const PotentialSpec& spec, const BasisParams& params, const BasisIndex& seed);

// Partition block size for the spec in the basis with asymmetry a
// (kappa-independent).
int partition_dimension(const PotentialSpec& spec, double a);

} // namespace hyperbound
