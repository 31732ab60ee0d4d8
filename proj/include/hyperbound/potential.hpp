#pragma once

#include <vector>

namespace hyperbound {

// Short-range hyperbolic potential
//
//   V(x) = sum_{m=2..M} f_m / cosh^m(x) + sinh(x) * sum_{n=1..M} g_n / cosh^n(x)
//
// Couplings are stored densely (absent ones as explicit zeros) so builders can
// iterate uniformly over m = 2..M and n = 1..M.
class PotentialSpec {
  public:
    PotentialSpec() : order_(2), f_(1, 0.0), g_(2, 0.0) {}

    // f holds f_2..f_M (size M-1), g holds g_1..g_M (size M).
    PotentialSpec(int order, std::vector<double> f, std::vector<double> g);

    static PotentialSpec poschl_teller(double f2) { return PotentialSpec(2, {f2}, {0.0, 0.0}); }
    static PotentialSpec antisymmetric_scarf(double g2) { return PotentialSpec(2, {0.0}, {0.0, g2}); }

    int order() const { return order_; }

    // m in 2..M
    double f(int m) const { return f_[static_cast<size_t>(m - 2)]; }
    // n in 1..M
    double g(int n) const { return g_[static_cast<size_t>(n - 1)]; }

    void set_f(int m, double value) { f_[static_cast<size_t>(m - 2)] = value; }
    void set_g(int n, double value) { g_[static_cast<size_t>(n - 1)] = value; }

    bool is_symmetric() const;
    bool is_antisymmetric() const;

    // V(-inf) = -g_1 != V(+inf) = +g_1 whenever g_1 != 0
    bool asymptotically_asymmetric() const { return g_[0] != 0.0; }

    double max_coupling() const;

    // Largest |V(x)| on the line, located by a dense scan plus local refinement.
    double max_depth() const;

  private:
    int order_;
    std::vector<double> f_; // f_2..f_M
    std::vector<double> g_; // g_1..g_M
};

// Pointwise evaluation, stable for large |x| (no cosh overflow).
double evaluate_potential(const PotentialSpec& spec, double x);

// Splits into the symmetric part (all f, g = 0) and the anti-symmetric part
// (all g, f = 0); the two parts sum back to the input pointwise.
struct ParitySplit {
    PotentialSpec symmetric;
    PotentialSpec antisymmetric;
};
ParitySplit parity_split(const PotentialSpec& spec);

// Generalized parity image: every g_n -> -g_n, f unchanged.  Satisfies
// evaluate_potential(phat_conjugate(s), -x) == evaluate_potential(s, x).
PotentialSpec phat_conjugate(const PotentialSpec& spec);

} // namespace hyperbound
