#pragma once

#include "fde/fractional_order.hpp"
#include "fde/grid.hpp"
#include "fde/rhs.hpp"

#include <cstddef>
#include <vector>

namespace fde {

/// Cauchy-type problem: Hilfer-Hadamard derivative of order (alpha, beta)
/// equals phi(t, x(t)) on (a, b], with weighted initial values x_{a_j}.
struct CauchyProblem {
    FractionalOrder ord;
    double a = 1.0;
    double b = 2.0;
    std::vector<double> initial_values; // x_{a_j}, j = 1..n
    Rhs rhs;
    double lipschitz = 0.0;

    void validate() const;
};

/// Interval subdivision with the per-subinterval contraction factors
/// omega_i = L * (Gamma(gamma-n+1)/Gamma(alpha+gamma-n+1)) * (log(t_i/t_{i-1}))^alpha.
struct SubdivisionPlan {
    std::vector<double> breakpoints; // a = t_0 < ... < t_K = b
    std::vector<double> omegas;      // one per subinterval, all < 1

    std::size_t intervals() const { return omegas.size(); }
};

struct SolverReport {
    WeightedSamples solution; // weight n - gamma on the full grid
    SubdivisionPlan plan;
    std::vector<int> iterations;        // Picard sweeps per subinterval
    std::vector<double> final_deltas;   // last weighted-norm update per subinterval
    std::vector<std::vector<double>> update_ratios; // successive-update ratios, from sweep 2 on
    double residual_norm = 0.0;
};

/// Contraction factor for a subinterval of log-length du.
double contraction_factor(const CauchyProblem& p, double du);

/// x_0(t) = sum_k x_{a_k} (log(t/a))^{gamma-k} / Gamma(gamma-k+1), stored with
/// weight n - gamma (in which form it is a polynomial in u, finite at t = a).
WeightedSamples assemble_initial_term(const CauchyProblem& p, const LogGrid& grid);

/// One full Picard sweep on a working subinterval whose left endpoint is
/// `left`: base_term + I^alpha_{left+}[phi(tau, x_prev(tau))]. x_prev and
/// base_term live on a grid with grid.a == left; their weight is n - gamma
/// when left == p.a (log(t/a) weighting) and 0 on later subintervals.
WeightedSamples apply_picard_operator(const CauchyProblem& p, const WeightedSamples& x_prev,
                                      const WeightedSamples& base_term, double left);

/// Greedy left-to-right subdivision: each step has log-length
/// du = (omega_target * Gamma(alpha+gamma-n+1) / (L * Gamma(gamma-n+1)))^{1/alpha},
/// the last step capped so t_K = b exactly.
SubdivisionPlan plan_subdivision(const CauchyProblem& p, double omega_target);

/// Solves the equivalent Volterra integral equation by subdivided Picard
/// iteration. Throws ConvergenceError if a subinterval fails to contract
/// below tol within max_iter sweeps.
SolverReport solve_cauchy(const CauchyProblem& p, const LogGrid& grid, double tol = 1e-10,
                          int max_iter = 200, double omega_target = 0.5);

/// Weighted sup-norm of x - [x_0 + I^alpha phi(., x)] over all grid nodes.
double vie_residual(const CauchyProblem& p, const WeightedSamples& x);

} // namespace fde
