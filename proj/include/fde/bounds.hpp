#pragma once

#include "fde/fractional_order.hpp"
#include "fde/grid.hpp"
#include "fde/solver.hpp"

#include <vector>

namespace fde {

/// Input of the generalized Gronwall bound: nonnegative u(t) samples and a
/// nonnegative nondecreasing psi(t) on a log grid.
struct GronwallInput {
    LogGrid grid;
    std::vector<double> u_vals;
    std::vector<double> psi_vals;
    double alpha;
    int series_cap = 200;
    double series_tol = 1e-12;

    void validate() const;
};

/// Explicit series envelope
///   u(t) + int_a^t sum_{k>=1} (psi(t) Gamma(alpha))^k / Gamma(k alpha)
///            (log(t/tau))^{k alpha - 1} u(tau) dtau/tau,
/// one value per grid node. The series is truncated when its coefficient
/// ratio falls below series_tol; exceeding series_cap raises ConvergenceError.
std::vector<double> gronwall_series_bound(const GronwallInput& g);

/// Perturbation description shared by the dependence envelopes: an order
/// shift delta >= 0, an initial-value shift epsilon (so the perturbed datum
/// is x_a + epsilon), the unperturbed problem, and the sampled sup of
/// |phi(t, x(t))| along its solution.
struct PerturbationSpec {
    double delta = 0.0;
    double epsilon = 0.0;
    CauchyProblem base;
    double phi_sup = 0.0;

    void validate() const;
};

/// Envelope for |x~ - x| between the Hadamard-type problems of orders alpha
/// and alpha - delta (three-term H(t) plus its Gronwall series integral).
/// Valid for a < t <= b only.
double hadamard_dependence_envelope(const PerturbationSpec& s, double t);

/// Same series structure with the Hilfer-type head term F(t), whose first
/// difference uses the exponents gamma + delta(beta-1) - 1 and gamma - 1.
double hilfer_dependence_envelope(const PerturbationSpec& s, const FractionalOrder& ord,
                                  double t);

/// |epsilon| (log(t/a))^{gamma-1} E_{alpha,gamma}(L (log(t/a))^alpha).
double epsilon_ml_bound(const FractionalOrder& ord, double lipschitz, double epsilon,
                        double a, double t);

} // namespace fde
