#pragma once

namespace fde {

/// Order bundle (alpha, beta, n, gamma) with gamma = alpha + beta*(n - alpha).
/// beta = 0 gives the Riemann-Liouville-type Hadamard derivative, beta = 1 the
/// Caputo-type one.
struct FractionalOrder {
    double alpha;
    double beta;
    int n;
    double gamma_val;

    FractionalOrder() : FractionalOrder(0.5, 0.0, 1) {}
    FractionalOrder(double alpha_, double beta_, int n_);

    /// Weight exponent n - gamma of the space solutions live in.
    double solution_weight() const { return static_cast<double>(n) - gamma_val; }
};

} // namespace fde
