#pragma once

namespace fde {

/// ln Gamma(x) for x > 0. Throws std::domain_error for non-positive or
/// non-finite arguments.
double log_gamma(double x);

/// Gamma(p)/Gamma(q) for p, q > 0, computed as exp(log_gamma(p) - log_gamma(q))
/// so that large numerators and denominators cancel before exponentiation.
double gamma_ratio(double p, double q);

struct MLParams {
    double alpha;                 // series order, > 0
    double gamma_param;           // second parameter, > 0
    double series_tol = 1e-14;    // relative truncation tolerance
    int max_terms = 500;
    double y_max = 50.0;          // largest |y| accepted

    void validate() const;
};

/// Two-parameter Mittag-Leffler function E_{alpha,gamma}(y) =
/// sum_i y^i / Gamma(i*alpha + gamma), by direct truncated series.
/// Truncates when the next term falls below series_tol * |partial sum|;
/// throws ConvergenceError if max_terms is exhausted first.
double mittag_leffler(const MLParams& p, double y);

} // namespace fde
