#pragma once

#include <cstddef>
#include <vector>

namespace fde {

/// Geometric grid over [a, b], uniform in the log coordinate u = log(t/a).
/// u_0 = 0, u_{N-1} = log(b/a).
struct LogGrid {
    double a = 1.0;
    double b = 2.0;
    std::size_t node_count = 2;

    LogGrid() = default;
    LogGrid(double a_, double b_, std::size_t nodes);

    double span() const;                 // log(b/a)
    double h() const;                    // uniform spacing in u
    double u(std::size_t i) const;       // i * h
    double t(std::size_t i) const;       // a * exp(u_i)
    std::vector<double> u_values() const;

    bool same_as(const LogGrid& other) const;
};

/// Samples of a function f on a LogGrid, stored in weighted form:
/// values[i] = u_i^mu * f(t_i) for i >= 1, values[0] = the weighted limit
/// at t = a. mu in [0, 1) covers the weighted spaces the solver lives in;
/// negative mu in (-1, 0) represents functions vanishing like u^{-mu},
/// which keeps the product quadrature exact on pure power inputs.
struct WeightedSamples {
    LogGrid grid;
    double mu = 0.0;
    std::vector<double> values;

    WeightedSamples() = default;
    WeightedSamples(LogGrid g, double mu_);
    WeightedSamples(LogGrid g, double mu_, std::vector<double> vals);

    std::size_t size() const { return values.size(); }

    /// De-weighted value f(t_i); valid for i >= 1, and for i = 0 when mu == 0.
    double raw(std::size_t i) const;

    void validate() const;
};

/// Sup norm of the stored (already weighted) values.
double weighted_norm(const WeightedSamples& f);

} // namespace fde
