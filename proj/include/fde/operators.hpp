#pragma once

#include "fde/fractional_order.hpp"
#include "fde/grid.hpp"

#include <cstddef>
#include <span>

namespace fde {

/// Integral of (u - s)^{q-1} * g(s) over [s_{p0}, s_{p1}], where
/// g(s) = w(s) * s^{-mu}, w is the piecewise-linear interpolant of the
/// weighted samples on the uniform grid s_j = j*h, and u >= s_{p1}.
/// No 1/Gamma(q) factor; callers attach their own kernel normalization.
///
/// Panels close to the origin use the singular-prefactor product rule
/// (exact moments of s^{-mu} and s^{1-mu} against the binomially expanded
/// kernel); panels away from it use the plain product-trapezoidal rule with
/// exact kernel moments, which also handles the kernel endpoint s -> u.
double kernel_convolution(double h, std::span<const double> weighted, double mu,
                          double q, std::size_t p0, std::size_t p1, double u);

/// Hadamard fractional integral of order alpha > 0, sampled on f's grid.
/// Output weight exponent is mu - alpha when alpha < mu, otherwise 0.
WeightedSamples hadamard_integral(const WeightedSamples& f, double alpha);

/// Hadamard fractional derivative delta^n I^{n-alpha} f with
/// n = floor(alpha) + 1. delta^n is applied as n-fold second-order finite
/// differencing in u with one-sided endpoint stencils. The result is stored
/// de-weighted (mu = 0); values in the first few nodes are one-sided
/// estimates and, when the true derivative is singular at t = a, only the
/// interior nodes are meaningful.
WeightedSamples hadamard_derivative(const WeightedSamples& f, double alpha);

/// Hilfer-Hadamard derivative I^{beta(n-alpha)} delta^n I^{(n-alpha)(1-beta)} f.
WeightedSamples hilfer_hadamard_derivative(const WeightedSamples& f,
                                           const FractionalOrder& ord);

/// Closed form Gamma(beta_exp)/Gamma(alpha+beta_exp) * (log(t/a))^{alpha+beta_exp-1}
/// of the Hadamard integral of a power of the log.
double power_log_integral_closed_form(double alpha, double beta_exp, double a, double t);

/// One application of delta = t d/dt = d/du by second-order finite
/// differences on the de-weighted values. first_valid marks the first node
/// whose raw value is usable (1 when the input weight is nonzero).
std::vector<double> apply_log_derivative(std::span<const double> raw, double h,
                                         std::size_t first_valid);

} // namespace fde
