#include "fde/operators.hpp"

#include "fde/errors.hpp"
#include "fde/special_functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fde {

namespace {

// Exact integral of (u - s)^{q-1} against a linear function taking values
// g1 at s1 and g2 at s2 = s1 + h, with u >= s2. Handles the kernel endpoint
// B = u - s2 = 0.
double panel_product_trapezoid(double u, double q, double s1, double s2, double g1,
                               double g2) {
    const double h = s2 - s1;
    const double A = u - s1;
    const double B = std::max(u - s2, 0.0);
    const double Aq = std::pow(A, q);
    const double Bq = B > 0.0 ? std::pow(B, q) : 0.0;
    const double I0 = (Aq - Bq) / q;
    const double I1 = A * I0 - (Aq * A - Bq * B) / (q + 1.0);
    return g1 * (I0 - I1 / h) + g2 * (I1 / h);
}

// Integral of (u - s)^{q-1} s^c over [s1, s2] with s2 <= ratio_cap * u,
// by binomial expansion of (1 - s/u)^{q-1}. c > -1.
double panel_power_moment(double u, double q, double s1, double s2, double c) {
    double coef = 1.0;                       // C(q-1, m) (-1/u)^m
    double p1 = s1 > 0.0 ? std::pow(s1, c + 1.0) : 0.0;
    double p2 = std::pow(s2, c + 1.0);
    double sum = 0.0;
    for (int m = 0; m < 500; ++m) {
        const double term = coef * (p2 - p1) / (c + m + 1.0);
        sum += term;
        if (m > 4 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
        coef *= (m + 1.0 - q) / ((m + 1.0) * u);
        p1 *= s1;
        p2 *= s2;
    }
    return std::pow(u, q - 1.0) * sum;
}

// Integral of (u - s)^{q-1} (a0 + a1 s) s^{-mu} over [s1, s2] for panels
// near the kernel endpoint (s1 >= u/2), by expanding s^{-mu} around s = u
// in powers of r/u, r = u - s. Handles r1 = u - s2 = 0.
double panel_complement_moment(double u, double q, double s1, double s2, double mu,
                               double a0, double a1) {
    const double r1 = std::max(u - s2, 0.0);
    const double r2 = u - s1;
    const double b0 = a0 + a1 * u;
    const double b1 = -a1;
    double d = 1.0; // binomial coefficient of (r/u)^m in (1 - r/u)^{-mu}
    double p1 = r1 > 0.0 ? std::pow(r1, q) : 0.0;
    double p2 = std::pow(r2, q);
    double sum = 0.0;
    for (int m = 0; m < 500; ++m) {
        const double qm = q + static_cast<double>(m);
        const double term =
            d * (b0 * (p2 - p1) / qm + b1 * (p2 * r2 - p1 * r1) / (qm + 1.0));
        sum += term;
        if (m > 4 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
        d *= (mu + m) / ((m + 1.0) * u);
        p1 *= r1;
        p2 *= r2;
    }
    return std::pow(u, -mu) * sum;
}

// Panel spanning the origin with a singular prefactor s^{-mu}, weighted
// values w1 at s = 0 (the limit) and w2 at s = s2: integrates
// (u - s)^{q-1} w(s) s^{-mu} ds over [0, s2] with the two-point model
// w(s) = w1 + (w2 - w1)(s/s2)^q. Picard iterates and fractional-derivative
// stages carry exponent steps of q in their weighted samples, so this basis
// absorbs the leading non-smooth term at the origin; for constants it
// coincides with linear interpolation.
double panel_singular_origin(double u, double q, double s2, double mu, double w1,
                             double w2) {
    const double A = w1;
    const double B = (w2 - w1) * std::pow(s2, -q);
    if (s2 >= u) {
        // Full panel up to the kernel endpoint: exact Beta moments.
        const double beta0 =
            std::exp(log_gamma(1.0 - mu) + log_gamma(q) - log_gamma(1.0 - mu + q));
        const double betaq =
            std::exp(log_gamma(q + 1.0 - mu) + log_gamma(q) - log_gamma(2.0 * q + 1.0 - mu));
        return A * std::pow(u, q - mu) * beta0 + B * std::pow(u, 2.0 * q - mu) * betaq;
    }
    if (s2 <= 0.7 * u) {
        return A * panel_power_moment(u, q, 0.0, s2, -mu) +
               B * panel_power_moment(u, q, 0.0, s2, q - mu);
    }
    // Rare in-between case (u inside (s2, s2/0.7)): split at 0.7u; the right
    // part is close enough to the kernel endpoint for the complement series.
    const double mid = 0.7 * u;
    return A * (panel_power_moment(u, q, 0.0, mid, -mu) +
                panel_complement_moment(u, q, mid, s2, mu, 1.0, 0.0)) +
           B * (panel_power_moment(u, q, 0.0, mid, q - mu) +
                panel_complement_moment(u, q, mid, s2, mu - q, 1.0, 0.0));
}

} // namespace

double kernel_convolution(double h, std::span<const double> weighted, double mu, double q,
                          std::size_t p0, std::size_t p1, double u) {
    if (!(q > 0.0)) throw std::domain_error("kernel_convolution: kernel exponent must be > 0");
    if (p1 > weighted.size() - 1 || p0 > p1) {
        throw ShapeError("kernel_convolution: panel range outside sample array");
    }
    double total = 0.0;
    for (std::size_t j = p0; j < p1; ++j) {
        const double s1 = static_cast<double>(j) * h;
        const double s2 = static_cast<double>(j + 1) * h;
        if (mu != 0.0) {
            if (j == 0) {
                total += panel_singular_origin(u, q, s2, mu, weighted[0], weighted[1]);
                continue;
            }
            if (s2 <= 0.7 * u) {
                // Keep the singular prefactor exact: w linear on the panel,
                // g = w(s) s^{-mu}.
                const double a1 = (weighted[j + 1] - weighted[j]) / h;
                const double a0 = weighted[j] - a1 * s1;
                total += a0 * panel_power_moment(u, q, s1, s2, -mu) +
                         a1 * panel_power_moment(u, q, s1, s2, 1.0 - mu);
                continue;
            }
            const double a1 = (weighted[j + 1] - weighted[j]) / h;
            total += panel_complement_moment(u, q, s1, s2, mu, weighted[j] - a1 * s1, a1);
        } else {
            total += panel_product_trapezoid(u, q, s1, s2, weighted[j], weighted[j + 1]);
        }
    }
    return total;
}

WeightedSamples hadamard_integral(const WeightedSamples& f, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << "hadamard_integral: alpha must be > 0, got " << alpha;
        throw std::domain_error(os.str());
    }
    f.validate();
    const std::size_t n = f.grid.node_count;
    const double h = f.grid.h();
    const double out_mu = f.mu > alpha ? f.mu - alpha : 0.0;
    const double inv_gamma = std::exp(-log_gamma(alpha));

    WeightedSamples out(f.grid, out_mu);
    for (std::size_t i = 1; i < n; ++i) {
        const double ui = f.grid.u(i);
        const double raw = inv_gamma * kernel_convolution(h, f.values, f.mu, alpha, 0, i, ui);
        out.values[i] = out_mu == 0.0 ? raw : raw * std::pow(ui, out_mu);
    }
    // Weighted limit at t = a from the leading behavior w(0) u^{-mu}.
    out.values[0] = f.mu >= alpha
                        ? f.values[0] * gamma_ratio(1.0 - f.mu, 1.0 + alpha - f.mu)
                        : 0.0;
    return out;
}

std::vector<double> apply_log_derivative(std::span<const double> raw, double h,
                                         std::size_t first_valid) {
    const std::size_t n = raw.size();
    if (n < first_valid + 3) {
        throw ShapeError("apply_log_derivative: need at least 3 usable nodes");
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = first_valid; i < n; ++i) {
        if (i == first_valid) {
            out[i] = (-3.0 * raw[i] + 4.0 * raw[i + 1] - raw[i + 2]) / (2.0 * h);
        } else if (i == n - 1) {
            out[i] = (3.0 * raw[i] - 4.0 * raw[i - 1] + raw[i - 2]) / (2.0 * h);
        } else {
            out[i] = (raw[i + 1] - raw[i - 1]) / (2.0 * h);
        }
    }
    for (std::size_t i = 0; i < first_valid; ++i) out[i] = out[first_valid];
    return out;
}

namespace {

// Raw values of f usable for differencing: node 0 is skipped when the
// stored weight is nonzero.
std::pair<std::vector<double>, std::size_t> raw_for_differencing(const WeightedSamples& f) {
    const std::size_t n = f.grid.node_count;
    std::vector<double> raw(n, 0.0);
    const std::size_t first = f.mu != 0.0 ? 1 : 0;
    for (std::size_t i = first; i < n; ++i) raw[i] = f.raw(i);
    return {std::move(raw), first};
}

std::vector<double> delta_power(const WeightedSamples& f, int n_times) {
    auto [raw, first] = raw_for_differencing(f);
    const double h = f.grid.h();
    for (int k = 0; k < n_times; ++k) raw = apply_log_derivative(raw, h, first);
    return raw;
}

} // namespace

WeightedSamples hadamard_derivative(const WeightedSamples& f, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::domain_error("hadamard_derivative: alpha must be > 0");
    }
    f.validate();
    const int n = static_cast<int>(std::floor(alpha)) + 1;
    if (f.grid.node_count < static_cast<std::size_t>(n) + 2) {
        throw ShapeError("hadamard_derivative: grid too coarse for n-fold differencing");
    }
    WeightedSamples g = hadamard_integral(f, static_cast<double>(n) - alpha);
    return WeightedSamples(f.grid, 0.0, delta_power(g, n));
}

WeightedSamples hilfer_hadamard_derivative(const WeightedSamples& f,
                                           const FractionalOrder& ord) {
    f.validate();
    const double e_inner = (ord.n - ord.alpha) * (1.0 - ord.beta);
    const double e_outer = ord.beta * (ord.n - ord.alpha);
    if (f.grid.node_count < static_cast<std::size_t>(ord.n) + 2) {
        throw ShapeError("hilfer_hadamard_derivative: grid too coarse for n-fold differencing");
    }

    const WeightedSamples inner = e_inner > 0.0 ? hadamard_integral(f, e_inner) : f;
    if (e_outer == 0.0) return WeightedSamples(f.grid, 0.0, delta_power(inner, ord.n));

    // Between delta^n and the outer integral the intermediate behaves like
    // u^{alpha-1} near t = a (n = 1 case); carrying that exponent keeps the
    // outer quadrature accurate near the left endpoint.
    double mid_mu = 0.0;
    if (ord.n == 1 && ord.alpha < 1.0 && ord.alpha > 0.0) mid_mu = 1.0 - ord.alpha;
    WeightedSamples mid(f.grid, mid_mu);
    if (mid_mu == 0.0) {
        mid.values = delta_power(inner, ord.n);
    } else {
        // The inner stage steps in powers of alpha near u = 0, so polynomial
        // stencils in u lose all accuracy on the first nodes. Differencing in
        // v = u^alpha is exact on A + B u^alpha + C u^{2alpha}, and the
        // weighted sample u^{1-alpha} * delta(inner) is alpha * d(inner)/dv.
        auto [raw, first] = raw_for_differencing(inner);
        const std::size_t nn = f.grid.node_count;
        if (nn < first + 3) {
            throw ShapeError("hilfer_hadamard_derivative: grid too coarse for differencing");
        }
        std::vector<double> v(nn);
        for (std::size_t i = 0; i < nn; ++i) v[i] = std::pow(f.grid.u(i), ord.alpha);
        auto lagrange_dv = [&](std::size_t i0, std::size_t i1, std::size_t i2, double x) {
            const double x0 = v[i0];
            const double x1 = v[i1];
            const double x2 = v[i2];
            return raw[i0] * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
                   raw[i1] * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
                   raw[i2] * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
        };
        for (std::size_t i = first; i < nn; ++i) {
            std::size_t c = i;
            if (c == first) c = first + 1;
            if (c == nn - 1) c = nn - 2;
            mid.values[i] = ord.alpha * lagrange_dv(c - 1, c, c + 1, v[i]);
        }
        if (first == 1) {
            // Limit at u = 0 from a power fit A + B u^alpha through the
            // first two interior nodes.
            mid.values[0] =
                mid.values[1] -
                (mid.values[2] - mid.values[1]) / (std::pow(2.0, ord.alpha) - 1.0);
        }
    }
    return hadamard_integral(mid, e_outer);
}

double power_log_integral_closed_form(double alpha, double beta_exp, double a, double t) {
    if (!(alpha > 0.0) || !(beta_exp > 0.0)) {
        throw std::domain_error("power_log_integral_closed_form: alpha and beta_exp must be > 0");
    }
    if (!(a > 0.0) || !(t > a)) {
        std::ostringstream os;
        os << "power_log_integral_closed_form: need t > a > 0, got a=" << a << " t=" << t;
        throw std::domain_error(os.str());
    }
    return gamma_ratio(beta_exp, alpha + beta_exp) *
           std::pow(std::log(t / a), alpha + beta_exp - 1.0);
}

} // namespace fde
