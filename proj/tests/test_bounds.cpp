#include <doctest.h>

#include "fde/bounds.hpp"
#include "fde/errors.hpp"
#include "fde/special_functions.hpp"

#include <cmath>
#include <vector>

using namespace fde;

namespace {

double ml_oracle(double alpha, double gamma, double y) {
    long double sum = 0.0L;
    for (int i = 0; i < 400; ++i) {
        const long double term =
            std::pow(static_cast<long double>(y), static_cast<long double>(i)) *
            std::exp(-std::lgamma(static_cast<long double>(i) * alpha + gamma));
        sum += term;
        if (i > 5 && std::abs(static_cast<double>(term)) <
                         1e-21 * std::max(1.0, std::abs(static_cast<double>(sum)))) {
            break;
        }
    }
    return static_cast<double>(sum);
}

// Brute-force fixed point of v = u + psi(t) * int_a^t (log(t/tau))^{alpha-1}
// v(tau) dtau/tau, with its own product-trapezoidal panels.
std::vector<double> fixed_point_oracle(const LogGrid& grid, const std::vector<double>& u_vals,
                                       const std::vector<double>& psi_vals, double alpha) {
    const std::size_t n = grid.node_count;
    const double h = grid.h();
    std::vector<double> v = u_vals;
    for (int sweep = 0; sweep < 400; ++sweep) {
        std::vector<double> next(n);
        next[0] = u_vals[0];
        double change = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double ui = grid.u(i);
            double integral = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                const double s1 = j * h;
                const double s2 = (j + 1) * h;
                const double a_pow = std::pow(ui - s1, alpha);
                const double b_pow = j + 1 == i ? 0.0 : std::pow(ui - s2, alpha);
                const double m0 = (a_pow - b_pow) / alpha;
                const double m1 =
                    ui * m0 - (a_pow * (ui - s1) - b_pow * (ui - s2)) / (alpha + 1.0);
                const double slope = (v[j + 1] - v[j]) / h;
                integral += (v[j] - slope * s1) * m0 + slope * m1;
            }
            next[i] = u_vals[i] + psi_vals[i] * integral;
            change = std::max(change, std::abs(next[i] - v[i]));
        }
        v = std::move(next);
        if (change < 1e-13) break;
    }
    return v;
}

GronwallInput constant_input(double alpha, double c, double psi0, std::size_t nodes = 257) {
    GronwallInput g;
    g.grid = LogGrid(1.0, std::exp(1.0), nodes);
    g.alpha = alpha;
    g.u_vals.assign(nodes, c);
    g.psi_vals.assign(nodes, psi0);
    return g;
}

CauchyProblem linear_base(double alpha, double beta) {
    CauchyProblem p;
    p.ord = FractionalOrder(alpha, beta, 1);
    p.a = 1.0;
    p.b = std::exp(1.0);
    p.initial_values = {1.0};
    p.rhs = Rhs::linear(1.0);
    p.lipschitz = 1.0;
    return p;
}

} // namespace

TEST_CASE("gronwall_series_bound closed form for constant inputs") {
    for (double alpha : {0.5, 1.0}) {
        const GronwallInput g = constant_input(alpha, 2.0, 0.75);
        const std::vector<double> bound = gronwall_series_bound(g);
        const double gamma_alpha = std::exp(log_gamma(alpha));
        CAPTURE(alpha);
        for (std::size_t i = 0; i < g.grid.node_count; ++i) {
            const double s = g.grid.u(i);
            const double exact =
                2.0 * ml_oracle(alpha, 1.0, 0.75 * gamma_alpha * std::pow(s, alpha));
            CHECK(bound[i] == doctest::Approx(exact).epsilon(1e-6));
        }
    }
}

TEST_CASE("gronwall_series_bound specializes to the classical estimate at alpha = 1") {
    const GronwallInput g = constant_input(1.0, 1.0, 2.0, 65);
    const std::vector<double> bound = gronwall_series_bound(g);
    for (std::size_t i = 0; i < g.grid.node_count; ++i) {
        // c * (t/a)^{psi0}
        const double exact = std::pow(g.grid.t(i) / g.grid.a, 2.0);
        CHECK(bound[i] == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("gronwall_series_bound dominates the brute-force fixed point") {
    for (double alpha : {0.5, 1.0}) {
        const GronwallInput g = constant_input(alpha, 1.0, 1.0);
        const std::vector<double> bound = gronwall_series_bound(g);
        const std::vector<double> v = fixed_point_oracle(g.grid, g.u_vals, g.psi_vals, alpha);
        CAPTURE(alpha);
        // The oracle integrates a convex iterate with trapezoids, so it can
        // overshoot the continuum fixed point by a few 1e-6.
        for (std::size_t i = 0; i < g.grid.node_count; ++i) {
            CHECK(bound[i] >= v[i] - 1e-5);
        }
    }
}

TEST_CASE("gronwall_series_bound of zero input is zero") {
    GronwallInput g = constant_input(0.5, 0.0, 1.0, 33);
    for (double b : gronwall_series_bound(g)) CHECK(b == 0.0);
}

TEST_CASE("gronwall input validation") {
    GronwallInput g = constant_input(0.5, 1.0, 1.0, 17);
    g.u_vals[3] = -0.1;
    CHECK_THROWS_AS(gronwall_series_bound(g), std::domain_error);

    GronwallInput g2 = constant_input(0.5, 1.0, 1.0, 17);
    g2.psi_vals[5] = 0.5; // breaks monotonicity
    CHECK_THROWS_AS(gronwall_series_bound(g2), std::domain_error);

    GronwallInput g3 = constant_input(-0.5, 1.0, 1.0, 17);
    CHECK_THROWS_AS(gronwall_series_bound(g3), std::domain_error);

    GronwallInput g4 = constant_input(0.5, 1.0, 1.0, 17);
    g4.u_vals.pop_back();
    CHECK_THROWS_AS(gronwall_series_bound(g4), ShapeError);
}

TEST_CASE("gronwall series cap raises a convergence error") {
    GronwallInput g = constant_input(0.5, 1.0, 5.0, 33);
    g.series_cap = 2;
    CHECK_THROWS_AS(gronwall_series_bound(g), ConvergenceError);
}

TEST_CASE("hadamard envelope degenerate cases") {
    PerturbationSpec s;
    s.base = linear_base(0.9, 0.0);
    const double t = std::exp(0.5);

    // delta -> 0 with equal initial data: all three H-terms cancel.
    s.delta = 1e-12;
    CHECK(hadamard_dependence_envelope(s, t) < 1e-8);

    // delta = 0 with an initial-value shift: only the first term survives.
    s.delta = 0.0;
    s.epsilon = 0.25;
    s.base.lipschitz = 1e-8; // make the series correction negligible
    const double alpha = s.base.ord.alpha;
    const double expected =
        0.25 * std::pow(0.5, alpha - 1.0) * std::exp(-log_gamma(alpha));
    CHECK(hadamard_dependence_envelope(s, t) == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("hilfer envelope reduces to the hadamard one at beta = 0") {
    PerturbationSpec s;
    s.base = linear_base(0.9, 0.0);
    s.delta = 0.1;
    s.phi_sup = 1.5;
    for (double t : {1.2, 2.0, std::exp(1.0)}) {
        CHECK(hilfer_dependence_envelope(s, s.base.ord, t) ==
              doctest::Approx(hadamard_dependence_envelope(s, t)).epsilon(1e-12));
    }
}

TEST_CASE("hilfer envelope vanishes without a perturbation") {
    PerturbationSpec s;
    s.base = linear_base(0.9, 1.0);
    CHECK(hilfer_dependence_envelope(s, s.base.ord, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("envelopes are monotone in the perturbation size") {
    PerturbationSpec lo;
    lo.base = linear_base(0.9, 1.0);
    lo.delta = 0.05;
    lo.phi_sup = 1.0;
    PerturbationSpec hi = lo;
    hi.delta = 0.1;
    const double t = 2.0;
    CHECK(hilfer_dependence_envelope(hi, hi.base.ord, t) >=
          hilfer_dependence_envelope(lo, lo.base.ord, t));

    PerturbationSpec more_phi = lo;
    more_phi.phi_sup = 2.0;
    CHECK(hilfer_dependence_envelope(more_phi, more_phi.base.ord, t) >=
          hilfer_dependence_envelope(lo, lo.base.ord, t));

    PerturbationSpec eps_lo = lo;
    eps_lo.delta = 0.0;
    eps_lo.epsilon = 0.01;
    PerturbationSpec eps_hi = eps_lo;
    eps_hi.epsilon = 0.02;
    CHECK(hadamard_dependence_envelope(eps_hi, t) >= hadamard_dependence_envelope(eps_lo, t));
}

TEST_CASE("envelope domain and hypothesis validation") {
    PerturbationSpec s;
    s.base = linear_base(0.9, 0.0);
    s.delta = 0.05;
    CHECK_THROWS_AS(hadamard_dependence_envelope(s, s.base.a), std::domain_error);
    CHECK_THROWS_AS(hadamard_dependence_envelope(s, s.base.b * 1.5), std::domain_error);

    PerturbationSpec bad = s;
    bad.delta = 0.95; // alpha - delta <= 0
    CHECK_THROWS_AS(hadamard_dependence_envelope(bad, 2.0), std::domain_error);
}

TEST_CASE("epsilon_ml_bound values and limits") {
    const FractionalOrder ord(0.5, 1.0, 1); // gamma = 1
    CHECK(epsilon_ml_bound(ord, 1.0, 0.0, 1.0, 2.0) == 0.0);

    const double bound = epsilon_ml_bound(ord, 1.0, 0.01, 1.0, std::exp(1.0));
    CHECK(bound == doctest::Approx(0.01 * std::exp(1.0) * std::erfc(-1.0)).epsilon(1e-10));

    // Near alpha = 1, gamma = 1 the bound approaches |eps| e^{L log(t/a)}.
    const FractionalOrder near_one(1.0 - 1e-9, 1.0, 1);
    const double b1 = epsilon_ml_bound(near_one, 2.0, 0.5, 1.0, std::exp(1.0));
    CHECK(b1 == doctest::Approx(0.5 * std::exp(2.0)).epsilon(1e-6));

    // Weighted limit |eps|/Gamma(gamma) as t -> a+.
    const FractionalOrder half(0.5, 0.0, 1); // gamma = 0.5
    const double a = 1.0;
    const double t = a * std::exp(1e-8);
    const double weighted =
        epsilon_ml_bound(half, 1.0, 0.3, a, t) * std::pow(std::log(t / a), 0.5);
    CHECK(weighted == doctest::Approx(0.3 * std::exp(-log_gamma(0.5))).epsilon(1e-3));

    CHECK_THROWS_AS(epsilon_ml_bound(ord, 1.0, 0.01, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(epsilon_ml_bound(ord, 1.0, 0.01, 2.0, 1.5), std::domain_error);
}
