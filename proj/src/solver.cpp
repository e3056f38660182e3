#include "fde/solver.hpp"

#include "fde/errors.hpp"
#include "fde/operators.hpp"
#include "fde/special_functions.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace fde {

void CauchyProblem::validate() const {
    if (!(a > 0.0) || !(b > a)) {
        std::ostringstream os;
        os << "CauchyProblem: need 0 < a < b, got a=" << a << " b=" << b;
        throw std::domain_error(os.str());
    }
    if (initial_values.size() != static_cast<std::size_t>(ord.n)) {
        throw ShapeError("CauchyProblem: initial_values length must equal n");
    }
    if (!(lipschitz > 0.0)) throw std::domain_error("CauchyProblem: lipschitz must be > 0");
}

double contraction_factor(const CauchyProblem& p, double du) {
    const double g = p.ord.gamma_val - p.ord.n + 1.0; // in (0, 1]
    return p.lipschitz * gamma_ratio(g, p.ord.alpha + g) * std::pow(du, p.ord.alpha);
}

WeightedSamples assemble_initial_term(const CauchyProblem& p, const LogGrid& grid) {
    p.validate();
    const double mu = p.ord.solution_weight();
    WeightedSamples out(grid, mu);
    // Weighted form: sum_k x_{a_k} u^{n-k} / Gamma(gamma-k+1), a polynomial in u.
    for (std::size_t i = 0; i < grid.node_count; ++i) {
        const double u = grid.u(i);
        double acc = 0.0;
        for (int k = 1; k <= p.ord.n; ++k) {
            const double coef =
                p.initial_values[static_cast<std::size_t>(k - 1)] *
                std::exp(-log_gamma(p.ord.gamma_val - k + 1.0));
            acc += k == p.ord.n ? coef : coef * std::pow(u, static_cast<double>(p.ord.n - k));
        }
        out.values[i] = acc;
    }
    return out;
}

namespace {

// Weighted samples of phi(t, x(t)) on x's grid, with the same weight
// exponent as x. The t = a node holds the weighted limit, obtained from a
// power fit w(u) = A + B u^alpha through the first two interior nodes.
std::vector<double> weighted_rhs_samples(const CauchyProblem& p, const WeightedSamples& x) {
    const LogGrid& grid = x.grid;
    std::vector<double> w(grid.node_count, 0.0);
    for (std::size_t i = 1; i < grid.node_count; ++i) {
        const double t = grid.t(i);
        double value;
        try {
            value = p.rhs(t, x.raw(i));
        } catch (const EvalError& e) {
            std::ostringstream os;
            os << e.what() << " (while evaluating the right-hand side at node " << i
               << ", t=" << t << ")";
            throw EvalError(os.str(), e.column());
        }
        w[i] = x.mu == 0.0 ? value : value * std::pow(grid.u(i), x.mu);
    }
    if (x.mu == 0.0) {
        w[0] = p.rhs(grid.t(0), x.raw(0));
    } else {
        w[0] = w[1] - (w[2] - w[1]) / (std::pow(2.0, p.ord.alpha) - 1.0);
    }
    return w;
}

} // namespace

WeightedSamples apply_picard_operator(const CauchyProblem& p, const WeightedSamples& x_prev,
                                      const WeightedSamples& base_term, double left) {
    x_prev.validate();
    if (!x_prev.grid.same_as(base_term.grid) || x_prev.mu != base_term.mu) {
        throw ShapeError("apply_picard_operator: x_prev and base_term must share grid and weight");
    }
    if (x_prev.grid.a != left) {
        throw ShapeError("apply_picard_operator: grid must start at the working subinterval");
    }
    const LogGrid& grid = x_prev.grid;
    const double h = grid.h();
    const double mu = x_prev.mu;
    const double inv_gamma = std::exp(-log_gamma(p.ord.alpha));
    const std::vector<double> wphi = weighted_rhs_samples(p, x_prev);

    WeightedSamples out(grid, mu);
    out.values[0] = base_term.values[0];
    for (std::size_t i = 1; i < grid.node_count; ++i) {
        const double ui = grid.u(i);
        const double raw =
            inv_gamma * kernel_convolution(h, wphi, mu, p.ord.alpha, 0, i, ui);
        out.values[i] =
            base_term.values[i] + (mu == 0.0 ? raw : raw * std::pow(ui, mu));
    }
    return out;
}

SubdivisionPlan plan_subdivision(const CauchyProblem& p, double omega_target) {
    p.validate();
    if (!(omega_target > 0.0 && omega_target < 1.0)) {
        throw std::domain_error("plan_subdivision: omega_target must lie in (0, 1)");
    }
    const double span = std::log(p.b / p.a);
    const double g = p.ord.gamma_val - p.ord.n + 1.0;
    const double du = std::pow(
        omega_target * gamma_ratio(p.ord.alpha + g, g) / p.lipschitz, 1.0 / p.ord.alpha);

    SubdivisionPlan plan;
    if (du < 1e-12 * span) {
        const long long needed = static_cast<long long>(std::ceil(span / du));
        std::ostringstream os;
        os << "plan_subdivision: step length " << du << " underflows the interval; "
           << needed << " subintervals would be required";
        throw PlanningError(os.str(), needed);
    }
    plan.breakpoints.push_back(p.a);
    double u_left = 0.0;
    while (u_left + du < span * (1.0 - 1e-12)) {
        u_left += du;
        plan.breakpoints.push_back(p.a * std::exp(u_left));
        plan.omegas.push_back(contraction_factor(p, du));
    }
    plan.breakpoints.push_back(p.b);
    plan.omegas.push_back(contraction_factor(p, span - u_left));
    return plan;
}

namespace {

// Subdivision snapped to grid nodes: every full step spans floor(du/h)
// panels, so omega_i <= omega_target on every subinterval.
std::vector<std::size_t> plan_node_indices(const CauchyProblem& p, const LogGrid& grid,
                                           double omega_target) {
    const double g = p.ord.gamma_val - p.ord.n + 1.0;
    const double du = std::pow(
        omega_target * gamma_ratio(p.ord.alpha + g, g) / p.lipschitz, 1.0 / p.ord.alpha);
    const double h = grid.h();
    std::size_t step = static_cast<std::size_t>(std::floor(du / h));
    if (step == 0) {
        step = 1;
        if (contraction_factor(p, h) >= 1.0) {
            std::ostringstream os;
            os << "solve_cauchy: even a single grid panel has contraction factor "
               << contraction_factor(p, h) << " >= 1; refine the grid";
            throw PlanningError(os.str(), static_cast<long long>(std::ceil(grid.span() / du)));
        }
    }
    std::vector<std::size_t> idx{0};
    std::size_t j = 0;
    while (j + step < grid.node_count - 1) {
        j += step;
        idx.push_back(j);
    }
    idx.push_back(grid.node_count - 1);
    return idx;
}

} // namespace

SolverReport solve_cauchy(const CauchyProblem& p, const LogGrid& grid, double tol,
                          int max_iter, double omega_target) {
    p.validate();
    if (grid.a != p.a || grid.b != p.b) {
        throw ShapeError("solve_cauchy: grid must span [a, b] of the problem");
    }
    if (!(tol > 0.0)) throw std::domain_error("solve_cauchy: tol must be > 0");

    const double mu = p.ord.solution_weight();
    const double alpha = p.ord.alpha;
    const double h = grid.h();
    const double inv_gamma = std::exp(-log_gamma(alpha));
    const std::size_t n_nodes = grid.node_count;

    const WeightedSamples initial_term = assemble_initial_term(p, grid);
    const std::vector<std::size_t> bp = plan_node_indices(p, grid, omega_target);
    const std::size_t n_intervals = bp.size() - 1;

    SolverReport report;
    report.plan.breakpoints.reserve(bp.size());
    for (std::size_t j : bp) report.plan.breakpoints.push_back(grid.t(j));
    for (std::size_t i = 0; i < n_intervals; ++i) {
        report.plan.omegas.push_back(contraction_factor(p, grid.u(bp[i + 1]) - grid.u(bp[i])));
    }

    std::vector<double> w(n_nodes, 0.0);        // global weighted solution
    std::vector<double> wphi(n_nodes, 0.0);     // weighted phi(t, x(t)) on solved nodes

    for (std::size_t iv = 0; iv < n_intervals; ++iv) {
        const std::size_t j0 = bp[iv];
        const std::size_t j1 = bp[iv + 1];
        const std::size_t m = j1 - j0 + 1;
        const bool first = iv == 0;
        const double left = grid.t(j0);
        const LogGrid local(left, grid.t(j1), m);
        const double local_mu = first ? mu : 0.0;

        // Base term: x_0 on the first subinterval, x_0 plus the history
        // integral over the already-solved [a, t_{iv-1}] afterwards.
        WeightedSamples base(local, local_mu);
        if (first) {
            for (std::size_t i = 0; i < m; ++i) base.values[i] = initial_term.values[i];
        } else {
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t j = j0 + i;
                const double uj = grid.u(j);
                const double hist =
                    inv_gamma * kernel_convolution(h, wphi, mu, alpha, 0, j0, uj);
                base.values[i] = initial_term.values[j] * std::pow(uj, -mu) + hist;
            }
        }

        // Warm start: constant continuation of the left-boundary value in
        // weighted form (the base-term limit on the first subinterval).
        WeightedSamples x_cur(local, local_mu);
        const double boundary = first ? base.values[0] : w[j0] * std::pow(grid.u(j0), -mu);
        for (std::size_t i = 0; i < m; ++i) x_cur.values[i] = boundary;

        double delta_prev = -1.0;
        double delta = 0.0;
        int iters = 0;
        std::vector<double> ratios;
        bool converged = false;
        for (int it = 1; it <= max_iter; ++it) {
            WeightedSamples x_next = apply_picard_operator(p, x_cur, base, left);
            delta = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double d = std::abs(x_next.values[i] - x_cur.values[i]);
                if (!first) d *= std::pow(grid.u(j0 + i), mu); // metric weighted by log(t/a)
                delta = std::max(delta, d);
            }
            x_cur = std::move(x_next);
            iters = it;
            if (it >= 2 && delta_prev > 0.0) ratios.push_back(delta / delta_prev);
            delta_prev = delta;
            if (delta < tol) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream os;
            os << "solve_cauchy: subinterval " << iv + 1 << "/" << n_intervals
               << " did not converge within " << max_iter << " sweeps (last update " << delta
               << ", omega=" << report.plan.omegas[iv] << ")";
            throw ConvergenceError(os.str(), delta);
        }
        report.iterations.push_back(iters);
        report.final_deltas.push_back(delta);
        report.update_ratios.push_back(std::move(ratios));

        // Commit to the global arrays.
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = j0 + i;
            w[j] = first ? x_cur.values[i] : x_cur.values[i] * std::pow(grid.u(j), mu);
        }
        const std::vector<double> wphi_full = weighted_rhs_samples(
            p, WeightedSamples(LogGrid(grid.a, grid.t(j1), j1 + 1), mu,
                               std::vector<double>(w.begin(), w.begin() + j1 + 1)));
        for (std::size_t j = 0; j <= j1; ++j) wphi[j] = wphi_full[j];
    }

    report.solution = WeightedSamples(grid, mu, std::move(w));
    report.residual_norm = vie_residual(p, report.solution);
    return report;
}

double vie_residual(const CauchyProblem& p, const WeightedSamples& x) {
    p.validate();
    x.validate();
    const LogGrid& grid = x.grid;
    if (grid.a != p.a || grid.b != p.b) {
        throw ShapeError("vie_residual: samples must span the problem interval");
    }
    const double mu = p.ord.solution_weight();
    const double h = grid.h();
    const double inv_gamma = std::exp(-log_gamma(p.ord.alpha));
    const WeightedSamples initial_term = assemble_initial_term(p, grid);
    const std::vector<double> wphi = weighted_rhs_samples(p, x);

    double norm = std::abs(x.values[0] - initial_term.values[0]);
    for (std::size_t i = 1; i < grid.node_count; ++i) {
        const double ui = grid.u(i);
        const double raw = inv_gamma * kernel_convolution(h, wphi, mu, p.ord.alpha, 0, i, ui);
        const double rhs_val = initial_term.values[i] + raw * std::pow(ui, mu);
        norm = std::max(norm, std::abs(x.values[i] - rhs_val));
    }
    return norm;
}

} // namespace fde
