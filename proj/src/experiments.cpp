#include "fde/experiments.hpp"

#include "fde/bounds.hpp"
#include "fde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fde {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }

// Largest |phi(t, x(t))| along the solved trajectory, sampled outside the
// 5% boundary layer where the raw solution may diverge.
double sampled_phi_sup(const CauchyProblem& p, const WeightedSamples& x) {
    const std::size_t first = probe_indices(x.grid, 2).front();
    double sup = 0.0;
    for (std::size_t i = first; i < x.grid.node_count; ++i) {
        sup = std::max(sup, std::abs(p.rhs(x.grid.t(i), x.raw(i))));
    }
    return sup;
}

SolverReport solve_labeled(const CauchyProblem& p, const LogGrid& grid, double tol,
                           double omega_target, const char* label) {
    try {
        return solve_cauchy(p, grid, tol, 200, omega_target);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(label) + ": " + e.what(), e.last_update());
    }
}

ExperimentReport assemble_report(const CauchyProblem& base, const SolverReport& base_run,
                                 const SolverReport& pert_run, const LogGrid& grid,
                                 int probes, double tol,
                                 const std::function<double(double)>& envelope_at) {
    ExperimentReport r;
    r.alpha = base.ord.alpha;
    r.beta = base.ord.beta;
    r.lipschitz = base.lipschitz;
    r.grid_nodes = grid.node_count;
    r.base_residual = base_run.residual_norm;
    r.perturbed_residual = pert_run.residual_norm;
    r.slack = 10.0 * (tol + base_run.residual_norm + pert_run.residual_norm);

    bool ok = true;
    for (std::size_t i : probe_indices(grid, probes)) {
        const double t = grid.t(i);
        const double gap = std::abs(pert_run.solution.raw(i) - base_run.solution.raw(i));
        const double env = envelope_at(t);
        r.probe_times.push_back(t);
        r.measured_gap.push_back(gap);
        r.envelope.push_back(env);
        r.margin.push_back(env - gap);
        ok = ok && env - gap >= -r.slack;
    }
    r.verdict = ok;
    return r;
}

} // namespace

std::vector<std::size_t> probe_indices(const LogGrid& grid, int count) {
    if (count < 1) throw std::domain_error("probe_indices: count must be >= 1");
    const double cutoff = 0.05 * grid.span();
    std::size_t lo = 1;
    while (lo < grid.node_count - 1 && grid.u(lo) < cutoff) ++lo;
    const std::size_t hi = grid.node_count - 1;

    std::vector<std::size_t> idx;
    if (count == 1 || lo == hi) {
        idx.push_back(hi);
        return idx;
    }
    const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
    for (int k = 0; k < count; ++k) {
        const double x = lo * std::pow(ratio, static_cast<double>(k) / (count - 1));
        const std::size_t i = std::min(hi, static_cast<std::size_t>(std::llround(x)));
        if (idx.empty() || i > idx.back()) idx.push_back(i);
    }
    return idx;
}

ExperimentReport order_perturbation_experiment(const CauchyProblem& base, double delta,
                                               const LogGrid& grid, int probes, double tol,
                                               double omega_target) {
    base.validate();
    if (base.ord.n != 1) {
        throw std::domain_error(
            "order_perturbation_experiment: only orders 0 < alpha < 1 are covered");
    }
    PerturbationSpec spec;
    spec.delta = delta;
    spec.base = base;
    spec.validate();

    const SolverReport base_run = solve_labeled(base, grid, tol, omega_target, "base problem");
    CauchyProblem pert = base;
    pert.ord = FractionalOrder(base.ord.alpha - delta, base.ord.beta, 1);
    const SolverReport pert_run =
        solve_labeled(pert, grid, tol, omega_target, "perturbed problem");

    spec.phi_sup = sampled_phi_sup(base, base_run.solution);
    ExperimentReport r = assemble_report(
        base, base_run, pert_run, grid, probes, tol,
        [&](double t) { return hilfer_dependence_envelope(spec, base.ord, t); });
    r.delta = delta;
    return r;
}

ExperimentReport epsilon_perturbation_experiment(const CauchyProblem& base, double epsilon,
                                                 const LogGrid& grid, int probes, double tol,
                                                 double omega_target) {
    base.validate();
    if (base.ord.n != 1) {
        throw std::domain_error(
            "epsilon_perturbation_experiment: only orders 0 < alpha < 1 are covered");
    }
    const SolverReport base_run = solve_labeled(base, grid, tol, omega_target, "base problem");
    CauchyProblem pert = base;
    pert.initial_values[0] += epsilon;
    const SolverReport pert_run =
        solve_labeled(pert, grid, tol, omega_target, "perturbed problem");

    ExperimentReport r = assemble_report(base, base_run, pert_run, grid, probes, tol,
                                         [&](double t) {
                                             return epsilon_ml_bound(base.ord, base.lipschitz,
                                                                     epsilon, base.a, t);
                                         });
    r.epsilon = epsilon;
    return r;
}

std::vector<ConvergenceRow> grid_convergence_study(
    const CauchyProblem& p, const std::vector<std::size_t>& node_counts,
    const std::function<double(double)>& exact_raw, double tol, double omega_target) {
    if (node_counts.size() < 2) {
        throw ShapeError("grid_convergence_study: need at least 2 node counts");
    }
    p.validate();
    const double mu = p.ord.solution_weight();

    std::vector<ConvergenceRow> rows;
    for (std::size_t nodes : node_counts) {
        const LogGrid grid(p.a, p.b, nodes);
        const SolverReport run = solve_cauchy(p, grid, tol, 200, omega_target);
        double err = 0.0;
        for (std::size_t i = 1; i < nodes; ++i) {
            const double exact_w = std::pow(grid.u(i), mu) * exact_raw(grid.t(i));
            err = std::max(err, std::abs(run.solution.values[i] - exact_w));
        }
        ConvergenceRow row;
        row.nodes = nodes;
        row.h = grid.h();
        row.error = err;
        if (rows.empty()) {
            row.order = std::numeric_limits<double>::quiet_NaN();
        } else {
            const ConvergenceRow& prev = rows.back();
            row.order = std::log(prev.error / err) / std::log(prev.h / row.h);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string solution_csv(const WeightedSamples& x) {
    x.validate();
    std::ostringstream os;
    os << "t,u,weighted_value,raw_value\n";
    for (std::size_t i = 0; i < x.grid.node_count; ++i) {
        double raw;
        if (i == 0 && x.mu != 0.0) {
            raw = x.values[0] == 0.0
                      ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(), x.values[0]);
        } else {
            raw = x.raw(i);
        }
        os << fmt(x.grid.t(i)) << ',' << fmt(x.grid.u(i)) << ',' << fmt(x.values[i]) << ','
           << fmt(raw) << '\n';
    }
    return os.str();
}

std::string experiment_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "t,measured_gap,envelope,margin\n";
    for (std::size_t i = 0; i < r.probe_times.size(); ++i) {
        os << fmt(r.probe_times[i]) << ',' << fmt(r.measured_gap[i]) << ','
           << fmt(r.envelope[i]) << ',' << fmt(r.margin[i]) << '\n';
    }
    return os.str();
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    os << "nodes,h,error,order\n";
    for (const ConvergenceRow& row : rows) {
        os << fmt(row.nodes) << ',' << fmt(row.h) << ',' << fmt(row.error) << ','
           << fmt(row.order) << '\n';
    }
    return os.str();
}

} // namespace fde
