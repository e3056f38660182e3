#pragma once

#include "fde/grid.hpp"
#include "fde/solver.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fde {

/// Paired-solve validation record: measured solution gaps against the
/// corresponding a priori envelope at a set of probe times.
struct ExperimentReport {
    std::vector<double> probe_times;
    std::vector<double> measured_gap; // |x~(t) - x(t)| at the probes
    std::vector<double> envelope;
    std::vector<double> margin; // envelope - measured_gap
    bool verdict = false;       // margin >= -slack at every probe

    double alpha = 0.0;
    double beta = 0.0;
    double lipschitz = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::size_t grid_nodes = 0;
    double slack = 0.0;
    double base_residual = 0.0;
    double perturbed_residual = 0.0;
};

/// Solves the problem twice, at orders alpha and alpha - delta (same beta),
/// and checks the measured gap against the order-dependence envelope. The
/// perturbed problem keeps the same initial datum, isolating order
/// sensitivity. Probes are a geometric subsample of the grid nodes outside
/// the 5% boundary layer at t = a.
ExperimentReport order_perturbation_experiment(const CauchyProblem& base, double delta,
                                               const LogGrid& grid, int probes = 32,
                                               double tol = 1e-10,
                                               double omega_target = 0.5);

/// Solves the problem twice, with initial data x_a and x_a + epsilon, and
/// checks the measured gap against the Mittag-Leffler dependence bound.
ExperimentReport epsilon_perturbation_experiment(const CauchyProblem& base, double epsilon,
                                                 const LogGrid& grid, int probes = 32,
                                                 double tol = 1e-10,
                                                 double omega_target = 0.5);

struct ConvergenceRow {
    std::size_t nodes = 0;
    double h = 0.0;
    double error = 0.0;
    double order = 0.0; // empirical order vs the previous row; NaN on the first
};

/// Weighted sup-norm error against a closed-form solution per grid size,
/// with the empirical refinement order between consecutive sizes.
std::vector<ConvergenceRow> grid_convergence_study(
    const CauchyProblem& p, const std::vector<std::size_t>& node_counts,
    const std::function<double(double)>& exact_raw, double tol = 1e-10,
    double omega_target = 0.5);

/// Probe node indices: a geometric subsample of count nodes between the
/// first node outside the 5% boundary layer and the last node.
std::vector<std::size_t> probe_indices(const LogGrid& grid, int count);

/// CSV emission, deterministic, 17 significant digits.
/// Schemas: solve (t,u,weighted_value,raw_value); experiment
/// (t,measured_gap,envelope,margin); converge (nodes,h,error,order).
std::string solution_csv(const WeightedSamples& x);
std::string experiment_csv(const ExperimentReport& r);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

} // namespace fde
