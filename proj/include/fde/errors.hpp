#pragma once

#include <stdexcept>
#include <string>

namespace fde {

// Thrown when a truncated series or a fixed-point iteration fails to reach
// its tolerance within the configured budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_update)
        : std::runtime_error(what), last_update_(last_update) {}

    double last_update() const { return last_update_; }

private:
    double last_update_;
};

// Mismatched grids, empty sample arrays, grids too coarse for a stencil.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Subdivision planning cannot produce usable steps (e.g. the Lipschitz
// constant forces a step length below grid resolution).
class PlanningError : public std::runtime_error {
public:
    PlanningError(const std::string& what, long long required_steps)
        : std::runtime_error(what), required_steps_(required_steps) {}

    long long required_steps() const { return required_steps_; }

private:
    long long required_steps_;
};

// Failure inside a user-supplied right-hand side (division by zero,
// log of a non-positive argument), carrying the source column of the
// offending expression node.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, int column)
        : std::runtime_error(what), column_(column) {}

    int column() const { return column_; }

private:
    int column_;
};

} // namespace fde
