#include "fde/grid.hpp"

#include "fde/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fde {

LogGrid::LogGrid(double a_, double b_, std::size_t nodes) : a(a_), b(b_), node_count(nodes) {
    if (!(a > 0.0) || !(b > a)) {
        std::ostringstream os;
        os << "LogGrid: need 0 < a < b, got a=" << a << " b=" << b;
        throw std::domain_error(os.str());
    }
    if (node_count < 2) throw ShapeError("LogGrid: node_count must be >= 2");
}

double LogGrid::span() const { return std::log(b / a); }

double LogGrid::h() const { return span() / static_cast<double>(node_count - 1); }

double LogGrid::u(std::size_t i) const {
    return i + 1 == node_count ? span() : static_cast<double>(i) * h();
}

double LogGrid::t(std::size_t i) const { return a * std::exp(u(i)); }

std::vector<double> LogGrid::u_values() const {
    std::vector<double> out(node_count);
    for (std::size_t i = 0; i < node_count; ++i) out[i] = u(i);
    return out;
}

bool LogGrid::same_as(const LogGrid& other) const {
    return a == other.a && b == other.b && node_count == other.node_count;
}

WeightedSamples::WeightedSamples(LogGrid g, double mu_)
    : grid(g), mu(mu_), values(g.node_count, 0.0) {
    validate();
}

WeightedSamples::WeightedSamples(LogGrid g, double mu_, std::vector<double> vals)
    : grid(g), mu(mu_), values(std::move(vals)) {
    validate();
}

double WeightedSamples::raw(std::size_t i) const {
    if (i == 0) {
        if (mu == 0.0) return values[0];
        throw std::domain_error("WeightedSamples::raw: de-weighted value at t=a is "
                                "undefined for mu != 0");
    }
    return values[i] * std::pow(grid.u(i), -mu);
}

void WeightedSamples::validate() const {
    if (!(mu > -1.0 && mu < 1.0)) {
        std::ostringstream os;
        os << "WeightedSamples: mu must lie in (-1, 1), got " << mu;
        throw std::domain_error(os.str());
    }
    if (values.size() != grid.node_count) {
        throw ShapeError("WeightedSamples: values length does not match grid");
    }
}

double weighted_norm(const WeightedSamples& f) {
    if (f.values.empty()) throw ShapeError("weighted_norm: empty samples");
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace fde
