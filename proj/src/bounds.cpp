#include "fde/bounds.hpp"

#include "fde/errors.hpp"
#include "fde/operators.hpp"
#include "fde/special_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fde {

namespace {

constexpr int kEnvelopeSeriesCap = 200;
constexpr double kEnvelopeSeriesTol = 1e-12;
constexpr std::size_t kEnvelopeNodes = 257;

// Smallest K for which exp(lb)^k span^{kq} / Gamma(kq + 1) drops below
// tol times the running total of those terms. lb is the log of the
// per-power coefficient magnitude; returns 0 for an empty interval.
int series_truncation(double lb, double q, double span, double tol, int cap,
                      const char* what) {
    if (!(span > 0.0) || lb == -std::numeric_limits<double>::infinity()) return 0;
    const double lspan = std::log(span);
    double total = 1.0;
    double term = 0.0;
    for (int k = 1; k <= cap; ++k) {
        term = std::exp(k * (lb + q * lspan) - log_gamma(k * q + 1.0));
        total += term;
        if (term < tol * total) return k;
    }
    std::ostringstream os;
    os << what << ": series cap " << cap << " exceeded before reaching tolerance " << tol;
    throw ConvergenceError(os.str(), term);
}

} // namespace

void GronwallInput::validate() const {
    if (u_vals.size() != grid.node_count || psi_vals.size() != grid.node_count) {
        throw ShapeError("GronwallInput: u_vals and psi_vals must match the grid length");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::domain_error("GronwallInput: alpha must be > 0");
    }
    if (series_cap < 1) throw std::domain_error("GronwallInput: series_cap must be >= 1");
    if (!(series_tol > 0.0)) throw std::domain_error("GronwallInput: series_tol must be > 0");
    for (std::size_t i = 0; i < grid.node_count; ++i) {
        if (!(u_vals[i] >= 0.0)) {
            throw std::domain_error("GronwallInput: u_vals must be nonnegative");
        }
        if (!(psi_vals[i] >= 0.0)) {
            throw std::domain_error("GronwallInput: psi_vals must be nonnegative");
        }
        if (i > 0 && psi_vals[i] < psi_vals[i - 1]) {
            throw std::domain_error("GronwallInput: psi_vals must be nondecreasing");
        }
    }
}

std::vector<double> gronwall_series_bound(const GronwallInput& g) {
    g.validate();
    const std::size_t n = g.grid.node_count;
    const double h = g.grid.h();
    const double lg_alpha = log_gamma(g.alpha);
    const double psi_max = g.psi_vals.back();

    int terms = 0;
    if (psi_max > 0.0) {
        terms = series_truncation(std::log(psi_max) + lg_alpha, g.alpha, g.grid.span(),
                                  g.series_tol, g.series_cap, "gronwall_series_bound");
    }

    std::vector<double> out(n, 0.0);
    out[0] = g.u_vals[0];
    for (std::size_t i = 1; i < n; ++i) {
        double acc = g.u_vals[i];
        const double psi = g.psi_vals[i];
        if (psi > 0.0) {
            const double lb = std::log(psi) + lg_alpha;
            for (int k = 1; k <= terms; ++k) {
                const double q = k * g.alpha;
                const double coef = std::exp(k * lb - log_gamma(q));
                acc += coef * kernel_convolution(h, g.u_vals, 0.0, q, 0, i, g.grid.u(i));
            }
        }
        out[i] = acc;
    }
    return out;
}

void PerturbationSpec::validate() const {
    base.validate();
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::domain_error("PerturbationSpec: delta must be >= 0");
    }
    if (delta > 0.0) {
        const double q = base.ord.alpha - delta;
        if (!(q > 0.0 && q <= 1.0)) {
            std::ostringstream os;
            os << "PerturbationSpec: 0 < alpha - delta <= 1 violated (alpha="
               << base.ord.alpha << ", delta=" << delta << ")";
            throw std::domain_error(os.str());
        }
    }
    if (!(phi_sup >= 0.0)) throw std::domain_error("PerturbationSpec: phi_sup must be >= 0");
}

namespace {

// Shared three-term head of the dependence envelopes: the first absolute
// difference carries problem-specific exponents e1, e2, the two phi_sup
// terms are common to both derivative types.
struct EnvelopeHead {
    double xt_a = 0.0; // perturbed initial datum
    double x_a = 0.0;
    double e1 = 1.0; // exponent of s^{e1-1} in the perturbed leading term
    double e2 = 1.0; // exponent of s^{e2-1} in the unperturbed leading term
    double alpha = 0.5;
    double q1 = 0.5; // alpha - delta, the perturbed kernel order
    double phi_sup = 0.0;

    double value(double s) const {
        const double lead = std::abs(xt_a * std::pow(s, e1 - 1.0) * std::exp(-log_gamma(e1)) -
                                     x_a * std::pow(s, e2 - 1.0) * std::exp(-log_gamma(e2)));
        const double c_mid = std::exp(-log_gamma(q1 + 1.0));
        const double c_mix = std::exp(-log_gamma(alpha)) / q1;
        const double c_end = std::exp(-log_gamma(alpha + 1.0));
        const double sq1 = std::pow(s, q1);
        const double mid = phi_sup * sq1 * std::abs(c_mid - c_mix);
        const double end = phi_sup * std::abs(sq1 * c_mix - std::pow(s, alpha) * c_end);
        return lead + mid + end;
    }

    // Limit of s^{1-q1} * value(s) as s -> 0: only leading-term pieces whose
    // exponent is q1 - 1 survive; the phi_sup terms vanish. Exponent gaps
    // below 1e-9 are merged, since s^gap is indistinguishable from 1 at any
    // representable s > 0 and keeping both pieces preserves the cancellation.
    double weighted_limit() const {
        const double at = std::abs(e1 - q1) < 1e-9 ? xt_a * std::exp(-log_gamma(e1)) : 0.0;
        const double ab = std::abs(e2 - q1) < 1e-9 ? x_a * std::exp(-log_gamma(e2)) : 0.0;
        return std::abs(at - ab);
    }
};

double envelope_series_value(const PerturbationSpec& s, const EnvelopeHead& head, double t,
                             const char* what) {
    s.validate();
    if (s.base.ord.n != 1) {
        throw std::domain_error(std::string(what) + ": only orders 0 < alpha < 1 are covered");
    }
    if (!(t > s.base.a) || !(t <= s.base.b)) {
        std::ostringstream os;
        os << what << ": t=" << t << " outside (" << s.base.a << ", " << s.base.b << "]";
        throw std::domain_error(os.str());
    }
    const double span = std::log(t / s.base.a);
    double result = head.value(span);

    const double lipschitz = s.base.lipschitz;
    const double q1 = head.q1;
    const double lb = std::log(lipschitz) + log_gamma(q1) - log_gamma(head.alpha);
    const int terms =
        series_truncation(lb, q1, span, kEnvelopeSeriesTol, kEnvelopeSeriesCap, what);
    if (terms == 0) return result;

    // H (resp. F) behaves like s^{q1-1} near t = a; weight 1 - q1 keeps its
    // samples bounded for the product quadrature.
    const double mu = 1.0 - q1;
    const LogGrid grid(s.base.a, t, kEnvelopeNodes);
    const double h = grid.h();
    std::vector<double> weighted(kEnvelopeNodes, 0.0);
    weighted[0] = head.weighted_limit();
    for (std::size_t i = 1; i < kEnvelopeNodes; ++i) {
        const double ui = grid.u(i);
        weighted[i] = std::pow(ui, mu) * head.value(ui);
    }
    for (int k = 1; k <= terms; ++k) {
        const double q = k * q1;
        const double coef = std::exp(k * lb - log_gamma(q));
        result += coef *
                  kernel_convolution(h, weighted, mu, q, 0, kEnvelopeNodes - 1, span);
    }
    return result;
}

} // namespace

double hadamard_dependence_envelope(const PerturbationSpec& s, double t) {
    EnvelopeHead head;
    head.alpha = s.base.ord.alpha;
    head.q1 = head.alpha - s.delta;
    head.x_a = s.base.initial_values.front();
    head.xt_a = head.x_a + s.epsilon;
    head.e1 = head.q1;
    head.e2 = head.alpha;
    head.phi_sup = s.phi_sup;
    return envelope_series_value(s, head, t, "hadamard_dependence_envelope");
}

double hilfer_dependence_envelope(const PerturbationSpec& s, const FractionalOrder& ord,
                                  double t) {
    EnvelopeHead head;
    head.alpha = ord.alpha;
    head.q1 = head.alpha - s.delta;
    head.x_a = s.base.initial_values.front();
    head.xt_a = head.x_a + s.epsilon;
    head.e1 = ord.gamma_val + s.delta * (ord.beta - 1.0);
    head.e2 = ord.gamma_val;
    head.phi_sup = s.phi_sup;
    return envelope_series_value(s, head, t, "hilfer_dependence_envelope");
}

double epsilon_ml_bound(const FractionalOrder& ord, double lipschitz, double epsilon,
                        double a, double t) {
    if (ord.n != 1) {
        throw std::domain_error("epsilon_ml_bound: only orders 0 < alpha < 1 are covered");
    }
    if (!(a > 0.0) || !(t > a)) {
        std::ostringstream os;
        os << "epsilon_ml_bound: need t > a > 0, got a=" << a << " t=" << t;
        throw std::domain_error(os.str());
    }
    if (epsilon == 0.0) return 0.0;
    const double s = std::log(t / a);
    MLParams params{ord.alpha, ord.gamma_val};
    return std::abs(epsilon) * std::pow(s, ord.gamma_val - 1.0) *
           mittag_leffler(params, lipschitz * std::pow(s, ord.alpha));
}

} // namespace fde
