#include "fde/fractional_order.hpp"

#include <sstream>
#include <stdexcept>

namespace fde {

FractionalOrder::FractionalOrder(double alpha_, double beta_, int n_)
    : alpha(alpha_), beta(beta_), n(n_) {
    if (n < 1) throw std::domain_error("FractionalOrder: n must be >= 1");
    if (!(alpha > n - 1 && alpha < n)) {
        std::ostringstream os;
        os << "FractionalOrder: n-1 < alpha < n violated (alpha=" << alpha << ", n=" << n
           << ")";
        throw std::domain_error(os.str());
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        std::ostringstream os;
        os << "FractionalOrder: beta must lie in [0, 1], got " << beta;
        throw std::domain_error(os.str());
    }
    gamma_val = alpha + beta * (n - alpha);
}

} // namespace fde
