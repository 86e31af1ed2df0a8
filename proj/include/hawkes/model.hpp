#pragma once

#include <stdexcept>
#include <utility>

#include "hawkes/kernel.hpp"

namespace hawkes {

// Linear Hawkes process: intensity nu + sum_{t_i < t} h(t - t_i), empty history at 0.
struct HawkesModel {
    double nu;
    Kernel kernel;

    HawkesModel(double nu_, Kernel kernel_) : nu(nu_), kernel(std::move(kernel_)) {
        if (!(nu > 0.0)) throw std::invalid_argument("baseline intensity nu must be positive");
    }

    double branching_ratio() const { return kernel.l1_norm(); }

    // Same process under the exponential tilt: baseline gamma*nu, kernel gamma*h.
    HawkesModel tilted(double gamma) const { return HawkesModel(gamma * nu, kernel.scaled(gamma)); }
};

}  // namespace hawkes
