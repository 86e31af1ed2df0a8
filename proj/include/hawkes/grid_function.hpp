#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace hawkes {

// Values of a function on the uniform grid t_i = i * step, i = 0..n-1, with
// horizon = (n-1) * step. Used for F(.;theta) and its theta-derivatives.
struct GridFunction {
    double step = 0.0;
    double horizon = 0.0;
    Eigen::ArrayXd values;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
    double time(std::size_t i) const { return static_cast<double>(i) * step; }
    double front() const { return values[0]; }
    double back() const { return values[values.size() - 1]; }

    // trapezoidal integral over [0, horizon]
    double trapezoid() const {
        if (values.size() < 2) return 0.0;
        return step * (values.sum() - 0.5 * (values[0] + values[values.size() - 1]));
    }

    static std::size_t points_for(double step, double horizon) {
        return static_cast<std::size_t>(horizon / step + 1e-9) + 1;
    }
};

}  // namespace hawkes
