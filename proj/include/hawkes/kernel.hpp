#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace hawkes {

// h(t) = alpha * exp(-beta * t)
struct ExponentialKernel {
    double alpha;
    double beta;
};

// h(t) = c / (1 + t)^p, p > 2 so that the first moment is finite
struct PowerLawKernel {
    double c;
    double p;
};

// Sampled kernel on an ascending grid starting at t = 0. The caller supplies the
// exact L1 norm; the tail H(t) = int_t^inf h is either supplied on the same grid
// or derived by trapezoidal integration (which requires the grid to carry all of
// the mass). Values beyond the grid are not extrapolated: h = 0 there.
struct TabulatedKernel {
    std::vector<double> t;
    std::vector<double> h;
    double l1;
    std::vector<double> tail;  // optional; same grid as t
};

// Exciting function of a linear Hawkes process. Immutable after construction;
// construction enforces h >= 0 and the stability condition ||h||_L1 < 1.
class Kernel {
  public:
    static Kernel exponential(double alpha, double beta);
    static Kernel power_law(double c, double p);
    static Kernel tabulated(std::vector<double> t, std::vector<double> h, double l1_norm,
                            std::vector<double> tail = {});

    // h(t); t < 0 is a domain error
    double eval(double t) const;

    // H(t) = int_t^inf h(s) ds; nonincreasing, tail(0) == l1_norm()
    double tail(double t) const;

    double l1_norm() const { return l1_; }

    // Nonincreasing dominating function: envelope(t) >= h(s) for all s >= t.
    // Equals h for the monotone built-in kernels; a running maximum for tabulated ones.
    double envelope(double t) const;

    // Inverse CDF of the normalized birth-offset density h/||h||, u in [0,1).
    double sample_offset(double u) const;

    // Kernel scaled by gamma > 0 (exponential tilt). Throws InstabilityError if
    // gamma * l1_norm() >= 1.
    Kernel scaled(double gamma) const;

    bool is_exponential() const { return std::holds_alternative<ExponentialKernel>(impl_); }
    const ExponentialKernel* as_exponential() const { return std::get_if<ExponentialKernel>(&impl_); }
    const PowerLawKernel* as_power_law() const { return std::get_if<PowerLawKernel>(&impl_); }
    const TabulatedKernel* as_tabulated() const { return std::get_if<TabulatedKernel>(&impl_); }

    // Horizon past which F(.;theta) tails are resolvable by fitting; used as the
    // default T_max for the CGF machinery. Slowly decaying kernels need more room.
    double default_horizon() const;

  private:
    using Impl = std::variant<ExponentialKernel, PowerLawKernel, TabulatedKernel>;
    Kernel(Impl impl, double l1) : impl_(std::move(impl)), l1_(l1) {}

    Impl impl_;
    double l1_ = 0.0;
    std::vector<double> envelope_;  // tabulated only: running max from the right
};

}  // namespace hawkes
