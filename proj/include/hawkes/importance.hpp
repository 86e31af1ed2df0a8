#pragma once

#include <cstdint>

#include "hawkes/model.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

// Exponential tilt making level x the LLN mean of the tilted process:
// gamma = x/(nu + ||h||x); gamma*nu/(1 - gamma*||h||) = x.
double tilt_gamma(double x, double nu, double l1);

// sum_i H(t - u_i) over event times u_i <= t: the non-Markovian boundary term of
// the change of measure.
double residual_sum(const EventPath& path, const Kernel& kernel, double t);

struct TiltedEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    double gamma = 1.0;
    double t = 0.0;
    double x = 0.0;
};

struct IsOptions {
    Generator generator = Generator::cluster;
    unsigned threads = 0;
    // When > 0: double n_paths until 3*std_error/estimate <= rel_error_target
    // (or max_paths is reached; 0 means 64x the initial budget).
    double rel_error_target = 0.0;
    std::uint64_t max_paths = 0;
};

// Unbiased importance-sampling estimate of P(N_t >= xt): simulate the tilted model
// and weight each path by
//   1{N_t >= xt} exp(((gamma-1)||h|| - log gamma)(N_t - xt) - (gamma-1) sum_i H(t-u_i)),
// then scale by e^{-t I(x)}. Weights lie in [0, 1].
TiltedEstimate is_tail(const HawkesModel& model, double t, double x, std::uint64_t n_paths,
                       std::uint64_t seed, const IsOptions& options = {});

}  // namespace hawkes
