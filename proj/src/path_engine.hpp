#pragma once

// Internal path generators shared by the simulator and the importance sampler.
// Callbacks receive event times; cluster order is genealogical, not chronological.

#include <cmath>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes::detail {

template <class OnEvent>
void run_cluster(const HawkesModel& model, double horizon, Xoshiro256pp& rng, OnEvent&& on,
                 std::vector<double>& stack) {
    const double l1 = model.kernel.l1_norm();
    stack.clear();
    double tau = 0.0;
    for (;;) {
        tau += rng.exponential(model.nu);
        if (tau > horizon) break;
        stack.push_back(tau);
        on(tau);
    }
    while (!stack.empty()) {
        const double parent = stack.back();
        stack.pop_back();
        const std::uint64_t children = rng.poisson(l1);
        for (std::uint64_t c = 0; c < children; ++c) {
            const double birth = parent + model.kernel.sample_offset(rng.uniform());
            if (birth <= horizon) {
                stack.push_back(birth);
                on(birth);
            }
        }
    }
}

template <class OnEvent>
void run_thinning(const HawkesModel& model, double horizon, Xoshiro256pp& rng, OnEvent&& on,
                  std::vector<double>& events) {
    events.clear();
    if (const auto* e = model.kernel.as_exponential()) {
        // Markovian fast path: excitation S = sum exp(-beta (t - t_i))
        double tau = 0.0, S = 0.0;
        for (;;) {
            const double bound = model.nu + e->alpha * S;
            const double gap = rng.exponential(bound);
            const double cand = tau + gap;
            if (cand > horizon) return;
            S *= std::exp(-e->beta * gap);
            const double lambda = model.nu + e->alpha * S;
            tau = cand;
            if (rng.uniform() * bound <= lambda) {
                S += 1.0;
                on(cand);
            }
        }
        return;
    }

    const bool monotone = model.kernel.as_power_law() != nullptr;
    const double h0 = model.kernel.eval(0.0);
    double tau = 0.0;
    double bound = model.nu;
    for (;;) {
        const double gap = rng.exponential(bound);
        const double cand = tau + gap;
        if (cand > horizon) return;
        double lambda = model.nu;
        for (double ti : events) lambda += model.kernel.eval(cand - ti);
        tau = cand;
        const bool accept = rng.uniform() * bound <= lambda;
        if (accept) {
            events.push_back(cand);
            on(cand);
        }
        if (monotone) {
            // h decreasing: the post-candidate intensity dominates the future
            bound = accept ? lambda + h0 : lambda;
        } else {
            bound = model.nu;
            for (double ti : events) bound += model.kernel.envelope(cand - ti);
        }
    }
}

}  // namespace hawkes::detail
