#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

// One realization on [0, horizon]; times strictly increasing, empty history at 0.
struct EventPath {
    double horizon = 0.0;
    std::vector<double> times;
    std::uint64_t seed = 0;

    std::size_t count() const { return times.size(); }
};

enum class Generator { thinning, cluster };

// Ogata thinning on the exact intensity. The dominating intensity is refreshed at
// every candidate from the current exact intensity (valid because the built-in
// kernels decay between events; tabulated kernels use their running-max envelope).
// O(1) intensity updates for exponential kernels, O(events) otherwise.
EventPath simulate_thinning(const HawkesModel& model, double horizon, std::uint64_t seed);

// Immigration-birth construction: Poisson(nu) immigrants on [0, horizon], each event
// spawning Poisson(||h||) children at offsets drawn from h/||h||; events past the
// horizon are pruned together with their descendants. Same law as thinning.
EventPath simulate_cluster(const HawkesModel& model, double horizon, std::uint64_t seed);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
};

// Naive Monte Carlo estimate of P(N_t >= x t) with binomial standard error.
// Deterministic given (model, t, x, n_paths, seed, generator) for any thread count.
McEstimate mc_tail(const HawkesModel& model, double t, double x, std::uint64_t n_paths,
                   std::uint64_t seed, Generator generator = Generator::thinning,
                   unsigned threads = 0);

// Event counts N_t for paths 0..n_paths-1 (per-path RNG streams; parallel).
std::vector<std::uint32_t> sample_counts(const HawkesModel& model, double t,
                                         std::uint64_t n_paths, std::uint64_t seed,
                                         Generator generator = Generator::cluster,
                                         unsigned threads = 0);

// CSV dump with columns path_id,event_time.
void dump_paths_csv(std::ostream& os, const std::vector<EventPath>& paths);

// Thread-count resolution: explicit value, else HAWKES_THREADS, else hardware.
unsigned resolve_threads(unsigned requested);

}  // namespace hawkes
