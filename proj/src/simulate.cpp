#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include "parallel.hpp"
#include "path_engine.hpp"

namespace hawkes {

namespace {

void finalize_times(std::vector<double>& times) {
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            times[i] = std::nextafter(times[i - 1], std::numeric_limits<double>::infinity());
}

void check_horizon(double horizon) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HAWKES_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

EventPath simulate_thinning(const HawkesModel& model, double horizon, std::uint64_t seed) {
    check_horizon(horizon);
    EventPath path;
    path.horizon = horizon;
    path.seed = seed;
    if (horizon == 0.0) return path;
    Xoshiro256pp rng = path_rng(seed, 0);
    std::vector<double> scratch;
    detail::run_thinning(model, horizon, rng, [&](double t) { path.times.push_back(t); }, scratch);
    finalize_times(path.times);
    return path;
}

EventPath simulate_cluster(const HawkesModel& model, double horizon, std::uint64_t seed) {
    check_horizon(horizon);
    EventPath path;
    path.horizon = horizon;
    path.seed = seed;
    if (horizon == 0.0) return path;
    Xoshiro256pp rng = path_rng(seed, 0);
    std::vector<double> scratch;
    detail::run_cluster(model, horizon, rng, [&](double t) { path.times.push_back(t); }, scratch);
    finalize_times(path.times);
    return path;
}

std::vector<std::uint32_t> sample_counts(const HawkesModel& model, double t,
                                         std::uint64_t n_paths, std::uint64_t seed,
                                         Generator generator, unsigned threads) {
    check_horizon(t);
    std::vector<std::uint32_t> counts(n_paths, 0);
    detail::for_each_chunk(n_paths, resolve_threads(threads),
                           [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                               std::vector<double> scratch;
                               for (std::uint64_t p = begin; p < end; ++p) {
                                   Xoshiro256pp rng = path_rng(seed, p);
                                   std::uint32_t c = 0;
                                   auto on = [&](double) { ++c; };
                                   if (generator == Generator::cluster)
                                       detail::run_cluster(model, t, rng, on, scratch);
                                   else
                                       detail::run_thinning(model, t, rng, on, scratch);
                                   counts[p] = c;
                               }
                           });
    return counts;
}

McEstimate mc_tail(const HawkesModel& model, double t, double x, std::uint64_t n_paths,
                   std::uint64_t seed, Generator generator, unsigned threads) {
    if (n_paths == 0) throw std::invalid_argument("mc_tail needs n_paths >= 1");
    check_horizon(t);
    const double threshold = x * t;
    const std::uint64_t n_chunks = (n_paths + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<std::uint64_t> hits(n_chunks, 0);
    detail::for_each_chunk(n_paths, resolve_threads(threads),
                           [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                               std::vector<double> scratch;
                               std::uint64_t h = 0;
                               for (std::uint64_t p = begin; p < end; ++p) {
                                   Xoshiro256pp rng = path_rng(seed, p);
                                   std::uint32_t c = 0;
                                   auto on = [&](double) { ++c; };
                                   if (generator == Generator::cluster)
                                       detail::run_cluster(model, t, rng, on, scratch);
                                   else
                                       detail::run_thinning(model, t, rng, on, scratch);
                                   if (static_cast<double>(c) >= threshold - 1e-9) ++h;
                               }
                               hits[chunk] = h;
                           });
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(n_paths);
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_paths));
    return {p, se, n_paths};
}

void dump_paths_csv(std::ostream& os, const std::vector<EventPath>& paths) {
    os << "path_id,event_time\n";
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (double t : paths[i].times) os << i << ',' << t << '\n';
}

}  // namespace hawkes
