#include "hawkes/importance.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes/deviations.hpp"
#include "hawkes/errors.hpp"
#include "parallel.hpp"
#include "path_engine.hpp"

namespace hawkes {

double tilt_gamma(double x, double nu, double l1) {
    if (!(x > 0.0)) throw std::domain_error("tilt_gamma requires x > 0");
    return x / (nu + l1 * x);
}

double residual_sum(const EventPath& path, const Kernel& kernel, double t) {
    double s = 0.0;
    for (double u : path.times)
        if (u <= t) s += kernel.tail(t - u);
    return s;
}

namespace {

struct ChunkMoments {
    detail::KahanSum w;
    detail::KahanSum w2;
};

}  // namespace

TiltedEstimate is_tail(const HawkesModel& model, double t, double x, std::uint64_t n_paths,
                       std::uint64_t seed, const IsOptions& options) {
    if (n_paths == 0) throw std::invalid_argument("is_tail needs n_paths >= 1");
    if (!(t > 0.0)) throw std::domain_error("is_tail needs t > 0");
    const double l1 = model.kernel.l1_norm();
    const double mean = mean_rate(model);
    if (!(x > mean)) throw std::domain_error("is_tail requires x above the LLN mean");

    const double gamma = tilt_gamma(x, model.nu, l1);
    if (gamma * l1 >= 1.0) throw InstabilityError("tilted model unstable");  // cannot happen
    const HawkesModel tilted = model.tilted(gamma);
    const double coef = (gamma - 1.0) * l1 - std::log(gamma);  // equals -theta*
    const double threshold = x * t;
    const double log_scale = -t * rate(x, model.nu, l1);
    const double scale = std::exp(log_scale);

    const unsigned threads = resolve_threads(options.threads);
    std::uint64_t budget = n_paths;
    const std::uint64_t cap =
        options.max_paths > 0 ? options.max_paths
                              : (options.rel_error_target > 0.0 ? 64 * n_paths : n_paths);

    std::vector<ChunkMoments> chunks;
    std::uint64_t done = 0;
    double mean_w = 0.0, se_w = 0.0;
    for (;;) {
        const std::uint64_t first_chunk = chunks.size();
        const std::uint64_t new_chunks =
            (budget - done + detail::kChunkSize - 1) / detail::kChunkSize;
        chunks.resize(first_chunk + new_chunks);
        detail::for_each_chunk(
            budget - done, threads, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                std::vector<double> scratch;
                ChunkMoments m;
                for (std::uint64_t p = done + begin; p < done + end; ++p) {
                    Xoshiro256pp rng = path_rng(seed, p);
                    std::uint32_t count = 0;
                    double res = 0.0;
                    auto on = [&](double u) {
                        ++count;
                        res += model.kernel.tail(t - u);
                    };
                    if (options.generator == Generator::cluster)
                        detail::run_cluster(tilted, t, rng, on, scratch);
                    else
                        detail::run_thinning(tilted, t, rng, on, scratch);
                    if (static_cast<double>(count) >= threshold - 1e-9) {
                        const double w = std::exp(coef * (static_cast<double>(count) - threshold) -
                                                  (gamma - 1.0) * res);
                        m.w.add(w);
                        m.w2.add(w * w);
                    }
                }
                chunks[first_chunk + chunk] = m;
            });
        done = budget;

        double sw = 0.0, sw2 = 0.0;
        for (const auto& m : chunks) {
            sw += m.w.sum;
            sw2 += m.w2.sum;
        }
        const double n = static_cast<double>(done);
        mean_w = sw / n;
        const double var = std::max(sw2 - n * mean_w * mean_w, 0.0) / std::max(n - 1.0, 1.0);
        se_w = std::sqrt(var / n);

        if (options.rel_error_target <= 0.0) break;
        if (mean_w > 0.0 && 3.0 * se_w <= options.rel_error_target * mean_w) break;
        if (budget >= cap) break;
        budget = std::min(cap, budget * 2);
    }

    TiltedEstimate out;
    out.estimate = scale * mean_w;
    out.std_error = scale * se_w;
    out.n_paths = done;
    out.gamma = gamma;
    out.t = t;
    out.x = x;
    return out;
}

}  // namespace hawkes
