#include <doctest.h>

#include <cmath>

#include "hawkes/deviations.hpp"
#include "hawkes/importance.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"

#include "support/pgf_oracle.hpp"
#include "support/stats.hpp"

using namespace hawkes;

namespace {
const Kernel kExp = Kernel::exponential(1.0, 2.0);
const Kernel kPl = Kernel::power_law(1.0, 3.0);
const HawkesModel kModelExp{1.0, kExp};
const HawkesModel kModelPl{1.0, kPl};
}  // namespace

TEST_CASE("tilt values") {
    CHECK(tilt_gamma(2.0, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tilt_gamma(4.0, 1.0, 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(tilt_gamma(5.0, 1.0, 0.5) == doctest::Approx(10.0 / 7.0).epsilon(1e-14));
    CHECK_THROWS_AS(tilt_gamma(-1.0, 1.0, 0.5), std::domain_error);
    // tilted LLN mean is x
    for (double x : {3.0, 4.0, 5.0}) {
        double g = tilt_gamma(x, 1.0, 0.5);
        CHECK(g * 1.0 / (1.0 - g * 0.5) == doctest::Approx(x).epsilon(1e-12));
        CHECK(g * 0.5 < 1.0);
    }
}

TEST_CASE("residual_sum closed-form examples") {
    EventPath empty{3.0, {}, 0};
    CHECK(residual_sum(empty, kExp, 3.0) == 0.0);
    EventPath single{3.0, {3.0}, 0};
    CHECK(residual_sum(single, kExp, 3.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(residual_sum(single, kPl, 3.0) == doctest::Approx(0.5).epsilon(1e-14));
    EventPath two{3.0, {1.0, 2.0}, 0};
    CHECK(residual_sum(two, kExp, 3.0) ==
          doctest::Approx(0.5 * std::exp(-4.0) + 0.5 * std::exp(-2.0)).epsilon(1e-12));
    // events beyond t do not contribute
    EventPath late{5.0, {1.0, 4.5}, 0};
    CHECK(residual_sum(late, kExp, 3.0) == doctest::Approx(0.5 * std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("tilted simulator has mean rate x") {
    const double x = 4.0;
    HawkesModel tilted = kModelExp.tilted(tilt_gamma(x, 1.0, 0.5));
    auto counts = sample_counts(tilted, 25.0, 20000, 314, Generator::cluster);
    auto m = test_support::moments(counts);
    double se = m.sd / std::sqrt(static_cast<double>(counts.size()));
    CHECK(std::abs(m.mean - x * 25.0) < 4.0 * se + 1.0);  // +1: edge effects near t
}

TEST_CASE("is_tail agrees with naive MC at desk scale (unbiasedness)") {
    for (const auto& model : {kModelExp, kModelPl}) {
        auto naive = mc_tail(model, 5.0, 4.0, 400000, 999, Generator::thinning);
        auto is = is_tail(model, 5.0, 4.0, 100000, 1000);
        double joint = std::sqrt(naive.std_error * naive.std_error +
                                 is.std_error * is.std_error);
        INFO("naive " << naive.estimate << " is " << is.estimate << " joint se " << joint);
        CHECK(std::abs(naive.estimate - is.estimate) < 3.0 * joint);
    }
}

TEST_CASE("is_tail matches the transform-inversion truth at t = 25") {
    // truth values from the independent PGF oracle (also recomputed here)
    const double truth_exp = test_support::truth_tail(kModelExp, 25.0, 100, 512);
    auto est = is_tail(kModelExp, 25.0, 4.0, 100000, 4242);
    CHECK(std::abs(est.estimate - truth_exp) < 3.5 * est.std_error);
    const double truth_pl = test_support::truth_tail(kModelPl, 25.0, 100, 512);
    auto estp = is_tail(kModelPl, 25.0, 4.0, 100000, 4243);
    CHECK(std::abs(estp.estimate - truth_pl) < 3.5 * estp.std_error);
}

TEST_CASE("variance reduction vs naive MC at matched path count") {
    const std::uint64_t n = 50000;
    auto naive = mc_tail(kModelExp, 10.0, 4.0, n, 55, Generator::cluster);
    auto is = is_tail(kModelExp, 10.0, 4.0, n, 56);
    CHECK(is.std_error < naive.std_error);
}

TEST_CASE("weights are bounded and vanish exactly below the threshold") {
    // reconstruct per-path weights the way is_tail does, on a small sample
    const double x = 4.0, t = 10.0;
    const double gamma = tilt_gamma(x, 1.0, 0.5);
    const double coef = (gamma - 1.0) * 0.5 - std::log(gamma);
    HawkesModel tilted = kModelExp.tilted(gamma);
    int hits = 0;
    for (std::uint64_t p = 0; p < 2000; ++p) {
        auto path = simulate_cluster(tilted, t, 606000 + p);
        double count = static_cast<double>(path.times.size());
        double w = 0.0;
        if (count >= x * t) {
            w = std::exp(coef * (count - x * t) - (gamma - 1.0) * residual_sum(path, kExp, t));
            ++hits;
        }
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        if (count < x * t) CHECK(w == 0.0);
    }
    CHECK(hits > 0);
}

TEST_CASE("is_tail determinism across thread counts") {
    IsOptions one;
    one.threads = 1;
    IsOptions four;
    four.threads = 4;
    auto a = is_tail(kModelExp, 10.0, 4.0, 30000, 12, one);
    auto b = is_tail(kModelExp, 10.0, 4.0, 30000, 12, four);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("adaptive path doubling reaches the relative-error target") {
    IsOptions opts;
    opts.rel_error_target = 0.02;
    opts.max_paths = 1u << 22;
    auto est = is_tail(kModelExp, 10.0, 4.0, 10000, 77, opts);
    CHECK(3.0 * est.std_error <= 0.02 * est.estimate);
    CHECK(est.n_paths >= 10000);
}

TEST_CASE("reference values from the published experiment (IS column)") {
    // Table values are 3-digit Monte Carlo results; 3.5 sigma of our run plus a
    // 1.5% allowance for their own sampling noise.
    auto e1 = is_tail(kModelExp, 25.0, 4.0, 200000, 31415);
    CHECK(std::abs(e1.estimate - 1.62e-3) < 3.5 * e1.std_error + 0.015 * 1.62e-3);
    auto e2 = is_tail(kModelPl, 25.0, 5.0, 200000, 31416);
    CHECK(std::abs(e2.estimate - 1.95e-5) < 3.5 * e2.std_error + 0.015 * 1.95e-5);
}
