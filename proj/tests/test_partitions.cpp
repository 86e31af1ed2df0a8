#include <doctest.h>

#include <cmath>
#include <set>

#include "hawkes/partitions.hpp"

using namespace hawkes;

TEST_CASE("partition counts follow p(n)") {
    const int expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int n = 0; n <= 10; ++n) CHECK(partitions(n).size() == static_cast<std::size_t>(expected[n]));
}

TEST_CASE("tuples satisfy the weight constraint and are distinct") {
    for (int n = 1; n <= 8; ++n) {
        std::set<std::vector<int>> seen;
        for (const auto& m : partitions(n).tuples) {
            REQUIRE(m.size() == static_cast<std::size_t>(n));
            int s = 0;
            for (int j = 1; j <= n; ++j) s += j * m[j - 1];
            CHECK(s == n);
            CHECK(seen.insert(m).second);
        }
    }
}

TEST_CASE("n = 3 enumeration matches the hand computation") {
    const auto& ps = partitions(3);
    REQUIRE(ps.size() == 3);
    CHECK(ps.tuples[0] == std::vector<int>{3, 0, 0});
    CHECK(ps.tuples[1] == std::vector<int>{1, 1, 0});
    CHECK(ps.tuples[2] == std::vector<int>{0, 0, 1});
}

TEST_CASE("n = 0 is the empty product") {
    const auto& ps = partitions(0);
    REQUIRE(ps.size() == 1);
    CHECK(ps.tuples[0].empty());
    CHECK(faa_di_bruno_weight(ps.tuples[0]) == 1.0);
}

TEST_CASE("Faa di Bruno weights reproduce d^n/dx^n exp(c x)") {
    // f = exp, g = c*x: only g' = c is nonzero, so summing the full formula over all
    // tuples must collapse to c^n exp(cx); tuples with higher m_j contribute zero.
    for (double c : {1.0, 2.5}) {
        for (int n = 1; n <= 6; ++n) {
            double x0 = 0.3;
            double total = 0.0;
            for (const auto& m : partitions(n).tuples) {
                double term = faa_di_bruno_weight(m) * std::exp(c * x0);
                for (int j = 1; j <= n; ++j) {
                    double gj = (j == 1) ? c : 0.0;
                    for (int r = 0; r < m[j - 1]; ++r) term *= gj;
                }
                total += term;
            }
            CHECK(total == doctest::Approx(std::pow(c, n) * std::exp(c * x0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Faa di Bruno weights reproduce derivatives of exp(g) for quadratic g") {
    // g(x) = a x + b x^2 at x0 = 0: d^n/dx^n exp(g) has the explicit Hermite-type form
    // sum over partitions with only m_1, m_2 nonzero; cross-check against finite
    // differences of exp(a x + b x^2).
    const double a = 0.7, b = -0.3;
    auto f = [&](double x) { return std::exp(a * x + b * x * x); };
    for (int n = 1; n <= 5; ++n) {
        double total = 0.0;
        for (const auto& m : partitions(n).tuples) {
            double term = faa_di_bruno_weight(m);
            for (int j = 1; j <= n; ++j) {
                double gj = (j == 1) ? a : (j == 2 ? 2.0 * b : 0.0);
                for (int r = 0; r < m[j - 1]; ++r) term *= gj;
            }
            total += term;
        }
        // Richardson-extrapolated central differences
        auto fd = [&](double h) {
            double s = 0.0;
            for (int k = 0; k <= n; ++k) {
                double binom = factorial(n) / (factorial(k) * factorial(n - k));
                double sign = ((n - k) % 2) ? -1.0 : 1.0;
                s += sign * binom * f((k - 0.5 * n) * h);
            }
            return s / std::pow(h, n);
        };
        double h = 0.02;
        double est = (4.0 * fd(h / 2) - fd(h)) / 3.0;
        CHECK(total == doctest::Approx(est).epsilon(1e-5));
    }
}

TEST_CASE("double factorial convention") {
    CHECK(double_factorial(-1) == 1.0);
    CHECK(double_factorial(1) == 1.0);
    CHECK(double_factorial(3) == 3.0);
    CHECK(double_factorial(5) == 15.0);
    CHECK(double_factorial(7) == 105.0);
}
