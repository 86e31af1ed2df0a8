#include "hawkes/partitions.hpp"

#include <mutex>
#include <stdexcept>

namespace hawkes {

namespace {

void enumerate(int n, int j, int rem, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (j == n + 1) {
        if (rem == 0) out.push_back(cur);
        return;
    }
    for (int m = rem / j; m >= 0; --m) {
        cur[j - 1] = m;
        enumerate(n, j + 1, rem - j * m, cur, out);
    }
    cur[j - 1] = 0;
}

}  // namespace

const PartitionSet& partitions(int n) {
    if (n < 0) throw std::invalid_argument("partitions: order must be nonnegative");
    static std::vector<PartitionSet> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    while (static_cast<int>(cache.size()) <= n) {
        int k = static_cast<int>(cache.size());
        PartitionSet ps;
        ps.n = k;
        if (k == 0) {
            ps.tuples.push_back({});
        } else {
            std::vector<int> cur(k, 0);
            enumerate(k, 1, k, cur, ps.tuples);
        }
        cache.push_back(std::move(ps));
    }
    return cache[n];
}

double factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double double_factorial(int n) {
    if (n < -1) throw std::invalid_argument("double factorial needs n >= -1");
    double r = 1.0;
    for (int i = n; i > 1; i -= 2) r *= i;
    return r;
}

double partition_denominator(const std::vector<int>& m) {
    double d = 1.0;
    for (std::size_t j = 1; j <= m.size(); ++j) {
        int mj = m[j - 1];
        if (mj == 0) continue;
        double fj = factorial(static_cast<int>(j));
        d *= factorial(mj);
        for (int r = 0; r < mj; ++r) d *= fj;
    }
    return d;
}

double faa_di_bruno_weight(const std::vector<int>& m) {
    int n = 0;
    for (std::size_t j = 1; j <= m.size(); ++j) n += static_cast<int>(j) * m[j - 1];
    return factorial(n) / partition_denominator(m);
}

}  // namespace hawkes
