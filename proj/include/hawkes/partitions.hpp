#pragma once

#include <cstdint>
#include <vector>

namespace hawkes {

// All n-tuples (m_1, ..., m_n) of nonnegative integers with 1*m_1 + 2*m_2 + ... + n*m_n = n.
// One tuple per integer partition of n; n = 0 yields the single empty tuple.
struct PartitionSet {
    int n = 0;
    std::vector<std::vector<int>> tuples;

    std::size_t size() const { return tuples.size(); }
};

// Exhaustive enumeration, ordered with m_1 descending: n=3 -> (3,0,0),(1,1,0),(0,0,1).
// Cached internally; the returned reference stays valid for the program lifetime.
const PartitionSet& partitions(int n);

// n! / (prod_j m_j! * (j!)^{m_j}) where n = sum j*m_j: the Faa di Bruno multiplicity
// of the tuple. Exact in double for the orders used here.
double faa_di_bruno_weight(const std::vector<int>& m);

// prod_j m_j! * (j!)^{m_j}, the bare denominator of the multiplicity.
double partition_denominator(const std::vector<int>& m);

inline int tuple_sum(const std::vector<int>& m) {
    int s = 0;
    for (int v : m) s += v;
    return s;
}

double factorial(int n);

// (n)!! for odd n >= -1, with (-1)!! = 1.
double double_factorial(int n);

}  // namespace hawkes
