#pragma once

#include <cstdint>
#include <vector>

#include "fh/model.hpp"

namespace fh {

// Integer 3-partition instances with every element in [mB/(3m+1/2), B/2].

// Sorted element multisets summing to mB; both YES and NO instances.
std::vector<ThreePartitionInstance> enumerate_tight_instances(unsigned m, unsigned long B);

// Those with at least one valid partition.
std::vector<ThreePartitionInstance> tight_yes_instances(unsigned m, unsigned long B);

// A hidden partition of random triples, shuffled. Throws InvalidArgument
// when no triple of in-range integers sums to B.
ThreePartitionInstance generate_yes(unsigned m, unsigned long B, uint64_t seed);

inline constexpr unsigned kNoVerifyMaxM = 4;

// A YES instance with elements moved one unit at a time until exhaustive
// search finds no partition. m in [2, kNoVerifyMaxM].
ThreePartitionInstance generate_no(unsigned m, unsigned long B, uint64_t seed);

}  // namespace fh
