#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fh/numeric.hpp"

namespace fh {

using JobId = std::string;

// Natural order: digit runs compare by value and sort before text runs,
// so "2" < "10" < "I0" < "I1#2" < "I1#10".
bool id_less(const JobId& a, const JobId& b);
struct IdLess {
  bool operator()(const JobId& a, const JobId& b) const { return id_less(a, b); }
};

struct Job {
  JobId id;
  Rational release;
  Rational proc;
};

// Releases a job of length `size` every `period` over [start, end).
struct StreamDescriptor {
  JobId id;
  Rational start;
  Rational end;
  Rational period;
  Rational size;

  Rational count() const { return (end - start) / period; }
};

struct Instance {
  std::vector<Job> jobs;
  std::vector<StreamDescriptor> streams;

  const Job* find_job(const JobId& id) const;
};

struct Violation {
  std::string rule;
  std::string detail;
};
using Violations = std::vector<Violation>;

Violations validate_instance(const Instance& inst);

inline constexpr unsigned long kDefaultMaterializeLimit = 100000;

std::vector<Job> materialize_stream(const StreamDescriptor& s, unsigned long limit);
// Streams replaced by their jobs; ids are "<stream>#<j>".
Instance materialize_all(const Instance& inst, unsigned long limit = kDefaultMaterializeLimit);

struct ThreePartitionInstance {
  unsigned m = 0;
  Rational B;
  std::vector<Rational> elements;
};

// Groups of 1-based element indices.
struct Partition {
  std::vector<std::array<unsigned, 3>> groups;
};

Violations validate_3partition(const ThreePartitionInstance& tp);
bool is_partition_valid(const ThreePartitionInstance& tp, const Partition& p);
// Sorted groups, sorted indices within each group.
Partition canonical(const Partition& p);
// Every valid partition, canonical, in lexicographic order. Stops after `cap`.
std::vector<Partition> enumerate_partitions(const ThreePartitionInstance& tp, size_t cap = SIZE_MAX);

}  // namespace fh
