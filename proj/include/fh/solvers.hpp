#pragma once

#include <map>
#include <optional>
#include <string>

#include "fh/objectives.hpp"

namespace fh {

struct SolveResult {
  Schedule schedule;
  ObjectiveValue value;
  bool optimal = false;
  std::string algorithm;
  // False only when a fractional-k tie could not be settled at the
  // precision ceiling; the incumbent is kept in that case.
  bool certified = true;
  // Priority order behind the schedule, when there is one.
  std::vector<JobId> order;
};

// Streams are materialized first; the returned schedule marks them Materialized.
SolveResult srpt(const Instance& inst, unsigned long limit = kDefaultMaterializeLimit);

// Over [from, to], jobs released at or after `from` with deadline at most
// `to` need `demand` units of work but only `capacity` fit.
struct EdfWitness {
  Rational from;
  Rational to;
  Rational demand;
  Rational capacity;
  JobId job;
};

struct EdfOutcome {
  bool feasible = false;
  Schedule schedule;
  std::optional<EdfWitness> witness;
};

EdfOutcome edf_feasible(const Instance& inst, const std::map<JobId, Rational>& deadlines,
                        unsigned long limit = kDefaultMaterializeLimit);

// Values of F at which some interval constraint of the EDF test turns tight.
// The optimum of minimize_max is always among them.
std::vector<Rational> minmax_candidates(const std::vector<Job>& jobs, Measure m);

SolveResult minimize_max(const Instance& inst, Measure m, unsigned long limit = kDefaultMaterializeLimit);

inline constexpr unsigned kDefaultBruteBound = 8;

struct BruteOptions {
  unsigned bound = kDefaultBruteBound;
  // Use the single-threaded reference search.
  bool serial = false;
  // 0 keeps the OpenMP default.
  int threads = 0;
  long bits = kDefaultBits;
};

// Best priority schedule over all orders of the explicit jobs; streams stay
// FifoAsReleased. Ties go to the lexicographically first order.
SolveResult brute_force_optimal(const Instance& inst, const ObjectiveKind& obj, const BruteOptions& opt);
SolveResult brute_force_optimal(const Instance& inst, const ObjectiveKind& obj,
                                unsigned bound = kDefaultBruteBound);

}  // namespace fh
