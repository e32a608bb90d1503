#pragma once

#include <map>
#include <vector>

#include "fh/model.hpp"

namespace fh {

struct Slice {
  Rational from;
  Rational to;
  JobId job;
};

enum class StreamPolicy { FifoAsReleased, Materialized };
const char* policy_name(StreamPolicy p);
StreamPolicy parse_policy(const std::string& s);

// Streams without an entry in stream_policy are FifoAsReleased.
struct Schedule {
  std::vector<Slice> slices;
  std::map<JobId, StreamPolicy> stream_policy;

  StreamPolicy policy_of(const JobId& stream) const;
};

using CompletionMap = std::map<JobId, Rational, IdLess>;

// Explicit jobs plus the jobs of every Materialized stream.
std::vector<Job> effective_jobs(const Instance& inst, const Schedule& s,
                                unsigned long limit = kDefaultMaterializeLimit);

Violations validate_schedule(const Instance& inst, const Schedule& s);

// With include_fifo_streams, FifoAsReleased stream jobs are listed too
// (C = release + period), subject to the materialization limit.
CompletionMap completion_times(const Instance& inst, const Schedule& s, bool include_fifo_streams = false);

// The machine's free time, as sorted disjoint gaps, with stream intervals
// removed. claim() hands out the earliest free time at or after `from`.
class FreeTime {
 public:
  FreeTime() = default;
  // Free from `origin` onward, minus the stream intervals.
  FreeTime(const Rational& origin, const std::vector<StreamDescriptor>& blackouts);

  // Returns the completion time.
  Rational claim(const Rational& from, const Rational& amount, const JobId& id, std::vector<Slice>* out);

 private:
  struct Gap {
    Rational a;
    Rational b;
    bool unbounded = false;
  };
  std::vector<Gap> gaps_;
};

// At every moment run the released, unfinished job that comes first in
// `order`. Each job then occupies exactly the earliest proc units of
// free time after its release that higher-priority jobs left over, which
// is how it is computed.
Schedule build_priority_schedule(const Instance& inst, const std::vector<JobId>& order);

// Sorts by start and fuses touching slices of the same job.
void normalize_slices(std::vector<Slice>& slices);

}  // namespace fh
