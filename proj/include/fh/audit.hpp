#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fh/reduction.hpp"

namespace fh {

struct CheckRecord {
  std::string name;
  // Descriptive anchor for the inequality being checked.
  std::string ref;
  std::string left;
  std::string right;
  Relation relation = Relation::Le;
  Verdict verdict = Verdict::Inconclusive;
  std::string notes;
};

// A printed-formula discrepancy. Notes never affect the verdicts.
struct Note {
  std::string cls;
  std::string text;
  std::vector<std::pair<std::string, std::string>> values;
};

struct AuditReport {
  std::string variant;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<CheckRecord> checks;
  std::vector<Note> notes;

  bool any_fail() const;
  size_t count(Verdict v) const;
  const CheckRecord* find(const std::string& name) const;
  bool has_note(const std::string& cls) const;
  // Checks by name; notes by class, stable.
  void sort();
  void merge(AuditReport other);
};

// Every dominance, slack, tail, count and side condition the hardness
// direction relies on, for the variant in `params`. The recomputed
// threshold is taken for `partition` when given, otherwise the largest
// over all valid partitions.
AuditReport check_parameter_dominance(const ThreePartitionInstance& tp, const ReductionParams& params,
                                      const std::optional<Partition>& partition = std::nullopt);

struct TaylorSample {
  Rational x;
  Rational y;
  Rational k;
};

// x in 1..8, several y > 2x each, k in {1/4, 1/2, 3/4}, plus x = 0 rows.
std::vector<TaylorSample> default_taylor_grid();

// (x+y)^k <= y^k + kx/y^(1-k) and (x+y)^k >= y^k + kx/y^(1-k) - k(1-k)x^2/(2y^(2-k)).
AuditReport check_taylor_bounds(const std::vector<TaylorSample>& samples);

enum class Hypothesis { TooFewCompleted, TooMuchVolume };
const char* hypothesis_name(Hypothesis h);

// The proof's lower bound on the increase during I_j under the hypothesis,
// against the charge for I_j plus the claimed slack.
CheckRecord check_closed_interval_lower_bound(const ThreePartitionInstance& tp, const ReductionParams& params,
                                              unsigned j, Hypothesis h);

// Cost of the partition schedule against the recomputed threshold; the
// printed total is reported in the notes.
CheckRecord check_forward_cost(const ThreePartitionInstance& tp, const Partition& partition,
                               const ReductionParams& params);

// Integer k >= 3 only: the side conditions and the end-to-end tail bound
// for interval I_i.
std::vector<CheckRecord> check_binomial_tail(const ReductionParams& params, const ThreePartitionInstance& tp,
                                             unsigned i);

inline constexpr unsigned kOracleJobCap = 8;

// Forward cost, build/extract round trip and, with the oracle, the
// brute-force optimum of the materialized instance.
AuditReport roundtrip(const ThreePartitionInstance& tp, const Partition& partition, const ReductionParams& params,
                      bool use_oracle, unsigned long limit = kDefaultMaterializeLimit);

// Dominance plus a forward check for every valid partition.
AuditReport audit_all(const ThreePartitionInstance& tp, const ReductionParams& params);

struct SuiteCase {
  ThreePartitionInstance tp;  // as audited, after tightening for stretch variants
  AuditReport report;
};

// audit_all over every tight integer YES instance with m in `ms` and
// B <= b_max, under the variant's sound parameters.
std::vector<SuiteCase> audit_suite(const Variant& v, const std::vector<unsigned>& ms, unsigned long b_max);

}  // namespace fh
