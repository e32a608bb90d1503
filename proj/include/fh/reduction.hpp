#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fh/objectives.hpp"

namespace fh {

struct Variant {
  enum class Kind { Flow2, FlowInt, FlowFrac, Stretch2, StretchInt, StretchFrac };
  Kind kind = Kind::Flow2;
  NormExponent k = NormExponent::integer(2);

  static Variant make(Kind kind, const NormExponent& k);
  // "flow2", "flow-k", "flow-frac", "stretch2", "stretch-k", "stretch-frac".
  static Variant parse(const std::string& name, const std::string& k_text);
  std::string name() const;
  std::string label() const;

  Measure measure() const;
  bool is_stretch() const { return measure() == Measure::Stretch; }
  bool is_frac() const { return kind == Kind::FlowFrac || kind == Kind::StretchFrac; }
  bool is_int() const { return kind == Kind::FlowInt || kind == Kind::StretchInt; }
  bool is_two() const { return kind == Kind::Flow2 || kind == Kind::Stretch2; }
  ObjectiveKind objective() const { return {measure(), k}; }
};

struct ToyOverrides {
  std::optional<Rational> alpha, beta, rho, lambda, epsilon;
  bool any() const { return alpha || beta || rho || lambda || epsilon; }
  // "beta=64,rho=1/8"
  static ToyOverrides parse(const std::string& text);
};

struct ReductionParams {
  Variant variant;
  unsigned m = 0;
  Rational B;
  Rational alpha, beta, rho;
  Rational lambda;   // 1 for the k = 2 variants, where the release offset is plain beta
  Rational epsilon;  // 0 unless stretch
  Rational delta_s, delta_b;
  bool toy = false;
  ToyOverrides overrides;
  // Places where the realized constants differ from the printed settings.
  std::vector<std::string> deviations;

  // Start of the first closed interval I0 (it ends at 0).
  Rational i0_start() const;
  Rational release_of(const Rational& b) const;
  // s_i = iB + (i-1)alpha, start of closed interval I_i, i >= 1.
  Rational closed_start(unsigned i) const;
  // o_w = (w-1)(B+alpha), start of open window w, w >= 1.
  Rational open_start(unsigned w) const;
};

Rational default_epsilon(const Variant& v, unsigned m, const Rational& B);

// Smallest integer K >= 0 with m(B+3K)/(3m+1/2) <= b+K <= (B+3K)/2 for all b.
struct Normalized {
  ThreePartitionInstance tp;
  Integer shift;
};
Normalized normalize_3partition(const ThreePartitionInstance& raw);
bool in_tight_range(const ThreePartitionInstance& tp);

enum class TightenScheme { Scale, Shift };
// Scale: b' = B/3 + c(b - B/3) with c = eps / max|b - B/3|; triple sums
// are affine in c, so exactly the same triples sum to B.
ThreePartitionInstance tighten_for_stretch(const ThreePartitionInstance& tp, const Variant& v,
                                           TightenScheme scheme = TightenScheme::Scale,
                                           std::optional<Rational> epsilon = std::nullopt);

ReductionParams reduction_params(const ThreePartitionInstance& tp, const Variant& v,
                                 const ToyOverrides& toy = {}, long bits = kDefaultBits);

// Type 1 jobs "1".."3m", streams "I0".."I{m-1}".
Instance build_instance(const ThreePartitionInstance& tp, const ReductionParams& p);

struct Component {
  std::string name;
  ObjectiveValue value;
};

struct RecomputedThreshold {
  Partition partition;
  std::vector<Component> components;  // f23, closed[0..m-1], open[1..m]
  ObjectiveValue total;
  ObjectiveValue f23;
  std::vector<ObjectiveValue> closed;  // index i = I_i
  std::vector<ObjectiveValue> open;    // index w-1 = window w
};

struct Threshold {
  std::vector<Component> printed;
  ObjectiveValue printed_total;
  // Absent when the instance has no valid partition.
  std::optional<RecomputedThreshold> recomputed;
  std::vector<std::string> notes;
};

// Exact cost of the partition schedule for p, with each open window charged
// for every job still waiting at its start.
RecomputedThreshold recomputed_threshold(const ThreePartitionInstance& tp, const ReductionParams& params,
                                         const Partition& p, long bits = kDefaultBits);

// Printed components per variant; the recomputed total is for `p` when
// given, otherwise the largest over all valid partitions.
Threshold threshold_f(const ThreePartitionInstance& tp, const ReductionParams& params,
                      const std::optional<Partition>& p = std::nullopt, long bits = kDefaultBits);

// Printed total only, for the comparisons reported in notes.
ObjectiveValue printed_threshold(const ThreePartitionInstance& tp, const ReductionParams& params,
                                 std::vector<Component>* parts = nullptr, long bits = kDefaultBits);

Schedule build_partition_schedule(const ThreePartitionInstance& tp, const Partition& partition,
                                  const ReductionParams& params);

struct NotPartitionLike {
  unsigned window = 0;
  unsigned count = 0;
  std::string reason;
};

struct Extraction {
  std::optional<Partition> partition;
  std::optional<NotPartitionLike> failure;
};

// Window w collects the Type 1 jobs completing in (end of I_{w-1}, end of I_w],
// the last window being unbounded; nothing may complete by time 0.
Extraction extract_partition(const Instance& inst, const ReductionParams& params, const Schedule& s);

}  // namespace fh
