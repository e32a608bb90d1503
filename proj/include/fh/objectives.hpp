#pragma once

#include <optional>
#include <string>

#include "fh/schedule.hpp"

namespace fh {

enum class Measure { Flow, Stretch };
const char* measure_name(Measure m);
Measure parse_measure(const std::string& s);

struct ObjectiveKind {
  Measure measure = Measure::Flow;
  NormExponent exponent;
};

// Exact for integer k and for the max norm, an enclosure for fractional k.
struct ObjectiveValue {
  std::optional<Rational> exact;
  std::optional<Enclosure> enclosure;

  static ObjectiveValue of(const Rational& q);
  static ObjectiveValue of(const Enclosure& e);

  bool is_exact() const { return exact.has_value(); }
  Enclosure as_enclosure(long bits = kDefaultBits) const;
  std::string str() const;
};

ObjectiveValue operator+(const ObjectiveValue& a, const ObjectiveValue& b);
ObjectiveValue operator-(const ObjectiveValue& a, const ObjectiveValue& b);

// base^k for base >= 0.
ObjectiveValue power_term(const Rational& base, const NormExponent& k, long bits = kDefaultBits);

// (e - r)^k - (b - min(b, r))^k; for stretch both ages are divided by p first.
ObjectiveValue increase_over_interval(const Job& job, const Rational& b, const Rational& e, const ObjectiveKind& obj,
                                      long bits = kDefaultBits);

// count * rho^k for flow, count for stretch; rho (or 1) under the max norm.
ObjectiveValue stream_cost_fifo(const StreamDescriptor& s, const ObjectiveKind& obj, long bits = kDefaultBits);

// Per-job age (flow) or age / proc (stretch).
Rational job_measure(const Job& j, const Rational& completion, Measure m);

ObjectiveValue knorm(const Instance& inst, const Schedule& s, const ObjectiveKind& obj, long bits = kDefaultBits);

}  // namespace fh
