#include "fh/objectives.hpp"

#include <algorithm>

namespace fh {

const char* measure_name(Measure m) { return m == Measure::Flow ? "flow" : "stretch"; }

Measure parse_measure(const std::string& s) {
  if (s == "flow") return Measure::Flow;
  if (s == "stretch") return Measure::Stretch;
  throw Error(ErrorKind::ParseError, "objective must be flow or stretch, got '" + s + "'");
}

ObjectiveValue ObjectiveValue::of(const Rational& q) {
  ObjectiveValue v;
  v.exact = q;
  return v;
}

ObjectiveValue ObjectiveValue::of(const Enclosure& e) {
  ObjectiveValue v;
  v.enclosure = e;
  return v;
}

Enclosure ObjectiveValue::as_enclosure(long bits) const {
  if (exact) return Enclosure::exact(*exact, bits);
  return *enclosure;
}

std::string ObjectiveValue::str() const {
  if (exact) return to_string(*exact);
  return "[" + enclosure->lower_str() + ", " + enclosure->upper_str() + "]";
}

ObjectiveValue operator+(const ObjectiveValue& a, const ObjectiveValue& b) {
  if (a.exact && b.exact) return ObjectiveValue::of(*a.exact + *b.exact);
  long bits = std::max(a.enclosure ? a.enclosure->bits() : 0L, b.enclosure ? b.enclosure->bits() : 0L);
  return ObjectiveValue::of(a.as_enclosure(bits) + b.as_enclosure(bits));
}

ObjectiveValue operator-(const ObjectiveValue& a, const ObjectiveValue& b) {
  if (a.exact && b.exact) return ObjectiveValue::of(*a.exact - *b.exact);
  long bits = std::max(a.enclosure ? a.enclosure->bits() : 0L, b.enclosure ? b.enclosure->bits() : 0L);
  return ObjectiveValue::of(a.as_enclosure(bits) - b.as_enclosure(bits));
}

ObjectiveValue power_term(const Rational& base, const NormExponent& k, long bits) {
  switch (k.kind) {
    case NormExponent::Kind::Integer: return ObjectiveValue::of(pow_int(base, k.k_int));
    case NormExponent::Kind::Fractional: return ObjectiveValue::of(pow_frac(base, k.k_frac, bits));
    case NormExponent::Kind::Infinity: break;
  }
  throw Error(ErrorKind::InvalidArgument, "no power term under the max norm");
}

ObjectiveValue increase_over_interval(const Job& job, const Rational& b, const Rational& e, const ObjectiveKind& obj,
                                      long bits) {
  if (b > e) throw Error(ErrorKind::InvalidArgument, "interval end before start");
  if (job.release > e) throw Error(ErrorKind::InvalidArgument, "interval ends before the job is released");
  if (obj.exponent.is_infinity()) throw Error(ErrorKind::InvalidArgument, "increase is undefined for the max norm");
  Rational late = e - job.release;
  Rational early = b - std::min(b, job.release);
  if (obj.measure == Measure::Stretch) {
    late /= job.proc;
    early /= job.proc;
  }
  if (b == e) return obj.exponent.is_fractional() ? ObjectiveValue::of(Enclosure(bits)) : ObjectiveValue::of(0);
  return power_term(late, obj.exponent, bits) - power_term(early, obj.exponent, bits);
}

ObjectiveValue stream_cost_fifo(const StreamDescriptor& s, const ObjectiveKind& obj, long bits) {
  Rational count = s.count();
  if (obj.exponent.is_infinity())
    return ObjectiveValue::of(obj.measure == Measure::Flow ? s.period : Rational(1));
  if (obj.measure == Measure::Stretch) return ObjectiveValue::of(count);
  ObjectiveValue each = power_term(s.period, obj.exponent, bits);
  if (each.exact) return ObjectiveValue::of(count * *each.exact);
  return ObjectiveValue::of(*each.enclosure * count);
}

Rational job_measure(const Job& j, const Rational& completion, Measure m) {
  Rational age = completion - j.release;
  return m == Measure::Flow ? age : Rational(age / j.proc);
}

ObjectiveValue knorm(const Instance& inst, const Schedule& s, const ObjectiveKind& obj, long bits) {
  CompletionMap c = completion_times(inst, s);
  std::vector<Job> jobs = effective_jobs(inst, s);
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return id_less(a.id, b.id); });
  std::vector<const StreamDescriptor*> fifo;
  for (const auto& st : inst.streams)
    if (s.policy_of(st.id) == StreamPolicy::FifoAsReleased) fifo.push_back(&st);
  std::sort(fifo.begin(), fifo.end(), [](auto* a, auto* b) { return id_less(a->id, b->id); });

  if (obj.exponent.is_infinity()) {
    Rational best = 0;
    for (const auto& j : jobs) best = std::max(best, job_measure(j, c.at(j.id), obj.measure));
    for (auto* st : fifo) best = std::max(best, *stream_cost_fifo(*st, obj, bits).exact);
    return ObjectiveValue::of(best);
  }
  ObjectiveValue total = obj.exponent.is_fractional() ? ObjectiveValue::of(Enclosure(bits)) : ObjectiveValue::of(0);
  for (const auto& j : jobs) total = total + power_term(job_measure(j, c.at(j.id), obj.measure), obj.exponent, bits);
  for (auto* st : fifo) total = total + stream_cost_fifo(*st, obj, bits);
  return total;
}

}  // namespace fh
