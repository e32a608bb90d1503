#include "fh/solvers.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <omp.h>

namespace fh {

namespace {

// Runs the active job that minimizes `key`; decisions happen only at
// releases and completions.
template <class Key>
std::vector<Slice> simulate(const std::vector<Job>& jobs, Key key) {
  std::vector<size_t> by_release(jobs.size());
  std::iota(by_release.begin(), by_release.end(), 0);
  std::sort(by_release.begin(), by_release.end(), [&](size_t a, size_t b) {
    if (jobs[a].release != jobs[b].release) return jobs[a].release < jobs[b].release;
    return id_less(jobs[a].id, jobs[b].id);
  });
  std::vector<Rational> rem(jobs.size());
  for (size_t i = 0; i < jobs.size(); ++i) rem[i] = jobs[i].proc;
  std::vector<size_t> active;
  std::vector<Slice> slices;
  size_t next = 0;
  Rational t = jobs.empty() ? Rational(0) : jobs[by_release[0]].release;
  while (next < by_release.size() || !active.empty()) {
    while (next < by_release.size() && jobs[by_release[next]].release <= t) active.push_back(by_release[next++]);
    if (active.empty()) {
      t = jobs[by_release[next]].release;
      continue;
    }
    auto it = std::min_element(active.begin(), active.end(), [&](size_t a, size_t b) {
      auto ka = key(a, rem[a]), kb = key(b, rem[b]);
      if (ka != kb) return ka < kb;
      return id_less(jobs[a].id, jobs[b].id);
    });
    size_t j = *it;
    Rational run = rem[j];
    if (next < by_release.size()) run = std::min(run, Rational(jobs[by_release[next]].release - t));
    slices.push_back({t, t + run, jobs[j].id});
    t += run;
    rem[j] -= run;
    if (sgn(rem[j]) == 0) active.erase(it);
  }
  normalize_slices(slices);
  return slices;
}

Schedule materialized_schedule(const Instance& inst, std::vector<Slice> slices) {
  Schedule s;
  s.slices = std::move(slices);
  for (const auto& st : inst.streams) s.stream_policy[st.id] = StreamPolicy::Materialized;
  return s;
}

}  // namespace

SolveResult srpt(const Instance& inst, unsigned long limit) {
  Instance flat = materialize_all(inst, limit);
  SolveResult r;
  r.schedule = materialized_schedule(inst, simulate(flat.jobs, [](size_t, const Rational& rem) { return rem; }));
  r.value = knorm(inst, r.schedule, {Measure::Flow, NormExponent::integer(1)});
  r.optimal = true;
  r.algorithm = "srpt";
  return r;
}

EdfOutcome edf_feasible(const Instance& inst, const std::map<JobId, Rational>& deadlines, unsigned long limit) {
  Instance flat = materialize_all(inst, limit);
  std::vector<Rational> d;
  for (const auto& j : flat.jobs) {
    auto it = deadlines.find(j.id);
    if (it == deadlines.end()) throw Error(ErrorKind::InvalidArgument, "no deadline for job '" + j.id + "'");
    d.push_back(it->second);
  }
  EdfOutcome out;
  out.schedule = materialized_schedule(inst, simulate(flat.jobs, [&](size_t i, const Rational&) { return d[i]; }));
  CompletionMap c = completion_times(inst, out.schedule);

  // Earliest missed deadline, ties by id.
  std::optional<size_t> miss;
  for (size_t i = 0; i < flat.jobs.size(); ++i) {
    if (c.at(flat.jobs[i].id) <= d[i]) continue;
    if (!miss || d[i] < d[*miss] || (d[i] == d[*miss] && id_less(flat.jobs[i].id, flat.jobs[*miss].id))) miss = i;
  }
  if (!miss) {
    out.feasible = true;
    return out;
  }
  // Walk back from the missed deadline through the busy stretch spent on
  // jobs due no later than it; everything run there was released inside.
  const Rational& dl = d[*miss];
  std::map<JobId, Rational> dl_of;
  for (size_t i = 0; i < flat.jobs.size(); ++i) dl_of[flat.jobs[i].id] = d[i];
  Rational t1 = dl;
  for (bool moved = true; moved;) {
    moved = false;
    for (const auto& sl : out.schedule.slices)
      if (sl.from < t1 && t1 <= sl.to && dl_of[sl.job] <= dl) {
        t1 = sl.from;
        moved = true;
      }
  }
  EdfWitness w{t1, dl, 0, dl - t1, flat.jobs[*miss].id};
  for (size_t i = 0; i < flat.jobs.size(); ++i)
    if (flat.jobs[i].release >= t1 && d[i] <= dl) w.demand += flat.jobs[i].proc;
  out.witness = w;
  return out;
}

std::vector<Rational> minmax_candidates(const std::vector<Job>& jobs, Measure m) {
  auto weight = [&](const Job& j) { return m == Measure::Flow ? Rational(1) : j.proc; };
  std::set<Rational> out;
  for (const auto& a : jobs)
    for (const auto& b : jobs) {
      Rational wb = weight(b);
      std::vector<Rational> taus;
      for (const auto& j : jobs)
        if (weight(j) != wb) taus.push_back((b.release - j.release) / (weight(j) - wb));
      std::sort(taus.begin(), taus.end());
      taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
      std::vector<Rational> samples;
      if (taus.empty()) {
        samples.push_back(1);
      } else {
        samples.push_back(taus.front() - 1);
        for (size_t i = 0; i < taus.size(); ++i) {
          samples.push_back(taus[i]);
          if (i + 1 < taus.size()) samples.push_back((taus[i] + taus[i + 1]) / 2);
        }
        samples.push_back(taus.back() + 1);
      }
      for (const auto& F : samples) {
        Rational demand = 0;
        for (const auto& j : jobs)
          if (j.release >= a.release && j.release + F * weight(j) <= b.release + F * wb) demand += j.proc;
        Rational c = (a.release + demand - b.release) / wb;
        if (sgn(c) > 0) out.insert(c);
      }
    }
  return {out.begin(), out.end()};
}

SolveResult minimize_max(const Instance& inst, Measure m, unsigned long limit) {
  Instance flat = materialize_all(inst, limit);
  SolveResult r;
  r.algorithm = m == Measure::Flow ? "edf-minmax-flow" : "edf-minmax-stretch";
  r.optimal = true;
  if (flat.jobs.empty()) {
    r.schedule = materialized_schedule(inst, {});
    r.value = ObjectiveValue::of(0);
    return r;
  }
  auto deadlines = [&](const Rational& F) {
    std::map<JobId, Rational> d;
    for (const auto& j : flat.jobs) d[j.id] = j.release + F * (m == Measure::Flow ? Rational(1) : j.proc);
    return d;
  };
  std::vector<Rational> cand = minmax_candidates(flat.jobs, m);
  size_t lo = 0, hi = cand.size() - 1;
  if (!edf_feasible(flat, deadlines(cand[hi])).feasible)
    throw Error(ErrorKind::InvalidArgument, "no candidate is feasible");
  while (lo < hi) {
    size_t mid = lo + (hi - lo) / 2;
    if (edf_feasible(flat, deadlines(cand[mid])).feasible)
      hi = mid;
    else
      lo = mid + 1;
  }
  EdfOutcome best = edf_feasible(flat, deadlines(cand[lo]));
  r.schedule = materialized_schedule(inst, best.schedule.slices);
  r.value = knorm(inst, r.schedule, {m, NormExponent::infinity()});
  if (*r.value.exact != cand[lo])
    throw Error(ErrorKind::InvalidArgument, "EDF schedule does not attain the optimal bound");
  return r;
}

// ---- brute force ----------------------------------------------------------

namespace {

struct ExactScorer {
  Measure m;
  NormExponent k;

  using Value = Rational;
  bool is_max() const { return k.is_infinity(); }
  Value zero() const { return 0; }
  Value term(const Job& j, const Rational& c) const {
    Rational x = job_measure(j, c, m);
    return is_max() ? x : pow_int(x, k.k_int);
  }
  Value smallest_term(const Job& j) const {
    Rational x = m == Measure::Flow ? j.proc : Rational(1);
    return is_max() ? x : pow_int(x, k.k_int);
  }
  void add(Value& acc, const Value& t) const {
    if (is_max())
      acc = std::max(acc, t);
    else
      acc += t;
  }
  // Admissible bound reached: the incumbent is at least as good.
  bool prune(const Value& bound, const Value& inc) const { return bound >= inc; }
  bool better(const Value& v, const Value& inc, bool*) const { return v < inc; }
};

// Fractional exponent: keeps the per-job bases so that ties can be
// recognized exactly and sums re-evaluated at higher precision.
struct FracScorer {
  Measure m;
  Rational k;
  long bits;

  struct Value {
    Enclosure sum;
    std::vector<Rational> bases;
  };
  bool is_max() const { return false; }
  Value zero() const { return {Enclosure(bits), {}}; }
  Value term(const Job& j, const Rational& c) const {
    Rational x = job_measure(j, c, m);
    return {pow_frac(x, k, bits), {x}};
  }
  Value smallest_term(const Job& j) const {
    return term(j, j.release + j.proc);
  }
  void add(Value& acc, const Value& t) const {
    acc.sum = acc.sum + t.sum;
    acc.bases.insert(acc.bases.end(), t.bases.begin(), t.bases.end());
  }
  bool prune(const Value& bound, const Value& inc) const { return cmp_certified(bound.sum, inc.sum) == Cmp::Greater; }
  bool better(const Value& v, const Value& inc, bool* uncertain) const {
    Cmp c = cmp_certified(v.sum, inc.sum);
    if (c != Cmp::Unknown) return c == Cmp::Less;
    auto a = v.bases, b = inc.bases;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return false;
    for (long p = bits * 2; p <= kCeilingBits; p *= 2) {
      Enclosure sa(p), sb(p);
      for (const auto& x : a) sa = sa + pow_frac(x, k, p);
      for (const auto& x : b) sb = sb + pow_frac(x, k, p);
      c = cmp_certified(sa, sb);
      if (c != Cmp::Unknown) return c == Cmp::Less;
    }
    *uncertain = true;
    return false;
  }
};

template <class Scorer>
struct Search {
  using Value = typename Scorer::Value;

  const std::vector<Job>& jobs;
  const Scorer& sc;
  std::optional<Value> best;
  std::vector<size_t> best_order;
  bool uncertain = false;

  std::vector<size_t> prefix;
  std::vector<bool> used;

  Value bound(const Value& partial) const {
    Value b = partial;
    for (size_t i = 0; i < jobs.size(); ++i)
      if (!used[i]) sc.add(b, sc.smallest_term(jobs[i]));
    return b;
  }

  void dfs(const FreeTime& ft, const Value& partial) {
    if (prefix.size() == jobs.size()) {
      if (!best || sc.better(partial, *best, &uncertain)) {
        best = partial;
        best_order = prefix;
      }
      return;
    }
    for (size_t i = 0; i < jobs.size(); ++i) {
      if (used[i]) continue;
      FreeTime next = ft;
      Rational c = next.claim(jobs[i].release, jobs[i].proc, jobs[i].id, nullptr);
      Value v = partial;
      sc.add(v, sc.term(jobs[i], c));
      used[i] = true;
      if (!best || !sc.prune(bound(v), *best)) {
        prefix.push_back(i);
        dfs(next, v);
        prefix.pop_back();
      }
      used[i] = false;
    }
  }

  void run_from(const FreeTime& ft, size_t first) {
    used.assign(jobs.size(), false);
    prefix.clear();
    FreeTime next = ft;
    Rational c = next.claim(jobs[first].release, jobs[first].proc, jobs[first].id, nullptr);
    Value v = sc.zero();
    sc.add(v, sc.term(jobs[first], c));
    used[first] = true;
    prefix.push_back(first);
    if (!best || !sc.prune(bound(v), *best)) dfs(next, v);
  }
};

template <class Scorer>
std::pair<std::vector<size_t>, bool> search_orders(const std::vector<Job>& jobs, const FreeTime& ft, const Scorer& sc,
                                                   const BruteOptions& opt) {
  const size_t n = jobs.size();
  if (n == 0) return {{}, false};
  if (opt.serial) {
    Search<Scorer> s{jobs, sc, std::nullopt, {}, false, {}, {}};
    for (size_t f = 0; f < n; ++f) s.run_from(ft, f);
    return {s.best_order, s.uncertain};
  }
  // One independent search per first job; each keeps its own incumbent so
  // the merged answer does not depend on scheduling of the workers.
  std::vector<Search<Scorer>> parts;
  parts.reserve(n);
  for (size_t f = 0; f < n; ++f) parts.push_back(Search<Scorer>{jobs, sc, std::nullopt, {}, false, {}, {}});
  int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long f = 0; f < static_cast<long>(n); ++f) parts[f].run_from(ft, static_cast<size_t>(f));

  size_t pick = 0;
  bool uncertain = parts[0].uncertain;
  for (size_t f = 1; f < n; ++f) {
    uncertain = uncertain || parts[f].uncertain;
    if (sc.better(*parts[f].best, *parts[pick].best, &uncertain)) pick = f;
  }
  return {parts[pick].best_order, uncertain};
}

}  // namespace

SolveResult brute_force_optimal(const Instance& inst, const ObjectiveKind& obj, const BruteOptions& opt) {
  if (inst.jobs.size() > opt.bound)
    throw Error(ErrorKind::TooLarge, std::to_string(inst.jobs.size()) + " jobs exceed the bound " +
                                         std::to_string(opt.bound));
  std::vector<Job> jobs = inst.jobs;
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return id_less(a.id, b.id); });
  Rational origin = 0;
  if (!jobs.empty()) origin = jobs.front().release;
  for (const auto& j : jobs) origin = std::min(origin, j.release);
  for (const auto& st : inst.streams) origin = std::min(origin, st.start);
  FreeTime ft(origin, inst.streams);

  std::pair<std::vector<size_t>, bool> found;
  if (obj.exponent.is_fractional())
    found = search_orders(jobs, ft, FracScorer{obj.measure, obj.exponent.k_frac, opt.bits}, opt);
  else
    found = search_orders(jobs, ft, ExactScorer{obj.measure, obj.exponent}, opt);

  SolveResult r;
  for (size_t i : found.first) r.order.push_back(jobs[i].id);
  r.schedule = build_priority_schedule(inst, r.order);
  r.value = knorm(inst, r.schedule, obj, opt.bits);
  r.optimal = true;
  r.certified = !found.second;
  r.algorithm = opt.serial ? "brute-force-serial" : "brute-force";
  return r;
}

SolveResult brute_force_optimal(const Instance& inst, const ObjectiveKind& obj, unsigned bound) {
  BruteOptions opt;
  opt.bound = bound;
  return brute_force_optimal(inst, obj, opt);
}

}  // namespace fh
