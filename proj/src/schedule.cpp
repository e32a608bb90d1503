#include "fh/schedule.hpp"

#include <algorithm>
#include <set>

namespace fh {

const char* policy_name(StreamPolicy p) {
  return p == StreamPolicy::FifoAsReleased ? "FifoAsReleased" : "Materialized";
}

StreamPolicy parse_policy(const std::string& s) {
  if (s == "FifoAsReleased") return StreamPolicy::FifoAsReleased;
  if (s == "Materialized") return StreamPolicy::Materialized;
  throw Error(ErrorKind::ParseError, "unknown stream policy '" + s + "'");
}

StreamPolicy Schedule::policy_of(const JobId& stream) const {
  auto it = stream_policy.find(stream);
  return it == stream_policy.end() ? StreamPolicy::FifoAsReleased : it->second;
}

std::vector<Job> effective_jobs(const Instance& inst, const Schedule& s, unsigned long limit) {
  std::vector<Job> jobs = inst.jobs;
  for (const auto& st : inst.streams)
    if (s.policy_of(st.id) == StreamPolicy::Materialized)
      for (auto& j : materialize_stream(st, limit)) jobs.push_back(std::move(j));
  return jobs;
}

void normalize_slices(std::vector<Slice>& slices) {
  std::sort(slices.begin(), slices.end(), [](const Slice& a, const Slice& b) {
    if (a.from != b.from) return a.from < b.from;
    return id_less(a.job, b.job);
  });
  std::vector<Slice> out;
  for (auto& sl : slices) {
    if (!out.empty() && out.back().job == sl.job && out.back().to == sl.from)
      out.back().to = sl.to;
    else
      out.push_back(std::move(sl));
  }
  slices = std::move(out);
}

Violations validate_schedule(const Instance& inst, const Schedule& s) {
  Violations out;
  for (const auto& [id, pol] : s.stream_policy) {
    bool known = std::any_of(inst.streams.begin(), inst.streams.end(), [&](auto& st) { return st.id == id; });
    if (!known) out.push_back({"known stream", "policy for unknown stream '" + id + "'"});
  }
  std::vector<Job> jobs;
  try {
    jobs = effective_jobs(inst, s);
  } catch (const Error& e) {
    out.push_back({"materializable streams", e.what()});
    return out;
  }
  std::map<JobId, const Job*> by_id;
  for (const auto& j : jobs) by_id[j.id] = &j;
  std::map<JobId, Rational> done;

  std::vector<const Slice*> sorted;
  for (const auto& sl : s.slices) sorted.push_back(&sl);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->from < b->from; });

  for (const Slice* sl : sorted) {
    if (!(sl->from < sl->to))
      out.push_back({"from < to", "slice of '" + sl->job + "' at " + to_string(sl->from)});
    auto it = by_id.find(sl->job);
    if (it == by_id.end()) {
      out.push_back({"known job", "slice for unknown job '" + sl->job + "'"});
      continue;
    }
    if (sl->from < it->second->release)
      out.push_back({"from >= release", "job '" + sl->job + "' runs at " + to_string(sl->from) +
                                            " before release " + to_string(it->second->release)});
    done[sl->job] += sl->to - sl->from;
  }
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->from < sorted[i - 1]->to)
      out.push_back({"disjoint slices", "'" + sorted[i - 1]->job + "' and '" + sorted[i]->job + "' overlap at " +
                                            to_string(sorted[i]->from)});
  for (const auto& st : inst.streams) {
    if (s.policy_of(st.id) != StreamPolicy::FifoAsReleased) continue;
    for (const Slice* sl : sorted)
      if (sl->from < st.end && st.start < sl->to)
        out.push_back({"stream exclusivity", "slice of '" + sl->job + "' overlaps stream '" + st.id + "'"});
  }
  for (const auto& j : jobs) {
    Rational d = done.count(j.id) ? done[j.id] : Rational(0);
    if (d < j.proc)
      out.push_back({"full processing", "job '" + j.id + "' processed " + to_string(d) + " of " + to_string(j.proc)});
    else if (d > j.proc)
      out.push_back({"no excess processing", "job '" + j.id + "' processed " + to_string(d) + " of " +
                                                 to_string(j.proc)});
  }
  return out;
}

CompletionMap completion_times(const Instance& inst, const Schedule& s, bool include_fifo_streams) {
  std::vector<Job> jobs = effective_jobs(inst, s);
  std::map<JobId, std::vector<const Slice*>> per_job;
  for (const auto& sl : s.slices) per_job[sl.job].push_back(&sl);
  CompletionMap c;
  for (const auto& j : jobs) {
    auto& list = per_job[j.id];
    std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->from < b->from; });
    Rational acc = 0;
    bool finished = false;
    for (const Slice* sl : list) {
      Rational len = sl->to - sl->from;
      if (acc + len >= j.proc) {
        c[j.id] = sl->from + (j.proc - acc);
        finished = true;
        break;
      }
      acc += len;
    }
    if (!finished)
      throw Error(ErrorKind::IncompleteJob, "job '" + j.id + "' processed " + to_string(acc) + " of " +
                                                to_string(j.proc));
  }
  if (include_fifo_streams)
    for (const auto& st : inst.streams)
      if (s.policy_of(st.id) == StreamPolicy::FifoAsReleased)
        for (const auto& j : materialize_stream(st, kDefaultMaterializeLimit)) c[j.id] = j.release + st.period;
  return c;
}

FreeTime::FreeTime(const Rational& origin, const std::vector<StreamDescriptor>& blackouts) {
  std::vector<const StreamDescriptor*> bs;
  for (const auto& b : blackouts) bs.push_back(&b);
  std::sort(bs.begin(), bs.end(), [](auto* a, auto* b) { return a->start < b->start; });
  Rational cur = origin;
  for (auto* b : bs) {
    if (cur < b->start) gaps_.push_back({cur, b->start, false});
    if (cur < b->end) cur = b->end;
  }
  gaps_.push_back({cur, cur, true});
}

Rational FreeTime::claim(const Rational& from, const Rational& amount, const JobId& id, std::vector<Slice>* out) {
  Rational need = amount;
  Rational finish = from;
  std::vector<Gap> next;
  next.reserve(gaps_.size() + 1);
  for (auto& g : gaps_) {
    if (sgn(need) == 0 || (!g.unbounded && g.b <= from)) {
      next.push_back(std::move(g));
      continue;
    }
    Rational start = g.a < from ? from : g.a;
    Rational avail = g.unbounded ? need : g.b - start;
    Rational take = avail < need ? avail : need;
    if (sgn(take) <= 0) {
      next.push_back(std::move(g));
      continue;
    }
    Rational stop = start + take;
    if (out) out->push_back({start, stop, id});
    need -= take;
    finish = stop;
    if (g.a < start) next.push_back({g.a, start, false});
    if (g.unbounded)
      next.push_back({stop, stop, true});
    else if (stop < g.b)
      next.push_back({stop, g.b, false});
  }
  gaps_ = std::move(next);
  return finish;
}

Schedule build_priority_schedule(const Instance& inst, const std::vector<JobId>& order) {
  std::set<JobId> want, have;
  for (const auto& j : inst.jobs) want.insert(j.id);
  for (const auto& id : order)
    if (!have.insert(id).second) throw Error(ErrorKind::InvalidArgument, "order repeats '" + id + "'");
  if (want != have) throw Error(ErrorKind::InvalidArgument, "order must list exactly the explicit jobs");

  Schedule s;
  for (const auto& st : inst.streams) s.stream_policy[st.id] = StreamPolicy::FifoAsReleased;
  if (inst.jobs.empty()) return s;
  Rational origin = inst.jobs.front().release;
  for (const auto& j : inst.jobs) origin = std::min(origin, j.release);
  for (const auto& st : inst.streams) origin = std::min(origin, st.start);
  FreeTime free(origin, inst.streams);
  for (const auto& id : order) {
    const Job* j = inst.find_job(id);
    free.claim(j->release, j->proc, j->id, &s.slices);
  }
  normalize_slices(s.slices);
  return s;
}

}  // namespace fh
