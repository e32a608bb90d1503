#include "fh/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace fh {

bool id_less(const JobId& a, const JobId& b) {
  size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    bool da = digit(a[i]), db = digit(b[j]);
    if (da != db) return da;
    if (da) {
      size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (ie - is != je - js) return ie - is < je - js;
      int c = a.compare(is, ie - is, b, js, je - js);
      if (c != 0) return c < 0;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((i < a.size()) != (j < b.size())) return i >= a.size();
  return a < b;
}

const Job* Instance::find_job(const JobId& id) const {
  for (const auto& j : jobs)
    if (j.id == id) return &j;
  return nullptr;
}

Violations validate_instance(const Instance& inst) {
  Violations out;
  std::set<JobId> seen;
  auto note_id = [&](const JobId& id) {
    if (!seen.insert(id).second) out.push_back({"unique ids", "duplicate id '" + id + "'"});
  };
  for (const auto& j : inst.jobs) {
    note_id(j.id);
    if (sgn(j.proc) <= 0) out.push_back({"proc > 0", "job '" + j.id + "' has proc " + to_string(j.proc)});
  }
  for (const auto& s : inst.streams) {
    note_id(s.id);
    if (!(s.start < s.end)) out.push_back({"start < end", "stream '" + s.id + "'"});
    if (sgn(s.period) <= 0) {
      out.push_back({"period > 0", "stream '" + s.id + "'"});
      continue;
    }
    if (s.size != s.period) out.push_back({"size = period", "stream '" + s.id + "'"});
    Rational c = s.count();
    if (c.get_den() != 1 || sgn(c) <= 0)
      out.push_back({"integral stream count", "stream '" + s.id + "' count " + to_string(c)});
  }
  std::vector<const StreamDescriptor*> order;
  for (const auto& s : inst.streams) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->start < b->start; });
  for (size_t i = 1; i < order.size(); ++i)
    if (order[i]->start < order[i - 1]->end)
      out.push_back({"disjoint stream intervals", "'" + order[i - 1]->id + "' and '" + order[i]->id + "'"});
  return out;
}

std::vector<Job> materialize_stream(const StreamDescriptor& s, unsigned long limit) {
  if (limit == 0) throw Error(ErrorKind::InvalidArgument, "limit must be positive");
  Rational c = s.count();
  if (c.get_den() != 1 || sgn(c) <= 0)
    throw Error(ErrorKind::InvalidArgument, "stream '" + s.id + "' has non-integral count " + to_string(c));
  if (c > limit)
    throw Error(ErrorKind::TooMany, "stream '" + s.id + "' has " + to_string(c) + " jobs, limit " +
                                        std::to_string(limit));
  unsigned long n = c.get_num().get_ui();
  std::vector<Job> jobs;
  jobs.reserve(n);
  for (unsigned long j = 0; j < n; ++j)
    jobs.push_back({s.id + "#" + std::to_string(j), s.start + Rational(j) * s.period, s.size});
  return jobs;
}

Instance materialize_all(const Instance& inst, unsigned long limit) {
  Instance out;
  out.jobs = inst.jobs;
  Rational total = 0;
  for (const auto& s : inst.streams) total += s.count();
  if (total > limit)
    throw Error(ErrorKind::TooMany, "streams hold " + to_string(total) + " jobs, limit " + std::to_string(limit));
  for (const auto& s : inst.streams)
    for (auto& j : materialize_stream(s, limit)) out.jobs.push_back(std::move(j));
  return out;
}

Violations validate_3partition(const ThreePartitionInstance& tp) {
  Violations out;
  if (tp.m == 0) out.push_back({"m >= 1", "m = 0"});
  if (tp.elements.size() != 3 * tp.m)
    out.push_back({"3m elements", std::to_string(tp.elements.size()) + " elements for m = " + std::to_string(tp.m)});
  Rational sum = 0;
  for (size_t i = 0; i < tp.elements.size(); ++i) {
    const auto& b = tp.elements[i];
    sum += b;
    if (sgn(b) <= 0) out.push_back({"b > 0", "element " + std::to_string(i + 1)});
    if (b > tp.B / 2) out.push_back({"b <= B/2", "element " + std::to_string(i + 1) + " = " + to_string(b)});
  }
  if (sum != Rational(tp.m) * tp.B) out.push_back({"sum = mB", "sum is " + to_string(sum)});
  return out;
}

bool is_partition_valid(const ThreePartitionInstance& tp, const Partition& p) {
  if (p.groups.size() != tp.m) return false;
  std::vector<bool> used(tp.elements.size() + 1, false);
  for (const auto& g : p.groups) {
    Rational s = 0;
    for (unsigned idx : g) {
      if (idx < 1 || idx > tp.elements.size() || used[idx]) return false;
      used[idx] = true;
      s += tp.elements[idx - 1];
    }
    if (s != tp.B) return false;
  }
  return true;
}

Partition canonical(const Partition& p) {
  Partition c = p;
  for (auto& g : c.groups) std::sort(g.begin(), g.end());
  std::sort(c.groups.begin(), c.groups.end());
  return c;
}

std::vector<Partition> enumerate_partitions(const ThreePartitionInstance& tp, size_t cap) {
  std::vector<Partition> out;
  const unsigned n = static_cast<unsigned>(tp.elements.size());
  if (n != 3 * tp.m) return out;
  std::vector<bool> used(n, false);
  Partition cur;
  // The smallest unused index always opens the next group, so each
  // partition is produced once and already in canonical order.
  std::function<void()> rec = [&]() {
    if (out.size() >= cap) return;
    unsigned a = 0;
    while (a < n && used[a]) ++a;
    if (a == n) {
      out.push_back(cur);
      return;
    }
    used[a] = true;
    for (unsigned b = a + 1; b < n; ++b) {
      if (used[b]) continue;
      used[b] = true;
      for (unsigned c = b + 1; c < n; ++c) {
        if (used[c]) continue;
        if (tp.elements[a] + tp.elements[b] + tp.elements[c] != tp.B) continue;
        used[c] = true;
        cur.groups.push_back({a + 1, b + 1, c + 1});
        rec();
        cur.groups.pop_back();
        used[c] = false;
      }
      used[b] = false;
    }
    used[a] = false;
  };
  rec();
  return out;
}

}  // namespace fh
